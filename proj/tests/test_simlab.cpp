#include "doctest.h"

#include "needd/simlab.hpp"

#include <cmath>
#include <numbers>

using namespace needd;

namespace
{

SimulationConfig small_config()
{
    SimulationConfig c;
    c.targets = {"heavisine", "bumps"};
    c.rsnr = {3.0, 7.0};
    c.n = 256;
    c.runs = 4;
    c.kmax = 128;
    c.seed = 99;
    return c;
}

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (std::size_t p = s.find("\r\n"); p != std::string::npos; p = s.find("\r\n", p + 2))
        ++n;
    return n;
}

} // namespace

TEST_CASE("test signals")
{
    const auto heavi = raw_target("heavisine");
    for (double x : {0.05, 0.25, 0.5, 0.9})
    {
        const double expect = 4.0 * std::sin(4.0 * std::numbers::pi * x) - (x > 0.3 ? 1.0 : -1.0) - (0.72 > x ? 1.0 : -1.0);
        CHECK(heavi(x) == doctest::Approx(expect).epsilon(1e-14).scale(1e-14));
    }

    const auto doppler = raw_target("doppler");
    const double x = 0.3;
    CHECK(doppler(x) == doctest::Approx(std::sqrt(x * (1 - x)) * std::sin(2.0 * std::numbers::pi * 1.05 / (x + 0.05))));

    // blocks is piecewise constant: seven jumps below 1/2 sum to 0.9
    const auto blocks = raw_target("blocks");
    CHECK(blocks(0.5) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(blocks(0.5 + 1e-6) == blocks(0.5 - 1e-6));
    CHECK(blocks(0.05) == 0.0);

    const auto bumps = raw_target("bumps");
    CHECK(bumps(0.1) > bumps(0.12));
    CHECK(bumps(0.5) >= 0.0);

    CHECK_THROWS_AS(raw_target("sawtooth"), std::invalid_argument);
    CHECK_THROWS_AS(raw_target("smooth"), std::invalid_argument);
    CHECK(target_names().size() == 4);
    CHECK(target_id("blocks") != target_id("doppler"));
    CHECK(target_id("smooth") >= 0);

    // unit population sd on x = i/n, no centering
    for (const auto& name : target_names())
    {
        const auto t = target_function(name, 512);
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 1; i <= 512; ++i)
        {
            const double v = t(static_cast<double>(i) / 512.0);
            s += v;
            s2 += v * v;
        }
        const double mean = s / 512.0;
        CAPTURE(name);
        CHECK(std::sqrt(s2 / 512.0 - mean * mean) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t(0.37) == doctest::Approx(t.scale * raw_target(name)(0.37)).epsilon(1e-15));
    }
}

TEST_CASE("smooth coefficients")
{
    const auto c = smooth_coefficients(20, 9, 2.0);
    REQUIRE(c.size() == 20);
    CHECK(c[0] == 1.0);
    CHECK(c[3] == doctest::Approx(-std::pow(4.0, -2.5)));
    CHECK(c[9] != 0.0);
    CHECK(c[10] == 0.0);
}

TEST_CASE("weighted losses")
{
    const std::size_t n = 1024;
    const std::vector<double> zero(n, 0.0), one(n, 1.0);
    double harmonic = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        harmonic += 1.0 / static_cast<double>(k);
    // (1/n) Σ 1/(4k/n) = H_n / 4
    CHECK(weighted_rmse(zero, one) == doctest::Approx(std::sqrt(harmonic / 4.0)).epsilon(1e-14));
    CHECK(weighted_rmse(zero, one) == doctest::Approx(1.3702).epsilon(1e-4));
    CHECK(weighted_l1(zero, one) == doctest::Approx(harmonic / 4.0).epsilon(1e-14));

    std::vector<double> f(n), g(n), g3(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        f[k] = std::sin(0.01 * static_cast<double>(k));
        g[k] = f[k] + std::cos(0.3 * static_cast<double>(k));
        g3[k] = f[k] + 3.0 * (g[k] - f[k]);
    }
    CHECK(weighted_rmse(f, g3) == doctest::Approx(3.0 * weighted_rmse(f, g)).epsilon(1e-13));
    CHECK(weighted_l1(f, g3) == doctest::Approx(3.0 * weighted_l1(f, g)).epsilon(1e-13));
    CHECK(weighted_rmse(f, f) == 0.0);
    CHECK_THROWS_AS(weighted_rmse(f, std::vector<double>(n - 1)), std::invalid_argument);
    CHECK_THROWS_AS(weighted_loss(f, g, 3), std::invalid_argument);
}

TEST_CASE("rate exponents")
{
    // L2, Wicksell ν = 1/2: s/(s + 1)
    CHECK(rate_exponent_jacobi(2.0, 0.5, 0.0, 2.0) == doctest::Approx(2.0 / 3.0));
    // above the critical p = 2 + 1/(α + 1/2) = 4 for α = 0
    CHECK(rate_exponent_jacobi(2.0, 0.5, 0.0, 6.0) == doctest::Approx(2.0 / (2.0 + 0.5 + 2.0 / 3.0)));
    CHECK(rate_exponent_jacobi(2.0, 0.5, 0.0, 3.9) == doctest::Approx(2.0 / 3.0));

    CHECK(rate_exponent_wavelet(1.0, 2.0, 1.0, 2.0) == doctest::Approx(1.0 / 2.5));
    // sparse regime: s < (ν + 1/2)(p/π - 1)
    CHECK(rate_exponent_wavelet(1.0, 1.0, 1.0, 4.0) == doctest::Approx((1.0 - 1.0 + 0.25) / (1.0 + 1.5 - 1.0)));

    // with π = p = 2 the general bound reduces to s/(s + ν + 1/2)
    CHECK(rate_exponent_jacobi_general(2.0, 2.0, 2.0, 0.5, 0.0, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(rate_exponent_jacobi_general(2.0, 1.5, 4.0, 0.5, 0.0, 1.0) <
          rate_exponent_jacobi_general(2.0, 4.0, 4.0, 0.5, 0.0, 1.0));

    const auto t = make_rate_target(2.0, 2.0, 2.0, 0.5, 2.0 / 3.0);
    CHECK(t.mu == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(make_rate_target(2.0, 2.0, 2.0, 0.5, 1.2), std::domain_error);
    CHECK_THROWS_AS(make_rate_target(2.0, 2.0, 2.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("configuration parsing")
{
    const SimulationConfig defaults;
    CHECK(defaults.resolved_jmax() == 8);
    CHECK(defaults.kappa == doctest::Approx(0.75 * std::numbers::sqrt2));
    CHECK_NOTHROW(defaults.validate());

    const auto c = parse_simulation_config(R"({
        "targets": ["doppler"], "rsnr": [4], "n": 512, "runs": 3, "seed": 5, "kmax": 256,
        "estimators": ["needd", "svd-adapt"],
        "frame": {"jmax": 6, "m": 3, "profile": "exponential"},
        "adaptive": {"gamma": 0.2, "logbase": 10},
        "needd": {"kappa": 1.5, "sigma": "node"}
    })");
    CHECK(c.targets == std::vector<std::string>{"doppler"});
    CHECK(c.n == 512);
    CHECK(c.runs == 3);
    CHECK(c.seed == 5);
    CHECK(c.resolved_jmax() == 6);
    CHECK(c.m == 3);
    CHECK(c.profile == ProfileKind::SmoothExponential);
    CHECK(c.estimators == std::vector<EstimatorKind>{EstimatorKind::NeedD, EstimatorKind::SvdAdaptive});
    CHECK(c.gamma == 0.2);
    CHECK(c.log_base == LogBase::Ten);
    CHECK(c.kappa == 1.5);
    CHECK(c.sigma_mode == SigmaMode::Node);

    CHECK_THROWS_AS(parse_simulation_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_simulation_config(R"({"estimators": ["lasso"]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_simulation_config(R"({"frame": {"alpha": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_simulation_config(R"({"kmax": 64, "frame": {"jmax": 7}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_simulation_config(R"({"runs": 0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_simulation_config(R"({"n": "many"})"), std::invalid_argument);
    CHECK_THROWS_AS(load_simulation_config("/nonexistent/config.json"), std::runtime_error);
    CHECK(to_string(parse_estimator("svd-proj")) == "svd-proj");
}

TEST_CASE("noiseless experiment recovers an in-budget target")
{
    auto c = small_config();
    c.targets = {"smooth"};
    c.rsnr = {5.0};
    c.runs = 2;
    c.epsilon_override = 0.0;
    const auto report = run_experiment(c);
    REQUIRE(report.cells.size() == 3);
    for (const auto& cell : report.cells)
    {
        CAPTURE(cell.estimator);
        CHECK(cell.epsilon == 0.0);
        CHECK(cell.mean_rmse <= 1e-6);
        CHECK(cell.mean_l1 <= 1e-6);
    }
}

TEST_CASE("experiment layout and determinism")
{
    const auto c = small_config();
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    CHECK(format_report(a, ReportFormat::Csv) == format_report(b, ReportFormat::Csv));
    CHECK(format_report(a, ReportFormat::Json) == format_report(b, ReportFormat::Json));

    REQUIRE(a.cells.size() == 2 * 2 * 3);
    CHECK(a.cells[0].target == "heavisine");
    CHECK(a.cells[0].estimator == "svd-proj");
    CHECK(a.cells[1].estimator == "svd-adapt");
    CHECK(a.cells[3].rsnr == 7.0);
    CHECK(a.cells[6].target == "bumps");
    for (const auto& cell : a.cells)
    {
        CHECK(cell.l1.size() == c.runs);
        CHECK(cell.seeds.size() == c.runs);
        CHECK(cell.epsilon > 0.0);
        for (std::size_t run = 0; run < c.runs; ++run)
            CHECK(cell.seeds[run] == derive_seed(c.seed, run, static_cast<std::uint64_t>(target_id(cell.target)),
                                                 cell.noise_index));
    }
    // more noise costs accuracy
    CHECK(a.cell("heavisine", 3.0, "needd").mean_rmse > a.cell("heavisine", 7.0, "needd").mean_rmse);
    // the same target and noise share ε across estimators
    CHECK(a.cells[0].epsilon == a.cells[2].epsilon);
    CHECK_THROWS_AS(a.cell("doppler", 3.0, "needd"), std::out_of_range);

    auto other = c;
    other.seed = 100;
    CHECK(format_report(run_experiment(other), ReportFormat::Csv) != format_report(a, ReportFormat::Csv));
}

TEST_CASE("report formats")
{
    auto c = small_config();
    c.runs = 2;
    const auto report = run_experiment(c);

    const auto csv = format_report(report, ReportFormat::Csv);
    CHECK(csv.rfind("loss,target,svd-proj rsnr=3,svd-proj rsnr=7,svd-adapt rsnr=3", 0) == 0);
    CHECK(count_lines(csv) == 1 + 2 * 2);
    CHECK(csv.find("\r\nL1,heavisine,") != std::string::npos);
    CHECK(csv.find("\r\nRMSE,bumps,") != std::string::npos);
    CHECK(csv.find('\n') == csv.find("\r\n") + 1);

    SimulationReport empty;
    empty.estimators = {"needd"};
    empty.rsnr = {5.0};
    CHECK(format_report(empty, ReportFormat::Csv) == "loss,target,needd rsnr=5\r\n");

    const auto back = parse_report_json(format_report(report, ReportFormat::Json));
    CHECK(back.targets == report.targets);
    CHECK(back.rsnr == report.rsnr);
    CHECK(back.estimators == report.estimators);
    CHECK(back.seed == report.seed);
    REQUIRE(back.cells.size() == report.cells.size());
    for (std::size_t i = 0; i < back.cells.size(); ++i)
    {
        CHECK(back.cells[i].mean_rmse == report.cells[i].mean_rmse);
        CHECK(back.cells[i].rmse == report.cells[i].rmse);
        CHECK(back.cells[i].seeds == report.cells[i].seeds);
    }
    CHECK(format_report(back, ReportFormat::Csv) == csv);
    CHECK_THROWS(parse_report_json("[1, 2]"));
}

TEST_CASE("rate study")
{
    const auto model = direct_model(63);
    const auto frame = build_frame(model.frame_basis(), Filter(make_profile(ProfileKind::PolynomialShape, 2)), 5);
    const auto truth = smooth_coefficients(model.dimension(), frame.budget_band(), 2.0);
    const auto target = make_rate_target(2.0, 2.0, 2.0, 0.0, 0.8);

    RateStudyConfig cfg;
    cfg.epsilons = {1e-1, 1e-2, 1e-3};
    CHECK_THROWS_AS(rate_study(model, frame, truth, cfg, target), std::invalid_argument);
    cfg.epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    cfg.runs = 5;
    CHECK_THROWS_AS(rate_study(model, frame, truth, cfg, target), std::invalid_argument);
    cfg.runs = 10;
    cfg.epsilons = {1e-2, 1e-2, 1e-2, 1e-2};
    CHECK_THROWS_AS(rate_study(model, frame, truth, cfg, target), std::domain_error);

    cfg.epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    const auto r = rate_study(model, frame, truth, cfg, target);
    REQUIRE(r.mean_error.size() == 5);
    for (std::size_t e = 1; e < r.mean_error.size(); ++e)
        CHECK(r.mean_error[e] < r.mean_error[e - 1]);
    CHECK(r.slope > 0.0);
    CHECK(r.slope <= 1.2);
    CHECK(r.slope_se >= 0.0);
    CHECK(r.gap == doctest::Approx(r.slope - 0.8));
    CHECK(rate_study(model, frame, truth, cfg, target).slope == r.slope);
}
