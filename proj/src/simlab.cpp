#include "needd/simlab.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace needd
{

// ---------------------------------------------------------------------------
// losses

double weighted_loss(std::span<const double> f_vals, std::span<const double> fhat_vals, int p)
{
    if (f_vals.size() != fhat_vals.size())
        throw std::invalid_argument("weighted_loss: length mismatch");
    if (p != 1 && p != 2)
        throw std::invalid_argument("weighted_loss: p must be 1 or 2");
    const std::size_t n = f_vals.size();
    if (n == 0)
        return 0.0;
    const double dn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double w = 1.0 / (4.0 * static_cast<double>(i + 1) / dn);
        const double d = std::abs(f_vals[i] - fhat_vals[i]);
        sum += (p == 1 ? d : d * d) * w;
    }
    sum /= dn;
    return p == 1 ? sum : std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// rate exponents

double rate_exponent_wavelet(double s, double pi, double nu, double p)
{
    if (s >= (nu + 0.5) * (p / pi - 1.0))
        return s / (s + nu + 0.5);
    return (s - 1.0 / pi + 1.0 / p) / (s + nu + 0.5 - 1.0 / pi);
}

double rate_exponent_jacobi(double s, double nu, double alpha, double p)
{
    if (p < 2.0 + 1.0 / (alpha + 0.5))
        return s / (s + nu + 0.5);
    return s / (s + nu + (alpha + 1.0) * (1.0 - 2.0 / p));
}

namespace
{

double mu_gamma(double s, double pi, double p, double nu, double gamma)
{
    return (s - 2.0 * (1.0 + gamma) * (1.0 / pi - 1.0 / p)) / (s + nu + 2.0 * (1.0 + gamma) * (0.5 - 1.0 / pi));
}

} // namespace

double rate_exponent_jacobi_general(double s, double pi, double p, double nu, double alpha, double beta)
{
    return std::min({s / (s + nu + 0.5), mu_gamma(s, pi, p, nu, alpha), mu_gamma(s, pi, p, nu, beta)});
}

double rate_log_power(double s, double pi, double p, double nu, double gamma)
{
    const double delta_p = 1.0 - (p - 2.0) * (gamma + 0.5);
    const double delta_s = s * delta_p - p * (2.0 * nu + 1.0) * (gamma + 1.0) * (1.0 / pi - 1.0 / p);
    if ((p - pi) * delta_p >= 0.0)
        return delta_p == 0.0 ? 1.0 : 0.0;
    return (gamma + 0.5) * (pi - p) / ((pi - 2.0) * (gamma + 0.5) - 1.0) + (delta_s == 0.0 ? 1.0 : 0.0);
}

RateTarget make_rate_target(double s, double pi, double r, double nu, double mu)
{
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("RateTarget: exponent must lie in (0, 1)");
    return RateTarget{s, pi, r, nu, mu};
}

// ---------------------------------------------------------------------------
// configuration

EstimatorKind parse_estimator(const std::string& name)
{
    if (name == "svd-proj" || name == "svd-projection")
        return EstimatorKind::SvdProjection;
    if (name == "svd-adapt" || name == "svd-adaptive")
        return EstimatorKind::SvdAdaptive;
    if (name == "needd" || name == "need-d")
        return EstimatorKind::NeedD;
    throw std::invalid_argument("unknown estimator: " + name);
}

std::string to_string(EstimatorKind kind)
{
    switch (kind)
    {
    case EstimatorKind::SvdProjection:
        return "svd-proj";
    case EstimatorKind::SvdAdaptive:
        return "svd-adapt";
    case EstimatorKind::NeedD:
        return "needd";
    }
    return "?";
}

int SimulationConfig::resolved_jmax() const
{
    if (jmax >= 0)
        return jmax;
    int j = 0;
    while ((std::size_t{1} << (j + 2)) <= kmax + 1)
        ++j;
    return j;
}

void SimulationConfig::validate() const
{
    if (runs < 1)
        throw std::invalid_argument("config: runs must be >= 1");
    if (n < 64)
        throw std::invalid_argument("config: n must be >= 64");
    if (targets.empty() || rsnr.empty() || estimators.empty())
        throw std::invalid_argument("config: targets, rsnr and estimators must be nonempty");
    for (const auto& t : targets)
        target_id(t);
    for (double r : rsnr)
        if (!(r > 0.0))
            throw std::invalid_argument("config: rsnr must be positive");
    if (alpha != 0.0 || beta != 1.0)
        throw std::invalid_argument("config: the Wicksell frame requires alpha = 0, beta = 1");
    if (kmax < 4)
        throw std::invalid_argument("config: kmax must be >= 4");
    if ((std::size_t{1} << (resolved_jmax() + 1)) > kmax + 1)
        throw std::invalid_argument("config: frame budget 2^(jmax+1) exceeds kmax + 1");
    if (m < 1)
        throw std::invalid_argument("config: m must be >= 1");
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::invalid_argument("config: gamma must lie in (0, 1/2)");
    if (!(kappa > 0.0))
        throw std::invalid_argument("config: kappa must be positive");
    if (epsilon_override >= 1.0)
        throw std::invalid_argument("config: epsilon must be < 1");
}

SimulationConfig parse_simulation_config(const std::string& json_text)
{
    using nlohmann::json;
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::exception& e)
    {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    SimulationConfig c;
    try
    {
        if (j.contains("targets"))
            c.targets = j.at("targets").get<std::vector<std::string>>();
        if (j.contains("rsnr"))
            c.rsnr = j.at("rsnr").get<std::vector<double>>();
        c.n = j.value("n", c.n);
        c.runs = j.value("runs", c.runs);
        c.seed = j.value("seed", c.seed);
        c.kmax = j.value("kmax", c.kmax);
        c.epsilon_override = j.value("epsilon", c.epsilon_override);
        if (j.contains("rsnr-mode"))
            c.rsnr_mode = parse_rsnr_mode(j.at("rsnr-mode").get<std::string>());
        if (j.contains("estimators"))
        {
            c.estimators.clear();
            for (const auto& name : j.at("estimators"))
                c.estimators.push_back(parse_estimator(name.get<std::string>()));
        }
        if (j.contains("frame"))
        {
            const auto& f = j.at("frame");
            c.alpha = f.value("alpha", c.alpha);
            c.beta = f.value("beta", c.beta);
            c.jmax = f.value("jmax", c.jmax);
            c.m = f.value("m", c.m);
            if (f.contains("profile"))
                c.profile = parse_profile_kind(f.at("profile").get<std::string>());
            if (f.contains("nodes-per-level"))
                c.nodes = parse_node_convention(f.at("nodes-per-level").get<std::string>());
        }
        if (j.contains("adaptive"))
        {
            const auto& a = j.at("adaptive");
            c.gamma = a.value("gamma", c.gamma);
            if (a.contains("logbase"))
            {
                const auto& lb = a.at("logbase");
                c.log_base = parse_log_base(lb.is_string() ? lb.get<std::string>() : std::to_string(lb.get<int>()));
            }
        }
        if (j.contains("needd"))
        {
            const auto& d = j.at("needd");
            c.kappa = d.value("kappa", c.kappa);
            if (d.contains("sigma"))
            {
                const auto s = d.at("sigma").get<std::string>();
                if (s == "level")
                    c.sigma_mode = SigmaMode::Level;
                else if (s == "node")
                    c.sigma_mode = SigmaMode::Node;
                else
                    throw std::invalid_argument("config: unknown sigma mode " + s);
            }
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

SimulationConfig load_simulation_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_simulation_config(ss.str());
}

// ---------------------------------------------------------------------------
// experiment

const CellResult& SimulationReport::cell(const std::string& target, double r, const std::string& estimator) const
{
    for (const auto& c : cells)
        if (c.target == target && c.rsnr == r && c.estimator == estimator)
            return c;
    throw std::out_of_range("report has no cell " + target + "/" + std::to_string(r) + "/" + estimator);
}

namespace
{

std::pair<double, double> mean_se(const std::vector<double>& v)
{
    if (v.empty())
        return {0.0, 0.0};
    double sum = 0.0;
    for (double x : v)
        sum += x;
    const double mean = sum / static_cast<double>(v.size());
    if (v.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(v.size()))};
}

struct PreparedTarget
{
    std::vector<double> coeffs;
    std::vector<double> truth; // f(k/n), k = 1..n
};

PreparedTarget prepare_target(const std::string& name, const SvdModel& model, const NaturalGrid& grid,
                              std::size_t n, std::size_t budget_band)
{
    PreparedTarget out;
    if (name == "smooth")
    {
        out.coeffs = smooth_coefficients(model.dimension(), budget_band, 2.0);
        out.truth = grid.evaluate(out.coeffs);
        double sum = 0.0, sum2 = 0.0;
        for (double v : out.truth)
        {
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / static_cast<double>(n);
        const double scale = 1.0 / std::sqrt(sum2 / static_cast<double>(n) - mean * mean);
        for (double& c : out.coeffs)
            c *= scale;
        for (double& v : out.truth)
            v *= scale;
        return out;
    }
    const Target t = target_function(name, n);
    out.coeffs = coeffs_from_function(model, t.eval).coeffs;
    out.truth.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.truth[k] = t(static_cast<double>(k + 1) / static_cast<double>(n));
    return out;
}

AdaptiveSvdConfig noiseless_blocks(const SvdModel& model, std::size_t n, double gamma)
{
    AdaptiveSvdConfig cfg;
    cfg.gamma = gamma;
    cfg.n_cap = model.dimension();
    cfg.n0 = std::min(n / 2, model.dimension());
    cfg.boundaries = {1, cfg.n_cap + 1};
    return cfg;
}

} // namespace

void summarize(CellResult& cell)
{
    std::tie(cell.mean_l1, cell.se_l1) = mean_se(cell.l1);
    std::tie(cell.mean_rmse, cell.se_rmse) = mean_se(cell.rmse);
}

SimulationReport run_experiment(const SimulationConfig& config)
{
    config.validate();
    const SvdModel model = wicksell_model(config.kmax);
    const int jmax = config.resolved_jmax();
    const Filter filter(make_profile(config.profile, config.m));
    const NeedletFrame frame = build_frame(model.frame_basis(), filter, jmax, config.nodes);
    const NaturalGrid grid(model, config.n, model.dimension());

    const std::size_t nt = config.targets.size();
    const std::size_t nr = config.rsnr.size();
    const std::size_t ne = config.estimators.size();
    const std::size_t runs = config.runs;

    std::vector<PreparedTarget> targets(nt);
    for (std::size_t t = 0; t < nt; ++t)
        targets[t] = prepare_target(config.targets[t], model, grid, config.n, frame.budget_band());

    // per (target, noise): ε, NEED-D plan and block layout
    std::vector<double> eps(nt * nr);
    std::vector<ThresholdPlan> plans(nt * nr);
    std::vector<AdaptiveSvdConfig> blocks(nt * nr);
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t r = 0; r < nr; ++r)
        {
            const std::size_t c = t * nr + r;
            eps[c] = config.epsilon_override >= 0.0
                         ? config.epsilon_override
                         : calibrate_epsilon(model, targets[t].coeffs, config.rsnr[r], config.n, config.rsnr_mode);
            plans[c] = make_threshold_plan(frame, model, eps[c], config.kappa, config.sigma_mode);
            blocks[c] = eps[c] > 0.0 ? make_blocks(eps[c], model, config.n, config.gamma, config.log_base)
                                     : noiseless_blocks(model, config.n, config.gamma);
        }

    const std::size_t tasks = nt * nr * runs;
    std::vector<double> l1(tasks * ne), rmse(tasks * ne);
    std::vector<std::uint64_t> seeds(tasks);
    std::vector<std::exception_ptr> errors(tasks);

#pragma omp parallel for schedule(dynamic) if (tasks > 1)
    for (std::size_t task = 0; task < tasks; ++task)
    {
        const std::size_t t = task / (nr * runs);
        const std::size_t r = (task / runs) % nr;
        const std::size_t run = task % runs;
        const std::size_t c = t * nr + r;
        try
        {
            const std::uint64_t seed =
                derive_seed(config.seed, run, static_cast<std::uint64_t>(target_id(config.targets[t])), r);
            seeds[task] = seed;
            auto stream = make_stream(seed);
            const auto obs = sample_observation(model, targets[t].coeffs, eps[c], stream);
            for (std::size_t e = 0; e < ne; ++e)
            {
                std::vector<double> fhat;
                switch (config.estimators[e])
                {
                case EstimatorKind::SvdProjection:
                    fhat = svd_projection_oracle(model, obs, targets[t].truth, grid).fhat;
                    break;
                case EstimatorKind::SvdAdaptive:
                    fhat = svd_adaptive(model, obs, eps[c], blocks[c]).fhat;
                    break;
                case EstimatorKind::NeedD:
                    fhat = need_d(frame, model, obs, plans[c]).fhat;
                    break;
                }
                const auto vals = grid.evaluate(fhat);
                l1[task * ne + e] = weighted_l1(targets[t].truth, vals);
                rmse[task * ne + e] = weighted_rmse(targets[t].truth, vals);
            }
        }
        catch (...)
        {
            errors[task] = std::current_exception();
        }
    }

    for (std::size_t task = 0; task < tasks; ++task)
    {
        if (!errors[task])
            continue;
        const std::size_t t = task / (nr * runs);
        const std::size_t r = (task / runs) % nr;
        std::string what = "unknown error";
        try
        {
            std::rethrow_exception(errors[task]);
        }
        catch (const std::exception& e)
        {
            what = e.what();
        }
        catch (...)
        {
        }
        throw std::runtime_error("run " + std::to_string(task % runs) + " target " + config.targets[t] + " rsnr " +
                                 std::to_string(config.rsnr[r]) + ": " + what);
    }

    SimulationReport report;
    report.targets = config.targets;
    report.rsnr = config.rsnr;
    report.seed = config.seed;
    for (auto k : config.estimators)
        report.estimators.push_back(to_string(k));
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t e = 0; e < ne; ++e)
            {
                CellResult cell;
                cell.target = config.targets[t];
                cell.rsnr = config.rsnr[r];
                cell.noise_index = r;
                cell.estimator = report.estimators[e];
                cell.epsilon = eps[t * nr + r];
                for (std::size_t run = 0; run < runs; ++run)
                {
                    const std::size_t task = (t * nr + r) * runs + run;
                    cell.l1.push_back(l1[task * ne + e]);
                    cell.rmse.push_back(rmse[task * ne + e]);
                    cell.seeds.push_back(seeds[task]);
                }
                summarize(cell);
                report.cells.push_back(std::move(cell));
            }
    return report;
}

// ---------------------------------------------------------------------------
// rate study

RateStudyResult rate_study(const SvdModel& model, const NeedletFrame& frame, std::span<const double> truth,
                           const RateStudyConfig& config, const RateTarget& target)
{
    if (config.epsilons.size() < 4)
        throw std::invalid_argument("rate_study: at least four noise levels are required");
    if (config.runs < 10)
        throw std::invalid_argument("rate_study: at least ten runs per noise level are required");
    if (truth.size() > model.dimension())
        throw std::invalid_argument("rate_study: target exceeds the model dimension");

    const std::size_t ne = config.epsilons.size();
    const std::size_t runs = config.runs;
    std::vector<double> err(ne * runs);
    std::vector<ThresholdPlan> plans(ne);
    for (std::size_t e = 0; e < ne; ++e)
        plans[e] = make_threshold_plan(frame, model, config.epsilons[e], config.kappa);

    std::vector<double> f(model.dimension(), 0.0);
    std::copy(truth.begin(), truth.end(), f.begin());
    std::vector<std::exception_ptr> errors(ne * runs);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t task = 0; task < ne * runs; ++task)
    {
        const std::size_t e = task / runs;
        const std::size_t run = task % runs;
        try
        {
            auto stream = make_stream(derive_seed(config.seed, run, 0, e));
            const auto obs = sample_observation(model, f, config.epsilons[e], stream);
            const auto res = need_d(frame, model, obs, plans[e]);
            double ss = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
            {
                const double d = (i < res.fhat.size() ? res.fhat[i] : 0.0) - f[i];
                ss += d * d;
            }
            err[task] = std::sqrt(ss);
        }
        catch (...)
        {
            errors[task] = std::current_exception();
        }
    }
    for (const auto& ep : errors)
        if (ep)
            std::rethrow_exception(ep);

    RateStudyResult out;
    out.epsilons = config.epsilons;
    out.mu = target.mu;
    std::vector<double> xs, ys;
    for (std::size_t e = 0; e < ne; ++e)
    {
        double m = 0.0;
        for (std::size_t run = 0; run < runs; ++run)
            m += err[e * runs + run];
        m /= static_cast<double>(runs);
        out.mean_error.push_back(m);
        if (!(m > 0.0) || !(config.epsilons[e] > 0.0))
            throw std::domain_error("rate_study: degenerate fit (zero error or noise level)");
        xs.push_back(std::log(config.epsilons[e]));
        ys.push_back(std::log(m));
    }

    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::domain_error("rate_study: degenerate fit (noise levels coincide)");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double r = ys[i] - out.intercept - out.slope * xs[i];
        ssr += r * r;
    }
    out.slope_se = std::sqrt(ssr / (k - 2.0) / sxx);
    out.gap = out.slope - out.mu;
    return out;
}

} // namespace needd
