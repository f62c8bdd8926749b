// needd: command-line front end for quadrature, filters, needlet frames,
// inverse-problem models, estimators and the simulation harness.

#include "needd/estimators.hpp"
#include "needd/frame_io.hpp"
#include "needd/inverse_models.hpp"
#include "needd/jacobi.hpp"
#include "needd/littlewood_paley.hpp"
#include "needd/needlet_frame.hpp"
#include "needd/simlab.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace needd;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvariant = 2;

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-")
        {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw std::runtime_error("cannot open " + path + " for writing");
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SvdModel make_model(const std::string& kind, std::size_t kmax, double kernel_decay)
{
    if (kind == "wicksell")
        return wicksell_model(kmax);
    if (kind == "direct")
        return direct_model(kmax);
    if (kind == "deconvolution")
    {
        std::vector<double> spectrum(kmax + 1);
        for (std::size_t k = 0; k <= kmax; ++k)
            spectrum[k] = std::pow(1.0 + static_cast<double>(k), -kernel_decay);
        return deconvolution_model(spectrum, kmax);
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

/// Reads (i, Y_i) rows; a non-numeric first row is treated as a header.
std::vector<double> read_observation_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::vector<double> y;
    std::string line;
    bool first = true;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(path + ": expected two columns");
        try
        {
            const auto idx = std::stoul(line.substr(0, comma));
            const double v = std::stod(line.substr(comma + 1));
            if (idx != y.size())
                throw std::invalid_argument(path + ": indices must run 0, 1, 2, ...");
            y.push_back(v);
        }
        catch (const std::logic_error&)
        {
            if (!first)
                throw std::invalid_argument(path + ": malformed row '" + line + "'");
        }
        first = false;
    }
    if (y.empty())
        throw std::invalid_argument(path + ": no observations");
    return y;
}

int print_invariants(const std::vector<InvariantCheck>& checks)
{
    bool ok = true;
    std::printf("%-24s %-14s %-10s %s\n", "check", "value", "tolerance", "status");
    for (const auto& c : checks)
    {
        std::printf("%-24s %-14.4e %-10.1e %s\n", c.name.c_str(), c.value, c.tolerance, c.pass ? "PASS" : "FAIL");
        ok = ok && c.pass;
    }
    return ok ? kExitOk : kExitInvariant;
}

struct RatesConfig
{
    std::vector<std::string> models{"wicksell", "direct"};
    double s = 2.0;
    std::size_t kmax = 512;
    int jmax = 8;
    RateStudyConfig study;
};

RatesConfig parse_rates_config(const std::string& text)
{
    RatesConfig c;
    try
    {
        const auto j = nlohmann::json::parse(text);
        if (j.contains("models"))
            c.models = j.at("models").get<std::vector<std::string>>();
        c.s = j.value("s", c.s);
        c.kmax = j.value("kmax", c.kmax);
        c.jmax = j.value("jmax", c.jmax);
        if (j.contains("eps"))
            c.study.epsilons = j.at("eps").get<std::vector<double>>();
        c.study.runs = j.value("runs", c.study.runs);
        c.study.seed = j.value("seed", c.study.seed);
        c.study.kappa = j.value("kappa", c.study.kappa);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::invalid_argument(std::string("rates config: ") + e.what());
    }
    if ((std::size_t{1} << (c.jmax + 1)) > c.kmax + 1)
        throw std::invalid_argument("rates config: 2^(jmax+1) exceeds kmax + 1");
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"needlet frames and the NEED-D estimator for linear inverse problems"};
    app.require_subcommand(1);

    // quad dump
    auto* quad = app.add_subcommand("quad", "Gauss-Jacobi quadrature");
    quad->require_subcommand(1);
    auto* quad_dump = quad->add_subcommand("dump", "print nodes and weights as CSV");
    double q_alpha = 0.0, q_beta = 0.0;
    std::size_t q_n = 8;
    std::string q_out;
    quad_dump->add_option("--alpha", q_alpha, "Jacobi alpha")->capture_default_str();
    quad_dump->add_option("--beta", q_beta, "Jacobi beta")->capture_default_str();
    quad_dump->add_option("--n", q_n, "number of nodes")->capture_default_str();
    quad_dump->add_option("--out", q_out, "output file (default stdout)");

    // filter plot
    auto* filter = app.add_subcommand("filter", "Littlewood-Paley filter");
    filter->require_subcommand(1);
    auto* filter_plot = filter->add_subcommand("plot", "print (xi, a(xi)) as CSV");
    int f_m = 2;
    std::size_t f_points = 501;
    std::string f_profile = "polynomial", f_out;
    filter_plot->add_option("--m", f_m, "smoothness of the cutoff")->capture_default_str();
    filter_plot->add_option("--points", f_points, "samples on [0, 2.5]")->capture_default_str();
    filter_plot->add_option("--profile", f_profile, "polynomial | exponential")->capture_default_str();
    filter_plot->add_option("--out", f_out, "output file (default stdout)");

    // frame build / check / render
    auto* frame = app.add_subcommand("frame", "needlet frames");
    frame->require_subcommand(1);
    auto* frame_build = frame->add_subcommand("build", "build a frame and write it to a binary file");
    std::string b_basis = "jacobi", b_profile = "polynomial", b_nodes = "exact", b_out;
    double b_alpha = 0.0, b_beta = 1.0;
    int b_jmax = 7, b_m = 2;
    frame_build->add_option("--basis", b_basis, "jacobi | fourier")->capture_default_str();
    frame_build->add_option("--alpha", b_alpha, "Jacobi alpha")->capture_default_str();
    frame_build->add_option("--beta", b_beta, "Jacobi beta")->capture_default_str();
    frame_build->add_option("--jmax", b_jmax, "finest level")->capture_default_str();
    frame_build->add_option("--m", b_m, "smoothness of the cutoff")->capture_default_str();
    frame_build->add_option("--profile", b_profile, "polynomial | exponential")->capture_default_str();
    frame_build->add_option("--nodes", b_nodes, "exact | paper")->capture_default_str();
    frame_build->add_option("--out", b_out, "output frame file")->required();

    auto* frame_check = frame->add_subcommand("check", "run the frame invariant suite");
    std::string c_path;
    frame_check->add_option("frame", c_path, "frame file")->required();

    auto* frame_render = frame->add_subcommand("render", "print (x, psi(x)) as CSV");
    std::string r_path, r_out;
    int r_j = 3;
    std::size_t r_nu = 0, r_points = 1001;
    frame_render->add_option("frame", r_path, "frame file")->required();
    frame_render->add_option("--j", r_j, "level")->capture_default_str();
    frame_render->add_option("--nu", r_nu, "node index within the level")->capture_default_str();
    frame_render->add_option("--points", r_points, "number of x samples")->capture_default_str();
    frame_render->add_option("--out", r_out, "output file (default stdout)");

    // model dump
    auto* model = app.add_subcommand("model", "inverse-problem models");
    model->require_subcommand(1);
    auto* model_dump = model->add_subcommand("dump", "print (k, b_k) as CSV");
    std::string m_kind = "wicksell", m_out;
    std::size_t m_kmax = 64;
    double m_decay = 1.0;
    model_dump->add_option("--kind", m_kind, "wicksell | direct | deconvolution")->capture_default_str();
    model_dump->add_option("--kmax", m_kmax, "highest band")->capture_default_str();
    model_dump->add_option("--kernel-decay", m_decay, "deconvolution: |gamma_k| = (1+k)^-decay")
        ->capture_default_str();
    model_dump->add_option("--out", m_out, "output file (default stdout)");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate f from observed coefficients");
    std::string e_model = "wicksell", e_frame, e_input, e_method = "needd", e_out, e_render;
    double e_eps = -1.0, e_kappa = kDefaultKappa, e_gamma = 0.1, e_decay = 1.0;
    std::size_t e_trunc = 0, e_n = 1024, e_points = 0;
    estimate->add_option("--model", e_model, "wicksell | direct | deconvolution")->capture_default_str();
    estimate->add_option("--kernel-decay", e_decay, "deconvolution: |gamma_k| = (1+k)^-decay");
    estimate->add_option("--frame", e_frame, "frame file (needd)");
    estimate->add_option("--input", e_input, "CSV with columns i, Y_i")->required();
    estimate->add_option("--method", e_method, "needd | svd-proj | svd-adapt")->capture_default_str();
    estimate->add_option("--epsilon", e_eps, "noise level (needd, svd-adapt)");
    estimate->add_option("--kappa", e_kappa, "threshold constant")->capture_default_str();
    estimate->add_option("--gamma", e_gamma, "adaptive SVD gamma")->capture_default_str();
    estimate->add_option("--truncation", e_trunc, "svd-proj: keep coefficients 0..N")->capture_default_str();
    estimate->add_option("--n", e_n, "svd-adapt: sample size bounding N0")->capture_default_str();
    estimate->add_option("--out", e_out, "output CSV (i, fhat_i)")->required();
    estimate->add_option("--render", e_render, "optional CSV (x, fhat(x))");
    estimate->add_option("--render-points", e_points, "samples for --render (default 1024)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo comparison of estimators");
    std::string s_config, s_out, s_format;
    simulate->add_option("--config", s_config, "JSON config")->required();
    simulate->add_option("--out", s_out, "report path")->required();
    simulate->add_option("--format", s_format, "csv | json (default from the extension)");

    // rates
    auto* rates = app.add_subcommand("rates", "empirical convergence rates of NEED-D");
    std::string t_config, t_out;
    rates->add_option("--config", t_config, "JSON config")->required();
    rates->add_option("--out", t_out, "output CSV (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitIo;
    }

    try
    {
        if (quad_dump->parsed())
        {
            const auto rule = gauss_jacobi_rule(JacobiParams::make(q_alpha, q_beta), q_n);
            Output out(q_out);
            out.stream() << "index,node,weight\r\n";
            for (std::size_t k = 0; k < rule.order; ++k)
                out.stream() << k << ',' << num(rule.nodes[k]) << ',' << num(rule.weights[k]) << "\r\n";
        }
        else if (filter_plot->parsed())
        {
            if (f_points < 2)
                throw std::invalid_argument("--points must be >= 2");
            const Filter a(make_profile(parse_profile_kind(f_profile), f_m));
            Output out(f_out);
            out.stream() << "xi,a\r\n";
            for (std::size_t k = 0; k < f_points; ++k)
            {
                const double xi = 2.5 * static_cast<double>(k) / static_cast<double>(f_points - 1);
                out.stream() << num(xi) << ',' << num(a(xi)) << "\r\n";
            }
        }
        else if (frame_build->parsed())
        {
            BasisFamily basis = b_basis == "jacobi"    ? BasisFamily::jacobi(JacobiParams::make(b_alpha, b_beta))
                                : b_basis == "fourier" ? BasisFamily::fourier()
                                                       : throw std::invalid_argument("unknown basis: " + b_basis);
            const Filter a(make_profile(parse_profile_kind(b_profile), b_m));
            const auto f = build_frame(basis, a, b_jmax, parse_node_convention(b_nodes));
            save_frame(f, b_out);
            std::cerr << "wrote " << b_out << ": " << f.needlet_count() << " needlets, dimension " << f.dimension()
                      << "\n";
        }
        else if (frame_check->parsed())
        {
            return print_invariants(frame_invariants(load_frame(c_path)));
        }
        else if (frame_render->parsed())
        {
            const auto f = load_frame(r_path);
            if (r_j < -1 || r_j > f.jmax())
                throw std::invalid_argument("--j outside the frame's levels");
            if (r_nu >= f.level(r_j).node_count())
                throw std::invalid_argument("--nu outside the level");
            if (r_points < 2)
                throw std::invalid_argument("--points must be >= 2");
            Output out(r_out);
            out.stream() << "x,psi\r\n";
            const double lo = f.basis().domain_lo(), hi = f.basis().domain_hi();
            for (std::size_t k = 0; k < r_points; ++k)
            {
                const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(r_points - 1);
                out.stream() << num(x) << ',' << num(f.needlet_value(r_j, r_nu, x)) << "\r\n";
            }
        }
        else if (model_dump->parsed())
        {
            const auto mdl = make_model(m_kind, m_kmax, m_decay);
            Output out(m_out);
            out.stream() << "k,b\r\n";
            const auto spec = mdl.spectrum();
            for (std::size_t k = 0; k < spec.size(); ++k)
                out.stream() << k << ',' << num(spec[k]) << "\r\n";
        }
        else if (estimate->parsed())
        {
            SequenceObservation obs;
            obs.y = read_observation_csv(e_input);
            const auto mdl = make_model(e_model, e_model == "deconvolution" ? (obs.y.size() - 1) / 2 : obs.y.size() - 1,
                                        e_decay);
            if (mdl.dimension() != obs.y.size())
                throw std::invalid_argument("observation length does not match the model's coefficient layout");
            obs.epsilon = e_eps;
            std::vector<double> fhat;
            if (e_method == "needd")
            {
                if (e_frame.empty() || e_eps < 0.0)
                    throw std::invalid_argument("needd requires --frame and --epsilon");
                const auto f = load_frame(e_frame);
                if (!(f.basis().kind() == mdl.frame_basis().kind() &&
                      (f.basis().kind() != BasisKind::Jacobi ||
                       f.basis().jacobi_params() == mdl.frame_basis().jacobi_params())))
                    throw std::invalid_argument("frame basis does not match the model");
                const auto plan = make_threshold_plan(f, mdl, e_eps, e_kappa);
                fhat = need_d(f, mdl, obs, plan).fhat;
            }
            else if (e_method == "svd-proj")
            {
                fhat = svd_projection(mdl, obs, e_trunc);
            }
            else if (e_method == "svd-adapt")
            {
                if (!(e_eps > 0.0))
                    throw std::invalid_argument("svd-adapt requires --epsilon > 0");
                fhat = svd_adaptive(mdl, obs, e_eps, make_blocks(e_eps, mdl, e_n, e_gamma)).fhat;
            }
            else
            {
                throw std::invalid_argument("unknown method: " + e_method);
            }
            {
                Output out(e_out);
                out.stream() << "i,fhat\r\n";
                for (std::size_t i = 0; i < fhat.size(); ++i)
                    out.stream() << i << ',' << num(fhat[i]) << "\r\n";
            }
            if (!e_render.empty())
            {
                const std::size_t n = e_points > 0 ? e_points : 1024;
                Output out(e_render);
                out.stream() << "x,fhat\r\n";
                for (std::size_t k = 1; k <= n; ++k)
                {
                    const double x = static_cast<double>(k) / static_cast<double>(n);
                    out.stream() << num(x) << ',' << num(mdl.evaluate(fhat, x)) << "\r\n";
                }
            }
        }
        else if (simulate->parsed())
        {
            const auto cfg = load_simulation_config(s_config);
            const auto format = !s_format.empty() ? s_format
                                : (s_out.size() >= 5 && s_out.substr(s_out.size() - 5) == ".json") ? "json"
                                                                                                     : "csv";
            if (format != "csv" && format != "json")
                throw std::invalid_argument("unknown report format: " + format);
            const auto report = run_experiment(cfg);
            emit_report(report, format == "csv" ? ReportFormat::Csv : ReportFormat::Json, s_out);
        }
        else if (rates->parsed())
        {
            const auto cfg = parse_rates_config(read_text(t_config));
            Output out(t_out);
            out.stream() << "model,epsilon,mean_error,slope,slope_se,mu,gap\r\n";
            for (const auto& name : cfg.models)
            {
                const auto mdl = make_model(name, cfg.kmax, 1.0);
                const Filter a(make_profile(ProfileKind::PolynomialShape, 2));
                const auto f = build_frame(mdl.frame_basis(), a, cfg.jmax);
                const auto truth = smooth_coefficients(mdl.dimension(), f.budget_band(), cfg.s);
                const auto target = make_rate_target(cfg.s, 2.0, 2.0, mdl.nu(),
                                                     rate_exponent_jacobi(cfg.s, mdl.nu(), 0.0, 2.0));
                const auto res = rate_study(mdl, f, truth, cfg.study, target);
                for (std::size_t k = 0; k < res.epsilons.size(); ++k)
                    out.stream() << name << ',' << num(res.epsilons[k]) << ',' << num(res.mean_error[k]) << ','
                                 << num(res.slope) << ',' << num(res.slope_se) << ',' << num(res.mu) << ','
                                 << num(res.gap) << "\r\n";
            }
        }
    }
    catch (const QuadratureError& e)
    {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    }
    catch (const FrameBuildError& e)
    {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const std::domain_error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const std::logic_error& e)
    {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
