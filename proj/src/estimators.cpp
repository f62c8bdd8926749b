#include "needd/estimators.hpp"
#include "needd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace needd
{

double ThresholdPlan::threshold(int j, std::size_t nu) const
{
    const double s = mode == SigmaMode::Node ? node_sigma.level(j)[nu] : sigma.at(static_cast<std::size_t>(j + 1));
    return kappa * t_eps * s;
}

double noise_scale(double epsilon)
{
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw std::domain_error("noise level must satisfy 0 <= epsilon < 1");
    if (epsilon == 0.0)
        return 0.0;
    return epsilon * std::sqrt(std::log(1.0 / epsilon));
}

int top_level_for(double t_eps, double nu, int jmax)
{
    if (t_eps <= 0.0)
        return jmax;
    const double target = std::pow(t_eps, -2.0 / (1.0 + 2.0 * nu));
    const int j = static_cast<int>(std::floor(std::log2(target)));
    return std::clamp(j, -1, jmax);
}

ThresholdPlan make_threshold_plan(const NeedletFrame& frame, const SvdModel& model, double epsilon, double kappa,
                                  SigmaMode mode)
{
    if (!(kappa > 0.0))
        throw std::domain_error("make_threshold_plan: kappa must be positive");
    if (model.dimension() < frame.dimension())
        throw std::invalid_argument("make_threshold_plan: model does not cover the frame's frequency budget");
    ThresholdPlan plan;
    plan.kappa = kappa;
    plan.t_eps = noise_scale(epsilon);
    plan.top_level = top_level_for(plan.t_eps, model.nu(), frame.jmax());
    plan.sigma = level_sigma(frame, model.singular_values());
    plan.mode = mode;
    if (mode == SigmaMode::Node)
        plan.node_sigma = node_sigma(frame, model.singular_values());
    return plan;
}

NeedletCoefficients empirical_coefficients(const NeedletFrame& frame, const SvdModel& model,
                                           const SequenceObservation& obs)
{
    if (obs.y.size() < frame.dimension())
        throw std::invalid_argument("need_d: observation does not cover the frame's frequency budget");
    std::vector<double> ybar(frame.dimension());
    for (std::size_t i = 0; i < ybar.size(); ++i)
        ybar[i] = obs.y[i] / model.b(i);
    return analyze(frame, ybar);
}

NeedDResult need_d(const NeedletFrame& frame, const SvdModel& model, const SequenceObservation& obs,
                   const ThresholdPlan& plan)
{
    NeedDResult result;
    result.beta_hat = empirical_coefficients(frame, model, obs);
    result.beta_kept = NeedletCoefficients::zeros_like(frame);
    for (int j = -1; j <= std::min(plan.top_level, frame.jmax()); ++j)
    {
        const auto& raw = result.beta_hat.level(j);
        auto& kept = result.beta_kept.level(j);
        for (std::size_t nu = 0; nu < raw.size(); ++nu)
        {
            if (std::abs(raw[nu]) >= plan.threshold(j, nu))
            {
                kept[nu] = raw[nu];
                ++result.kept;
            }
        }
    }
    result.fhat = synthesize(frame, result.beta_kept);
    return result;
}

std::vector<double> svd_projection(const SvdModel& model, const SequenceObservation& obs, std::size_t n)
{
    if (n > obs.kmax())
        throw std::invalid_argument("svd_projection: N exceeds the observed range");
    std::vector<double> fhat(obs.y.size(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
        fhat[i] = obs.y[i] / model.b(i);
    return fhat;
}

ProjectionOracle svd_projection_oracle(const SvdModel& model, const SequenceObservation& obs,
                                       std::span<const double> truth, const NaturalGrid& grid, std::size_t max_n)
{
    if (truth.size() != grid.size())
        throw std::invalid_argument("svd_projection_oracle: truth does not match the grid");
    const std::size_t last = max_n > 0 ? max_n : obs.kmax() / 2;
    if (last >= grid.count() || last > obs.kmax())
        throw std::invalid_argument("svd_projection_oracle: search range exceeds the grid basis");

    ProjectionOracle out;
    out.errors.reserve(last + 1);
    std::vector<double> current(grid.size(), 0.0);
    out.best_error = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= last; ++n)
    {
        const double c = obs.y[n] / model.b(n);
        for (std::size_t k = 0; k < grid.size(); ++k)
            current[k] += c * grid.value(k, n);
        const double err = weighted_rmse(truth, current);
        out.errors.push_back(err);
        if (err < out.best_error)
        {
            out.best_error = err;
            out.best_n = n;
        }
    }
    out.fhat = svd_projection(model, obs, out.best_n);
    return out;
}

LogBase parse_log_base(const std::string& name)
{
    if (name == "e" || name == "natural" || name == "ln")
        return LogBase::Natural;
    if (name == "10" || name == "log10")
        return LogBase::Ten;
    throw std::invalid_argument("unknown log base: " + name);
}

AdaptiveSvdConfig make_blocks(double epsilon, const SvdModel& model, std::size_t n, double gamma, LogBase base)
{
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("make_blocks: epsilon must lie in (0, 1)");
    if (!(gamma > 0.0) || !(gamma < 0.5))
        throw std::domain_error("make_blocks: gamma must lie in (0, 1/2)");
    auto lg = [base](double x) { return base == LogBase::Natural ? std::log(x) : std::log10(x); };

    AdaptiveSvdConfig cfg;
    cfg.gamma = gamma;
    const double loglog = lg(lg(1.0 / epsilon));
    cfg.nu_eps = std::isnan(loglog) ? 5.0 : std::max(5.0, loglog);
    cfg.rho_eps = 1.0 / lg(cfg.nu_eps);

    // M = max{m : Σ_{i=1}^m b_i^{-2} <= ε^{-2} ρ^{-3}}, capped by the available spectrum
    const double budget = 1.0 / (epsilon * epsilon * std::pow(cfg.rho_eps, 3));
    std::size_t m = 0;
    double acc = 0.0;
    const auto b = model.singular_values();
    while (m < b.size())
    {
        acc += 1.0 / (b[m] * b[m]);
        if (acc > budget)
            break;
        ++m;
    }

    cfg.boundaries = {1, static_cast<std::size_t>(std::ceil(cfg.nu_eps))};
    for (int j = 2; cfg.boundaries.back() <= m; ++j)
    {
        const double step = std::floor(cfg.nu_eps * cfg.rho_eps * std::pow(1.0 + cfg.rho_eps, j - 1));
        cfg.boundaries.push_back(cfg.boundaries.back() + std::max<std::size_t>(1, static_cast<std::size_t>(step)));
    }
    cfg.n_cap = cfg.boundaries.back() - 1;
    cfg.n0 = std::min({n / 2, cfg.n_cap, model.dimension()});
    return cfg;
}

AdaptiveSvdResult svd_adaptive(const SvdModel& model, const SequenceObservation& obs, double epsilon,
                               const AdaptiveSvdConfig& config)
{
    if (!(config.gamma > 0.0) || !(config.gamma < 0.5))
        throw std::domain_error("svd_adaptive: gamma must lie in (0, 1/2)");
    if (obs.y.size() < config.n0)
        throw std::invalid_argument("svd_adaptive: observation shorter than the truncation N0");

    AdaptiveSvdResult out;
    out.weights.assign(obs.y.size(), 0.0);
    out.fhat.assign(obs.y.size(), 0.0);
    for (std::size_t j = 1; j < config.boundaries.size(); ++j)
    {
        // block I_j = [κ_{j-1}, κ_j - 1] in 1-based indices
        const std::size_t lo = config.boundaries[j - 1] - 1;
        const std::size_t hi_full = config.boundaries[j] - 1;
        if (hi_full <= lo)
            throw std::logic_error("svd_adaptive: empty block " + std::to_string(j));
        const std::size_t hi = std::min(hi_full, config.n0);
        if (hi <= lo)
            break;

        double norm2 = 0.0, inv_sum = 0.0, inv_max = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
        {
            const double b = model.b(i);
            const double ybar = obs.y[i] / b;
            norm2 += ybar * ybar;
            inv_sum += 1.0 / (b * b);
            inv_max = std::max(inv_max, 1.0 / (b * b));
        }
        const double sigma2 = epsilon * epsilon * inv_sum;
        const double delta = inv_max / inv_sum;
        double lambda = 1.0;
        if (sigma2 > 0.0)
            lambda = norm2 > 0.0 ? std::max(0.0, 1.0 - sigma2 * (1.0 + std::pow(delta, config.gamma)) / norm2) : 0.0;
        for (std::size_t i = lo; i < hi; ++i)
        {
            out.weights[i] = lambda;
            out.fhat[i] = lambda * obs.y[i] / model.b(i);
        }
    }
    return out;
}

} // namespace needd
