#include "needd/needlet_frame.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace needd
{

namespace
{

constexpr double kNormResolution = 1e-3;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> psi_block(const FrameLevel& level)
{
    return {level.psi.data(), static_cast<Eigen::Index>(level.node_count()),
            static_cast<Eigen::Index>(level.width)};
}

// rows: points, columns: basis functions first .. first + width - 1
RowMatrix basis_block(const BasisFamily& basis, std::span<const double> xs, std::size_t first, std::size_t width)
{
    RowMatrix out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(width));
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel if (n >= 256)
    {
        std::vector<double> values(first + width);
#pragma omp for schedule(static)
        for (std::ptrdiff_t q = 0; q < n; ++q)
        {
            basis.eval_into(xs[static_cast<std::size_t>(q)], values);
            for (std::size_t c = 0; c < width; ++c)
                out(q, static_cast<Eigen::Index>(c)) = values[first + c];
        }
    }
    return out;
}

// needlet values: rows points, columns nodes
RowMatrix level_values(const NeedletFrame& frame, const FrameLevel& level, std::span<const double> xs)
{
    const RowMatrix block = basis_block(frame.basis(), xs, level.first, level.width);
    return block * psi_block(level).transpose();
}

std::size_t top_band(const FrameLevel& level, const BasisFamily& basis)
{
    return basis.band(level.first + level.width - 1);
}

std::vector<double> integral_powers(const NeedletFrame& frame, const FrameLevel& level, double p,
                                    std::size_t count)
{
    const auto rule = frame.basis().rule(count);
    const RowMatrix values = level_values(frame, level, rule.nodes);
    std::vector<double> out(level.node_count(), 0.0);
    for (Eigen::Index q = 0; q < values.rows(); ++q)
        for (Eigen::Index nu = 0; nu < values.cols(); ++nu)
            out[static_cast<std::size_t>(nu)] +=
                rule.weights[static_cast<std::size_t>(q)] * std::pow(std::abs(values(q, nu)), p);
    return out;
}

double wrap_distance(double a, double b)
{
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

// sample points of the natural domain: θ grid mapped to x = cos θ (Jacobi) or x grid (Fourier)
std::vector<double> coarse_grid(const BasisFamily& basis, std::size_t intervals)
{
    std::vector<double> xs;
    if (basis.kind() == BasisKind::Jacobi)
    {
        xs.reserve(intervals + 1);
        for (std::size_t m = 0; m <= intervals; ++m)
            xs.push_back(std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(intervals)));
    }
    else
    {
        xs.reserve(intervals);
        for (std::size_t m = 0; m < intervals; ++m)
            xs.push_back(static_cast<double>(m) / static_cast<double>(intervals));
    }
    return xs;
}

std::vector<double> sup_norms(const NeedletFrame& frame, const FrameLevel& level)
{
    const auto& basis = frame.basis();
    const int j = std::max(level.j, 0);
    const std::size_t intervals = std::size_t{64} << j;
    const auto xs = coarse_grid(basis, intervals);
    const RowMatrix coarse = level_values(frame, level, xs);

    std::vector<double> out(level.node_count(), 0.0);
    for (Eigen::Index nu = 0; nu < coarse.cols(); ++nu)
        out[static_cast<std::size_t>(nu)] = coarse.col(nu).cwiseAbs().maxCoeff();
    if (level.j < 0)
        return out;

    // 4x refinement within one peak width of each node
    const std::size_t fine = 4 * intervals;
    const double span = basis.kind() == BasisKind::Jacobi ? std::numbers::pi : 1.0;
    const double step = span / static_cast<double>(fine);
    const double half_window = span / static_cast<double>(std::size_t{1} << j);
    const auto half_points = static_cast<std::ptrdiff_t>(half_window / step);
    const auto nodes = static_cast<std::ptrdiff_t>(level.node_count());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t nu = 0; nu < nodes; ++nu)
    {
        const double eta = level.nodes[static_cast<std::size_t>(nu)];
        const double center = basis.kind() == BasisKind::Jacobi ? std::acos(eta) : eta;
        std::vector<double> pts;
        pts.reserve(static_cast<std::size_t>(2 * half_points + 1));
        for (std::ptrdiff_t m = -half_points; m <= half_points; ++m)
        {
            const double t = center + static_cast<double>(m) * step;
            if (basis.kind() == BasisKind::Jacobi)
            {
                if (t >= 0.0 && t <= std::numbers::pi)
                    pts.push_back(std::cos(t));
            }
            else
            {
                pts.push_back(t - std::floor(t));
            }
        }
        const RowMatrix block = basis_block(basis, pts, level.first, level.width);
        const Eigen::VectorXd vals = block * psi_block(level).row(nu).transpose();
        out[static_cast<std::size_t>(nu)] = std::max(out[static_cast<std::size_t>(nu)], vals.cwiseAbs().maxCoeff());
    }
    return out;
}

} // namespace

std::vector<double> level_sigma(const NeedletFrame& frame, std::span<const double> singular_values)
{
    if (singular_values.size() < frame.dimension())
        throw std::invalid_argument("level_sigma: singular values do not cover the frame dimension");
    for (std::size_t i = 0; i < frame.dimension(); ++i)
        if (!(singular_values[i] > 0.0))
            throw std::domain_error("level_sigma: singular value " + std::to_string(i) + " is not positive");

    const auto per_node = node_sigma(frame, singular_values);
    std::vector<double> sigma;
    for (const auto& level : per_node.levels)
        sigma.push_back(*std::max_element(level.begin(), level.end()));
    return sigma;
}

NeedletCoefficients node_sigma(const NeedletFrame& frame, std::span<const double> singular_values)
{
    if (singular_values.size() < frame.dimension())
        throw std::invalid_argument("node_sigma: singular values do not cover the frame dimension");
    auto out = NeedletCoefficients::zeros_like(frame);
    const auto levels = frame.levels();
    for (std::size_t l = 0; l < levels.size(); ++l)
    {
        const auto& level = levels[l];
        for (std::size_t nu = 0; nu < level.node_count(); ++nu)
        {
            const auto row = level.row(nu);
            double sum = 0.0;
            for (std::size_t c = 0; c < level.width; ++c)
            {
                const double b = singular_values[level.first + c];
                if (!(b > 0.0))
                    throw std::domain_error("node_sigma: non-positive singular value");
                const double r = row[c] / b;
                sum += r * r;
            }
            out.levels[l][nu] = std::sqrt(sum);
        }
    }
    return out;
}

std::vector<NormEstimate> level_norms(const NeedletFrame& frame, int j, double p)
{
    if (!(p > 0.0))
        throw std::domain_error("frame_norm: p must be positive");
    const auto& level = frame.level(j);
    std::vector<NormEstimate> out(level.node_count());

    if (std::isinf(p))
    {
        const auto sup = sup_norms(frame, level);
        for (std::size_t nu = 0; nu < out.size(); ++nu)
            out[nu] = {sup[nu], true};
        return out;
    }

    const std::size_t band = top_band(level, frame.basis());
    const std::size_t base = frame.basis().kind() == BasisKind::Jacobi ? std::max<std::size_t>(64, 4 * (band + 1))
                                                                      : std::max<std::size_t>(64, 8 * (band + 1));
    const auto coarse = integral_powers(frame, level, p, base);
    const auto refined = integral_powers(frame, level, p, 2 * base);
    for (std::size_t nu = 0; nu < out.size(); ++nu)
    {
        const bool resolved = std::abs(coarse[nu] - refined[nu]) <= kNormResolution * refined[nu];
        out[nu] = {std::pow(refined[nu], 1.0 / p), resolved};
    }
    return out;
}

NormEstimate frame_norm(const NeedletFrame& frame, int j, std::size_t nu, double p)
{
    const auto& full = frame.level(j);
    if (nu >= full.node_count())
        throw std::out_of_range("frame_norm: node index out of range");
    FrameLevel single;
    single.j = full.j;
    single.nodes = {full.nodes[nu]};
    single.weights = {full.weights[nu]};
    single.first = full.first;
    single.width = full.width;
    const auto row = full.row(nu);
    single.psi.assign(row.begin(), row.end());

    if (std::isinf(p))
        return {sup_norms(frame, single).front(), true};
    if (!(p > 0.0))
        throw std::domain_error("frame_norm: p must be positive");
    const std::size_t band = top_band(single, frame.basis());
    const std::size_t base = frame.basis().kind() == BasisKind::Jacobi ? std::max<std::size_t>(64, 4 * (band + 1))
                                                                      : std::max<std::size_t>(64, 8 * (band + 1));
    const double coarse = integral_powers(frame, single, p, base).front();
    const double refined = integral_powers(frame, single, p, 2 * base).front();
    return {std::pow(refined, 1.0 / p), std::abs(coarse - refined) <= kNormResolution * refined};
}

std::vector<double> level_localization(const NeedletFrame& frame, int j, double l, std::size_t grid_points)
{
    const auto& level = frame.level(j);
    if (j < 0)
        return {std::abs(level.psi.front())};

    const auto& basis = frame.basis();
    const std::size_t intervals = grid_points > 0 ? grid_points : (std::size_t{64} << j);
    const auto xs = coarse_grid(basis, intervals);
    const RowMatrix vals = level_values(frame, level, xs);

    const double scale = std::ldexp(1.0, j);
    std::vector<double> root_weight(xs.size(), 1.0);
    if (basis.kind() == BasisKind::Jacobi)
        for (std::size_t m = 0; m < xs.size(); ++m)
            root_weight[m] = std::sqrt(generalized_weight(basis.jacobi_params(), scale, xs[m]));

    const auto nodes = static_cast<std::ptrdiff_t>(level.node_count());
    std::vector<double> out(level.node_count(), 0.0);
#pragma omp parallel for schedule(static) if (nodes >= 64)
    for (std::ptrdiff_t nu = 0; nu < nodes; ++nu)
    {
        const double eta = level.nodes[static_cast<std::size_t>(nu)];
        const double center = basis.kind() == BasisKind::Jacobi ? std::acos(eta) : eta;
        double worst = 0.0;
        for (std::size_t m = 0; m < xs.size(); ++m)
        {
            const double dist =
                basis.kind() == BasisKind::Jacobi
                    ? std::abs(std::numbers::pi * static_cast<double>(m) / static_cast<double>(intervals) - center)
                    : 2.0 * std::numbers::pi * wrap_distance(xs[m], center);
            const double envelope = std::sqrt(scale) / (std::pow(1.0 + scale * dist, l) * root_weight[m]);
            worst = std::max(worst, std::abs(vals(static_cast<Eigen::Index>(m), nu)) / envelope);
        }
        out[static_cast<std::size_t>(nu)] = worst;
    }
    return out;
}

double localization_check(const NeedletFrame& frame, int j, std::size_t nu, double l, std::size_t grid_points)
{
    const auto& level = frame.level(j);
    if (nu >= level.node_count())
        throw std::out_of_range("localization_check: node index out of range");
    return level_localization(frame, j, l, grid_points)[nu];
}

BesovParams BesovParams::make(double s, double pi, double r)
{
    if (!(s > 0.0) || !(pi >= 1.0) || !(r >= 1.0))
        throw std::domain_error("Besov parameters must satisfy s > 0, pi >= 1, r >= 1");
    return {s, pi, r};
}

double besov_seq_norm(const NeedletCoefficients& beta, const BesovParams& bp, const NeedletCoefficients& psi_norms)
{
    if (beta.levels.size() != psi_norms.levels.size())
        throw std::invalid_argument("besov_seq_norm: level count mismatch");
    double acc = 0.0;
    for (std::size_t l = 0; l < beta.levels.size(); ++l)
    {
        const int j = static_cast<int>(l) - 1;
        double inner = 0.0;
        for (std::size_t nu = 0; nu < beta.levels[l].size(); ++nu)
            inner += std::pow(std::abs(beta.levels[l][nu]), bp.pi) * std::pow(psi_norms.levels[l][nu], bp.pi);
        const double term = std::pow(2.0, j * bp.s) * std::pow(inner, 1.0 / bp.pi);
        if (std::isinf(bp.r))
            acc = std::max(acc, term);
        else
            acc += std::pow(term, bp.r);
    }
    return std::isinf(bp.r) ? acc : std::pow(acc, 1.0 / bp.r);
}

double besov_seq_norm(const NeedletFrame& frame, const NeedletCoefficients& beta, const BesovParams& bp)
{
    auto norms = NeedletCoefficients::zeros_like(frame);
    for (int j = -1; j <= frame.jmax(); ++j)
    {
        const auto level = level_norms(frame, j, bp.pi);
        for (std::size_t nu = 0; nu < level.size(); ++nu)
            norms.level(j)[nu] = level[nu].value;
    }
    return besov_seq_norm(beta, bp, norms);
}

double function_norm(const BasisFamily& basis, std::span<const double> f, double p, std::size_t order)
{
    if (!(p > 0.0))
        throw std::domain_error("function_norm: p must be positive");
    const std::size_t count = order > 0 ? order : std::max<std::size_t>(64, 2 * f.size() + 16);
    const auto rule = std::isinf(p) ? Discretization{coarse_grid(basis, 16 * count), {}} : basis.rule(count);
    const RowMatrix block = basis_block(basis, rule.nodes, 0, f.size());
    const Eigen::VectorXd vals = block * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    if (std::isinf(p))
        return vals.cwiseAbs().maxCoeff();
    double sum = 0.0;
    for (Eigen::Index q = 0; q < vals.size(); ++q)
        sum += rule.weights[static_cast<std::size_t>(q)] * std::pow(std::abs(vals[q]), p);
    return std::pow(sum, 1.0 / p);
}

std::vector<double> best_approx_errors(const NeedletFrame& frame, std::span<const double> f, double p, int j_lo,
                                       int j_hi)
{
    if (f.size() > frame.dimension())
        throw std::invalid_argument("best_approx_errors: f exceeds the frame dimension");
    if (j_lo > j_hi)
        throw std::invalid_argument("best_approx_errors: empty level range");
    const auto& basis = frame.basis();
    const auto& profile = frame.filter().profile();
    const std::size_t order = std::max<std::size_t>(64, 2 * f.size() + 16);

    std::vector<double> out;
    std::vector<double> residual(f.size());
    for (int j = j_lo; j <= j_hi; ++j)
    {
        // Σ_{j' <= j} Λ_{j'} multiplies band k by φ(k / 2^{j+1})
        const double scale = std::ldexp(1.0, -(j + 1));
        for (std::size_t i = 0; i < f.size(); ++i)
            residual[i] = f[i] * (1.0 - profile(static_cast<double>(basis.band(i)) * scale));
        out.push_back(function_norm(basis, residual, p, order));
    }
    return out;
}

} // namespace needd

namespace needd
{

std::vector<InvariantCheck> frame_invariants(const NeedletFrame& frame, std::size_t samples, std::uint64_t seed)
{
    std::vector<InvariantCheck> out;
    auto add = [&out](std::string name, double value, double tol) {
        out.push_back({std::move(name), value, tol, value <= tol});
    };

    double wdev = 0.0;
    for (const auto& level : frame.levels())
    {
        double sum = 0.0;
        for (double w : level.weights)
            sum += w;
        wdev = std::max(wdev, std::abs(sum - 1.0));
    }
    add("weight sums", wdev, 1e-12);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const std::size_t in_budget = frame.basis().dimension(frame.budget_band());
    double parseval = 0.0, roundtrip = 0.0;
    for (std::size_t s = 0; s < samples; ++s)
    {
        std::vector<double> f(frame.dimension(), 0.0);
        double f2 = 0.0;
        for (std::size_t i = 0; i < std::min(in_budget, f.size()); ++i)
        {
            f[i] = normal(rng);
            f2 += f[i] * f[i];
        }
        const auto beta = analyze(frame, f);
        parseval = std::max(parseval, std::abs(beta.squared_norm() - f2) / f2);
        const auto g = synthesize(frame, beta);
        double d2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            d2 += (g[i] - f[i]) * (g[i] - f[i]);
        roundtrip = std::max(roundtrip, std::sqrt(d2 / f2));
    }
    add("parseval defect", parseval, 1e-8);
    add("round-trip defect", roundtrip, 1e-8);

    double zero_sum = 0.0, norm_excess = 0.0;
    for (const auto& level : frame.levels())
    {
        for (std::size_t nu = 0; nu < level.node_count(); ++nu)
        {
            double n2 = 0.0;
            for (double v : level.row(nu))
                n2 += v * v;
            norm_excess = std::max(norm_excess, std::sqrt(n2) - 1.0);
        }
        if (level.j < 0)
            continue;
        for (std::size_t c = 0; c < level.width; ++c)
        {
            double sum = 0.0;
            for (std::size_t nu = 0; nu < level.node_count(); ++nu)
                sum += std::sqrt(level.weights[nu]) * level.psi[nu * level.width + c];
            zero_sum = std::max(zero_sum, std::abs(sum));
        }
    }
    add("zero-sum levels", zero_sum, 1e-10);
    add("needlet norm excess", std::max(0.0, norm_excess), 1e-10);
    return out;
}

} // namespace needd
