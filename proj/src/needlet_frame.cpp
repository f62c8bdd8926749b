#include "needd/needlet_frame.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

namespace needd
{

namespace
{

constexpr double kGramTolerance = 1e-9;
constexpr double kWeightSumTolerance = 1e-12;

std::size_t level_node_count(BasisKind kind, int j, NodeConvention convention)
{
    const int shift = (kind == BasisKind::Jacobi ? 1 : 2) - (convention == NodeConvention::Paper ? 1 : 0);
    return std::size_t{1} << (j + shift);
}

FrameLevel build_coarse_level(const BasisFamily& basis)
{
    FrameLevel level;
    level.j = -1;
    const auto rule = basis.rule(1);
    level.nodes = rule.nodes;
    level.weights = rule.weights;
    level.first = 0;
    level.width = 1;
    level.psi = {1.0};
    return level;
}

FrameLevel build_level(const BasisFamily& basis, const Filter& filter, int j, NodeConvention convention)
{
    FrameLevel level;
    level.j = j;
    const std::size_t count = level_node_count(basis.kind(), j, convention);
    auto rule = basis.rule(count);
    level.nodes = std::move(rule.nodes);
    level.weights = std::move(rule.weights);

    const std::size_t band_lo = (std::size_t{1} << j) / 2 + 1;
    const std::size_t band_hi = (std::size_t{1} << (j + 1)) - 1;
    level.first = basis.first_index(band_lo);
    level.width = basis.dimension(band_hi) - level.first;

    const double scale = std::ldexp(1.0, -j);
    std::vector<double> filter_values(level.width);
    for (std::size_t c = 0; c < level.width; ++c)
        filter_values[c] = filter(static_cast<double>(basis.band(level.first + c)) * scale);

    const std::size_t dim = level.first + level.width;
    level.psi.assign(count * level.width, 0.0);
    std::vector<double> values(dim);
    Eigen::MatrixXd scaled(count, level.width);
    for (std::size_t nu = 0; nu < count; ++nu)
    {
        basis.eval_into(level.nodes[nu], values);
        const double root_w = std::sqrt(level.weights[nu]);
        for (std::size_t c = 0; c < level.width; ++c)
        {
            const double e = values[level.first + c];
            level.psi[nu * level.width + c] = root_w * filter_values[c] * e;
            scaled(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(c)) = root_w * e;
        }
    }

    // quadrature self-check on the level's frequency window
    const double weight_sum = std::accumulate(level.weights.begin(), level.weights.end(), 0.0);
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance)
        throw FrameBuildError("level quadrature weights do not sum to one", j);
    const Eigen::MatrixXd gram = scaled.transpose() * scaled;
    const std::size_t exact = basis.exactness(count);
    for (std::size_t a = 0; a < level.width; ++a)
    {
        for (std::size_t b = a; b < level.width; ++b)
        {
            if (basis.band(level.first + a) + basis.band(level.first + b) > exact)
                continue;
            const double expected = a == b ? 1.0 : 0.0;
            if (std::abs(gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - expected) >
                kGramTolerance)
                throw FrameBuildError("level quadrature failed the exactness self-check at level " +
                                          std::to_string(j),
                                      j);
        }
    }
    return level;
}

} // namespace

NodeConvention parse_node_convention(const std::string& name)
{
    if (name == "exact")
        return NodeConvention::Exact;
    if (name == "paper")
        return NodeConvention::Paper;
    throw std::invalid_argument("unknown nodes-per-level convention: " + name);
}

std::string to_string(NodeConvention convention)
{
    return convention == NodeConvention::Exact ? "exact" : "paper";
}

NeedletFrame::NeedletFrame(BasisFamily basis, Filter filter, int jmax, NodeConvention convention,
                           std::vector<FrameLevel> levels)
    : basis_(std::move(basis))
    , filter_(std::move(filter))
    , jmax_(jmax)
    , convention_(convention)
    , levels_(std::move(levels))
{
    if (levels_.size() != static_cast<std::size_t>(jmax_ + 2))
        throw std::invalid_argument("NeedletFrame: level count does not match jmax");
    for (const auto& level : levels_)
    {
        if (level.psi.size() != level.nodes.size() * level.width || level.weights.size() != level.nodes.size())
            throw std::invalid_argument("NeedletFrame: inconsistent level block");
        dimension_ = std::max(dimension_, level.first + level.width);
    }
}

std::size_t NeedletFrame::needlet_count() const
{
    std::size_t n = 0;
    for (const auto& level : levels_)
        n += level.node_count();
    return n;
}

std::vector<double> NeedletFrame::needlet(int j, std::size_t nu) const
{
    const auto& lvl = level(j);
    std::vector<double> out(dimension_, 0.0);
    const auto row = lvl.row(nu);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(lvl.first));
    return out;
}

double NeedletFrame::needlet_value(int j, std::size_t nu, double x) const
{
    const auto& lvl = level(j);
    const auto values = basis_.eval_all(x, lvl.first + lvl.width);
    const auto row = lvl.row(nu);
    double sum = 0.0;
    for (std::size_t c = 0; c < lvl.width; ++c)
        sum += row[c] * values[lvl.first + c];
    return sum;
}

NeedletCoefficients NeedletCoefficients::zeros_like(const NeedletFrame& frame)
{
    NeedletCoefficients beta;
    for (const auto& level : frame.levels())
        beta.levels.emplace_back(level.node_count(), 0.0);
    return beta;
}

double NeedletCoefficients::squared_norm() const
{
    double sum = 0.0;
    for (const auto& level : levels)
        for (double b : level)
            sum += b * b;
    return sum;
}

NeedletFrame build_frame(const BasisFamily& basis, const Filter& filter, int jmax, NodeConvention convention)
{
    if (jmax < 0 || jmax > 20)
        throw std::invalid_argument("build_frame: jmax must lie in [0, 20]");

    std::vector<FrameLevel> levels(static_cast<std::size_t>(jmax + 2));
    levels[0] = build_coarse_level(basis);

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = jmax; j >= 0; --j)
    {
        try
        {
            levels[static_cast<std::size_t>(j + 1)] = build_level(basis, filter, j, convention);
        }
        catch (...)
        {
#pragma omp critical(needd_frame_build)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return NeedletFrame(basis, filter, jmax, convention, std::move(levels));
}

} // namespace needd
