#pragma once

#include "needd/basis.hpp"
#include "needd/littlewood_paley.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace needd
{

/// How many quadrature nodes carry level j.
///   Exact: 2^{j+1} Jacobi nodes (2^{j+2} Fourier nodes); the rule integrates
///          products of two level-j needlets exactly, so the frame is tight.
///   Paper: 2^j Jacobi nodes (2^{j+1} Fourier nodes); not exact on those products.
enum class NodeConvention
{
    Exact,
    Paper,
};

NodeConvention parse_node_convention(const std::string& name);
std::string to_string(NodeConvention convention);

class FrameBuildError : public std::runtime_error
{
public:
    FrameBuildError(const std::string& what, int level) : std::runtime_error(what), level_(level) {}
    int level() const noexcept { return level_; }

private:
    int level_;
};

/// One resolution level: nodes η_ν, weights λ_ν and the dense block of needlet
/// coefficients ψ^i_{j,η_ν} for coefficient indices i in [first, first + width).
struct FrameLevel
{
    int j = -1;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t first = 0;
    std::size_t width = 0;
    std::vector<double> psi; // row-major, nodes.size() x width

    std::size_t node_count() const { return nodes.size(); }
    std::span<const double> row(std::size_t nu) const { return {psi.data() + nu * width, width}; }
};

/// Needlet tight frame over an orthonormal basis, levels -1 .. jmax.
class NeedletFrame
{
public:
    NeedletFrame(BasisFamily basis, Filter filter, int jmax, NodeConvention convention,
                 std::vector<FrameLevel> levels);

    const BasisFamily& basis() const { return basis_; }
    const Filter& filter() const { return filter_; }
    int jmax() const { return jmax_; }
    NodeConvention convention() const { return convention_; }

    /// Number of basis coefficients touched by the frame (bands < 2^{jmax+1}).
    std::size_t dimension() const { return dimension_; }
    /// Highest band reproduced exactly by analysis followed by synthesis.
    std::size_t budget_band() const { return std::size_t{1} << jmax_; }

    const FrameLevel& level(int j) const { return levels_.at(static_cast<std::size_t>(j + 1)); }
    std::span<const FrameLevel> levels() const { return levels_; }
    std::size_t needlet_count() const;

    /// ψ_{j,η_ν} as a full coefficient vector of length dimension().
    std::vector<double> needlet(int j, std::size_t nu) const;
    /// ψ_{j,η_ν}(x) on the natural domain.
    double needlet_value(int j, std::size_t nu, double x) const;

private:
    BasisFamily basis_;
    Filter filter_;
    int jmax_;
    NodeConvention convention_;
    std::vector<FrameLevel> levels_;
    std::size_t dimension_ = 0;
};

/// Needlet coefficients β_{j,η}, one vector per level (index j + 1).
struct NeedletCoefficients
{
    std::vector<std::vector<double>> levels;

    std::vector<double>& level(int j) { return levels.at(static_cast<std::size_t>(j + 1)); }
    const std::vector<double>& level(int j) const { return levels.at(static_cast<std::size_t>(j + 1)); }

    static NeedletCoefficients zeros_like(const NeedletFrame& frame);
    double squared_norm() const;
};

NeedletFrame build_frame(const BasisFamily& basis, const Filter& filter, int jmax,
                         NodeConvention convention = NodeConvention::Exact);

/// β_{j,η} = Σ_i f_i ψ^i_{j,η}; f must hold at least frame.dimension() entries.
NeedletCoefficients analyze(const NeedletFrame& frame, std::span<const double> f);

/// Σ_{j,η} β_{j,η} ψ^i_{j,η} as a coefficient vector of length frame.dimension().
std::vector<double> synthesize(const NeedletFrame& frame, const NeedletCoefficients& beta);

namespace serial
{
/// Single-threaded reference kernels, kept for testing the OpenMP versions.
NeedletCoefficients analyze(const NeedletFrame& frame, std::span<const double> f);
std::vector<double> synthesize(const NeedletFrame& frame, const NeedletCoefficients& beta);
} // namespace serial

// ---------------------------------------------------------------------------
// diagnostics

/// σ_j² = sup_η Σ_i (ψ^i_{j,η} / b_i)², for j = -1 .. jmax (index j + 1).
std::vector<double> level_sigma(const NeedletFrame& frame, std::span<const double> singular_values);

/// Per-needlet variant σ_{j,η}² = Σ_i (ψ^i_{j,η} / b_i)² (square roots returned).
NeedletCoefficients node_sigma(const NeedletFrame& frame, std::span<const double> singular_values);

struct NormEstimate
{
    double value = 0.0;
    bool resolved = true; // false when order doubling moved the estimate by more than 1e-3
};

/// ‖ψ_{j,η_ν}‖_p under the basis measure; p = infinity uses a dense grid.
NormEstimate frame_norm(const NeedletFrame& frame, int j, std::size_t nu, double p);

/// frame_norm for every node of level j.
std::vector<NormEstimate> level_norms(const NeedletFrame& frame, int j, double p);

/// Smallest C with |ψ_{j,η_ν}(cos θ)| <= C 2^{j/2} / ((1 + 2^j|θ - θ_ν|)^l sqrt(ω(2^j, cos θ)))
/// on a dense θ grid (Jacobi); the Fourier family uses periodic distance and ω = 1.
double localization_check(const NeedletFrame& frame, int j, std::size_t nu, double l,
                          std::size_t grid_points = 0);
/// localization_check for every node of level j; the default grid has 64 2^j intervals.
std::vector<double> level_localization(const NeedletFrame& frame, int j, double l, std::size_t grid_points = 0);

struct BesovParams
{
    double s = 1.0;
    double pi = 2.0;
    double r = 2.0; // may be +infinity

    static BesovParams make(double s, double pi, double r);
};

/// ‖(2^{js} (Σ_η |β_{j,η}|^π ‖ψ_{j,η}‖_π^π)^{1/π})_j‖_{l_r}
double besov_seq_norm(const NeedletCoefficients& beta, const BesovParams& bp,
                      const NeedletCoefficients& psi_norms);
double besov_seq_norm(const NeedletFrame& frame, const NeedletCoefficients& beta, const BesovParams& bp);

/// ‖f - Σ_{j' <= j} Λ_{j'} f‖_p for j = j_lo .. j_hi, by quadrature on the natural domain.
std::vector<double> best_approx_errors(const NeedletFrame& frame, std::span<const double> f, double p,
                                       int j_lo, int j_hi);

/// p-norm of the function with coefficients f under the basis measure.
double function_norm(const BasisFamily& basis, std::span<const double> f, double p,
                     std::size_t order = 0);

struct InvariantCheck
{
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Weight sums, Parseval and round-trip defects on random in-budget coefficient
/// vectors, zero-sum levels and ‖ψ‖₂ <= 1.
std::vector<InvariantCheck> frame_invariants(const NeedletFrame& frame, std::size_t samples = 20,
                                             std::uint64_t seed = 1);

} // namespace needd
