#pragma once

#include "needd/inverse_models.hpp"
#include "needd/needlet_frame.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace needd
{

/// κ used in the simulation study: 0.75 √2.
inline const double kDefaultKappa = 0.75 * std::numbers::sqrt2;

enum class SigmaMode
{
    Level, // σ_j = sup over the level
    Node,  // σ_{j,η} per needlet
};

/// Hard-threshold plan: keep β̂_{j,η} iff |β̂_{j,η}| >= κ t_ε σ_j and j <= J.
struct ThresholdPlan
{
    double kappa = kDefaultKappa;
    double t_eps = 0.0;
    int top_level = -1;
    std::vector<double> sigma; // j = -1 .. jmax (index j + 1)
    SigmaMode mode = SigmaMode::Level;
    NeedletCoefficients node_sigma; // filled when mode == Node

    double threshold(int j, std::size_t nu) const;
};

/// t_ε = ε sqrt(ln(1/ε)).
double noise_scale(double epsilon);

/// floor(log2(t_ε^{-2/(1+2ν)})) clamped to [-1, jmax]; jmax when t_ε = 0.
int top_level_for(double t_eps, double nu, int jmax);

ThresholdPlan make_threshold_plan(const NeedletFrame& frame, const SvdModel& model, double epsilon,
                                  double kappa = kDefaultKappa, SigmaMode mode = SigmaMode::Level);

struct NeedDResult
{
    NeedletCoefficients beta_hat; // unthresholded Σ_i (Y_i / b_i) ψ^i_{j,η}
    NeedletCoefficients beta_kept; // after thresholding
    std::vector<double> fhat;      // basis coefficients, length frame.dimension()
    std::size_t kept = 0;
};

/// Σ_i (Y_i / b_i) ψ^i_{j,η}
NeedletCoefficients empirical_coefficients(const NeedletFrame& frame, const SvdModel& model,
                                           const SequenceObservation& obs);

NeedDResult need_d(const NeedletFrame& frame, const SvdModel& model, const SequenceObservation& obs,
                   const ThresholdPlan& plan);

/// Y_i / b_i for i <= n, zero above.
std::vector<double> svd_projection(const SvdModel& model, const SequenceObservation& obs, std::size_t n);

struct ProjectionOracle
{
    std::size_t best_n = 0;
    double best_error = 0.0;
    std::vector<double> fhat;
    std::vector<double> errors; // weighted RMSE for N = 0 .. max_n
};

/// Exhaustive search over N in [0, max_n] of the weighted RMSE against `truth` on the grid;
/// ties go to the smaller N. max_n defaults to obs.kmax() / 2.
ProjectionOracle svd_projection_oracle(const SvdModel& model, const SequenceObservation& obs,
                                       std::span<const double> truth, const NaturalGrid& grid,
                                       std::size_t max_n = 0);

/// Block layout of the adaptive SVD filter. Paper indices (1-based) i map to
/// coefficient index i - 1.
struct AdaptiveSvdConfig
{
    double gamma = 0.1;
    double nu_eps = 5.0;
    double rho_eps = 0.0;
    std::vector<std::size_t> boundaries; // κ_0 = 1, κ_1, ..., κ_J (1-based)
    std::size_t n_cap = 0;               // N with κ_J = N + 1
    std::size_t n0 = 0;                  // min(n/2, N): number of coefficients kept

    std::size_t block_count() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
};

/// Logarithm used in ν_ε and ρ_ε.
enum class LogBase
{
    Natural,
    Ten,
};

LogBase parse_log_base(const std::string& name);

AdaptiveSvdConfig make_blocks(double epsilon, const SvdModel& model, std::size_t n, double gamma = 0.1,
                              LogBase base = LogBase::Natural);

struct AdaptiveSvdResult
{
    std::vector<double> fhat;
    std::vector<double> weights; // λ_i per coefficient index
};

AdaptiveSvdResult svd_adaptive(const SvdModel& model, const SequenceObservation& obs, double epsilon,
                               const AdaptiveSvdConfig& config);

} // namespace needd
