#pragma once

#include "needd/estimators.hpp"
#include "needd/inverse_models.hpp"
#include "needd/losses.hpp"
#include "needd/needlet_frame.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace needd
{

// ---------------------------------------------------------------------------
// targets

/// Donoho-Johnstone test signals on [0, 1]: blocks, bumps, heavisine, doppler.
std::function<double(double)> raw_target(const std::string& name);

/// Canonical id of a target name (stable across configs; used for seeding).
/// "smooth" is the coefficient-defined in-budget target used by the harness.
int target_id(const std::string& name);

const std::vector<std::string>& target_names();

/// Target scaled (not centred) so that its population sd on x = i/n, i = 1..n,
/// equals one. Centering would break square integrability against dx/(4x).
struct Target
{
    std::string name;
    double scale = 1.0;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

Target target_function(const std::string& name, std::size_t n = 1024);

/// In-budget smooth target with coefficients (-1)^i (1 + i)^{-(s + 1/2)} for
/// bands 0 .. max_band and zero above.
std::vector<double> smooth_coefficients(std::size_t dimension, std::size_t max_band, double s);

// ---------------------------------------------------------------------------
// rate exponents

/// Besov class probed by a rate study together with its predicted exponent μ:
/// E‖f̂ - f‖_p^p ≲ (log factors) ε^{pμ}.
struct RateTarget
{
    double s = 1.0;
    double pi = 2.0;
    double r = 2.0;
    double nu = 0.0;
    double mu = 0.0;
};

/// Wavelet scenario: dense regime s/(s+ν+1/2), sparse regime
/// (s - 1/π + 1/p)/(s + ν + 1/2 - 1/π).
double rate_exponent_wavelet(double s, double pi, double nu, double p);

/// Jacobi case with p = π: s/(s+ν+1/2) below the critical p = 2 + 1/(α+1/2),
/// s/(s + ν + (α+1)(1 - 2/p)) above it.
double rate_exponent_jacobi(double s, double nu, double alpha, double p);

/// Jacobi case with independent π and p: min{μ(s), μ(s, α), μ(s, β)}.
double rate_exponent_jacobi_general(double s, double pi, double p, double nu, double alpha, double beta);

/// Log-power correction a(γ) of the general Jacobi bound.
double rate_log_power(double s, double pi, double p, double nu, double gamma);

RateTarget make_rate_target(double s, double pi, double r, double nu, double mu);

// ---------------------------------------------------------------------------
// Monte-Carlo study

enum class EstimatorKind
{
    SvdProjection,
    SvdAdaptive,
    NeedD,
};

EstimatorKind parse_estimator(const std::string& name);
std::string to_string(EstimatorKind kind);

struct SimulationConfig
{
    std::vector<std::string> targets{"blocks", "bumps", "heavisine", "doppler"};
    std::vector<double> rsnr{3.0, 5.0, 7.0};
    std::size_t n = 1024;
    std::size_t runs = 20;
    std::vector<EstimatorKind> estimators{EstimatorKind::SvdProjection, EstimatorKind::SvdAdaptive,
                                          EstimatorKind::NeedD};
    std::uint64_t seed = 20240521;

    std::size_t kmax = 512;
    RsnrMode rsnr_mode = RsnrMode::StandardDeviation;
    double epsilon_override = -1.0; // >= 0 replaces the rsnr calibration

    double alpha = 0.0;
    double beta = 1.0;
    int jmax = -1; // -1: largest with 2^{jmax+1} <= kmax
    int m = 2;
    ProfileKind profile = ProfileKind::PolynomialShape;
    NodeConvention nodes = NodeConvention::Exact;

    double gamma = 0.1;
    LogBase log_base = LogBase::Natural;

    double kappa = kDefaultKappa;
    SigmaMode sigma_mode = SigmaMode::Level;

    void validate() const;
    int resolved_jmax() const;
};

SimulationConfig load_simulation_config(const std::string& path);
SimulationConfig parse_simulation_config(const std::string& json_text);

struct CellResult
{
    std::string target;
    double rsnr = 0.0;
    std::size_t noise_index = 0;
    std::string estimator;
    double epsilon = 0.0;
    std::vector<double> l1;
    std::vector<double> rmse;
    std::vector<std::uint64_t> seeds;
    double mean_l1 = 0.0;
    double mean_rmse = 0.0;
    double se_l1 = 0.0;
    double se_rmse = 0.0;
};

struct SimulationReport
{
    std::vector<std::string> targets;
    std::vector<double> rsnr;
    std::vector<std::string> estimators;
    std::uint64_t seed = 0;
    std::vector<CellResult> cells; // ordered target-major, then noise, then estimator

    const CellResult& cell(const std::string& target, double rsnr, const std::string& estimator) const;
};

/// Mean and standard error of the stored per-run values.
void summarize(CellResult& cell);

SimulationReport run_experiment(const SimulationConfig& config);

// ---------------------------------------------------------------------------
// rate study

struct RateStudyConfig
{
    std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    std::size_t runs = 10;
    std::uint64_t seed = 7;
    double kappa = kDefaultKappa;
};

struct RateStudyResult
{
    std::vector<double> epsilons;
    std::vector<double> mean_error;
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
    double mu = 0.0;
    double gap = 0.0; // slope - mu
};

/// NEED-D on `truth` (basis coefficients) for each ε; error is ‖f̂ - f‖ in the model's
/// L2 space. Fits log(mean error) against log(ε) by least squares.
RateStudyResult rate_study(const SvdModel& model, const NeedletFrame& frame, std::span<const double> truth,
                           const RateStudyConfig& config, const RateTarget& target);

// ---------------------------------------------------------------------------
// reports

enum class ReportFormat
{
    Csv,
    Json,
};

/// CSV: one table per loss (L1 then RMSE), rows are targets, columns are
/// estimator x noise level. JSON: full per-run detail with seeds.
std::string format_report(const SimulationReport& report, ReportFormat format);
void emit_report(const SimulationReport& report, ReportFormat format, const std::string& path);
SimulationReport parse_report_json(const std::string& json_text);

} // namespace needd
