#pragma once

#include "needd/basis.hpp"
#include "needd/rng.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace needd
{

enum class ModelKind
{
    Wicksell,
    Deconvolution,
    Direct, // identity operator on the Wicksell domain, b ≡ 1
};

std::string to_string(ModelKind kind);

/// Sequence-space model Y_i = b_i f_i + ε ξ_i of a compact operator K with SVD
/// (b_i, e_i, g_i). Coefficient index i runs over frame_basis() indices; bands
/// 0 .. kmax are covered.
///
/// Wicksell and Direct live on [0, 1] with dμ = dx / (4x) and
/// e_i(x) = 4x² Π_i(2x² - 1), Π_i orthonormal for Jacobi(0, 1). Deconvolution lives
/// on the periodic unit interval with the real Fourier basis.
class SvdModel
{
public:
    SvdModel(ModelKind kind, std::size_t kmax, std::vector<double> spectrum, double nu);

    ModelKind kind() const { return kind_; }
    std::size_t kmax() const { return kmax_; }
    std::size_t dimension() const { return singular_values_.size(); }
    double nu() const { return nu_; }

    /// b_i per coefficient index.
    std::span<const double> singular_values() const { return singular_values_; }
    double b(std::size_t index) const { return singular_values_.at(index); }
    /// Singular value of band k (|γ̂_k| for deconvolution).
    std::span<const double> spectrum() const { return spectrum_; }

    /// Basis in which needlet frames for this model are built.
    const BasisFamily& frame_basis() const { return basis_; }

    /// e_0(x) .. e_{out.size()-1}(x) on the natural domain.
    void e_into(double x, std::span<double> out) const;
    /// g_0(y) .. g_{out.size()-1}(y) on the data domain.
    void g_into(double y, std::span<double> out) const;
    double e(std::size_t index, double x) const;

    /// Σ_i c_i e_i(x)
    double evaluate(std::span<const double> coeffs, double x) const;

private:
    ModelKind kind_;
    std::size_t kmax_;
    double nu_;
    BasisFamily basis_;
    std::vector<double> spectrum_;
    std::vector<double> singular_values_;
    std::vector<double> signs_;
};

SvdModel wicksell_model(std::size_t kmax);
SvdModel deconvolution_model(std::span<const double> kernel_spectrum, std::size_t kmax);
SvdModel direct_model(std::size_t kmax);

/// Observed coefficients.
struct SequenceObservation
{
    std::vector<double> y;
    double epsilon = 0.0;

    std::size_t kmax() const { return y.empty() ? 0 : y.size() - 1; }
};

struct Projection
{
    std::vector<double> coeffs;
    double relative_change = 0.0; // under order doubling
    bool resolved = true;         // relative_change <= 1e-6
};

/// f_i = ∫ f e_i dμ for i < model.dimension(). `order` overrides the base quadrature order.
Projection coeffs_from_function(const SvdModel& model, const std::function<double(double)>& f,
                                std::size_t order = 0);

/// Coefficient-space forward map: b_i f_i.
std::vector<double> forward(const SvdModel& model, std::span<const double> f);

/// Kf(y) = Σ_i b_i f_i g_i(y) at the given points.
std::vector<double> forward_samples(const SvdModel& model, std::span<const double> f, std::span<const double> ys);

/// Y_i = b_i f_i + ε ξ_i with ξ_i standard normal drawn from `stream`.
SequenceObservation sample_observation(const SvdModel& model, std::span<const double> f, double epsilon,
                                       RandomStream& stream);

enum class RsnrMode
{
    StandardDeviation, // sd of Kf around its grid mean
    RootMeanSquare,    // sqrt(mean Kf²)
};

RsnrMode parse_rsnr_mode(const std::string& name);

/// σ = spread(Kf on y = i/n, i = 1..n) / rsnr;  ε = σ / √n.
double calibrate_epsilon(const SvdModel& model, std::span<const double> f, double rsnr, std::size_t n,
                         RsnrMode mode = RsnrMode::StandardDeviation);

/// Basis values e_i(k/n), k = 1..n, cached for repeated synthesis on the loss grid.
class NaturalGrid
{
public:
    NaturalGrid(const SvdModel& model, std::size_t n, std::size_t count);

    std::size_t size() const { return points_.size(); }
    std::size_t count() const { return count_; }
    std::span<const double> points() const { return points_; }
    /// e_i at grid point k
    double value(std::size_t k, std::size_t i) const { return values_[k * count_ + i]; }

    std::vector<double> evaluate(std::span<const double> coeffs) const;

private:
    std::size_t count_;
    std::vector<double> points_;
    std::vector<double> values_;
};

} // namespace needd
