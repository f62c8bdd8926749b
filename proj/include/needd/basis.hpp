#pragma once

#include "needd/jacobi.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace needd
{

enum class BasisKind
{
    Jacobi,
    FourierPeriodic,
};

/// Nodes and positive weights of a discrete measure.
struct Discretization
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Orthonormal basis of a frame's natural domain, indexed by coefficient index i.
///
/// Jacobi: e_i = Π_i on [-1, 1] under dγ_{α,β}; band(i) = i.
/// Fourier: e_0 = 1, e_{2k-1} = √2 cos(2πkx), e_{2k} = √2 sin(2πkx) on [0, 1)
/// under dx; band(i) = ceil(i / 2). The space H_k of the frame scheme is the span
/// of the coefficients sharing band k.
class BasisFamily
{
public:
    static constexpr std::size_t kDefaultCapacity = 8192;

    static BasisFamily jacobi(const JacobiParams& params, std::size_t capacity = kDefaultCapacity);
    static BasisFamily fourier();

    BasisKind kind() const { return kind_; }
    const JacobiParams& jacobi_params() const { return params_; }
    std::string name() const;

    std::size_t band(std::size_t index) const;
    std::size_t first_index(std::size_t band) const;
    /// Number of coefficients with band <= max_band.
    std::size_t dimension(std::size_t max_band) const;

    double domain_lo() const { return kind_ == BasisKind::Jacobi ? -1.0 : 0.0; }
    double domain_hi() const { return 1.0; }

    /// e_0(x) .. e_{out.size()-1}(x)
    void eval_into(double x, std::span<double> out) const;
    std::vector<double> eval_all(double x, std::size_t count) const;
    double evaluate(std::span<const double> coeffs, double x) const;

    /// Gauss rule (Jacobi) or equispaced rule (Fourier) with `count` nodes; exact on
    /// products e_i e_k with band(i) + band(k) <= 2 count - 1 (Jacobi) or < count (Fourier).
    Discretization rule(std::size_t count) const;

    /// Highest band sum the rule(count) integrates exactly.
    std::size_t exactness(std::size_t count) const;

private:
    BasisKind kind_ = BasisKind::Jacobi;
    JacobiParams params_;
    std::shared_ptr<const JacobiRecurrence> recurrence_;
};

} // namespace needd
