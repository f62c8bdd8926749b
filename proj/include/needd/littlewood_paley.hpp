#pragma once

#include <span>
#include <string>
#include <vector>

namespace needd
{

enum class ProfileKind
{
    PolynomialShape,
    SmoothExponential,
};

ProfileKind parse_profile_kind(const std::string& name);
std::string to_string(ProfileKind kind);

/// Cutoff φ: 1 on [0, 1/2], 0 on [1, ∞), monotone transition in between.
///
/// The polynomial shape uses φ(ξ) = 1 - S(2ξ - 1) on [1/2, 1], where S is the
/// degree-(2m+1) polynomial with S(0) = 0, S(1) = 1 and its first m derivatives
/// vanishing at both ends. `transition` holds S's monomial coefficients.
class CutoffProfile
{
public:
    static CutoffProfile make(ProfileKind kind, int m);

    ProfileKind kind() const { return kind_; }
    int smoothness() const { return m_; }
    std::span<const double> transition() const { return transition_; }

    double operator()(double xi) const;

private:
    ProfileKind kind_ = ProfileKind::PolynomialShape;
    int m_ = 2;
    std::vector<double> transition_;
};

CutoffProfile make_profile(ProfileKind kind, int m);

/// Littlewood-Paley filter a(ξ) = sqrt(φ(ξ/2) - φ(ξ)), supported in [1/2, 2].
class Filter
{
public:
    explicit Filter(CutoffProfile profile) : profile_(std::move(profile)) {}

    const CutoffProfile& profile() const { return profile_; }

    double operator()(double xi) const;

private:
    CutoffProfile profile_;
};

double filter_a(const Filter& filter, double xi);

/// Σ_{j>=0} a²(ξ/2^j) for a single ξ.
double partition_sum(const Filter& filter, double xi);

/// max over the grid of |Σ_j a²(ξ/2^j) - 1|.
double check_partition(const Filter& filter, std::span<const double> xi_grid);

/// min a(ξ) over `points` equispaced samples of [lo, hi].
double filter_lower_bound(const Filter& filter, double lo, double hi, int points);

} // namespace needd
