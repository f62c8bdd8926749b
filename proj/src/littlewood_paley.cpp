#include "needd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace needd
{

namespace
{

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double smooth_step(double t)
{
    auto g = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
    const double left = g(t);
    return left / (left + g(1.0 - t));
}

constexpr double kRadicandTolerance = 1e-15;

} // namespace

ProfileKind parse_profile_kind(const std::string& name)
{
    if (name == "polynomial" || name == "polynomial-shape")
        return ProfileKind::PolynomialShape;
    if (name == "exponential" || name == "smooth-exponential")
        return ProfileKind::SmoothExponential;
    throw std::invalid_argument("unsupported cutoff profile kind: " + name);
}

std::string to_string(ProfileKind kind)
{
    return kind == ProfileKind::PolynomialShape ? "polynomial-shape" : "smooth-exponential";
}

CutoffProfile CutoffProfile::make(ProfileKind kind, int m)
{
    if (m < 1)
        throw std::invalid_argument("cutoff profile smoothness m must be >= 1");
    if (kind != ProfileKind::PolynomialShape && kind != ProfileKind::SmoothExponential)
        throw std::invalid_argument("unsupported cutoff profile kind");

    CutoffProfile profile;
    profile.kind_ = kind;
    profile.m_ = m;
    if (kind == ProfileKind::PolynomialShape)
    {
        // S(t) = t^{m+1} Σ_k C(m+k, k) (1-t)^k, expanded in monomials
        profile.transition_.assign(static_cast<std::size_t>(2 * m + 2), 0.0);
        for (int k = 0; k <= m; ++k)
            for (int l = 0; l <= k; ++l)
                profile.transition_[static_cast<std::size_t>(m + 1 + l)] +=
                    binomial(m + k, k) * binomial(k, l) * ((l % 2) ? -1.0 : 1.0);
    }
    return profile;
}

double CutoffProfile::operator()(double xi) const
{
    const double x = std::abs(xi);
    if (x <= 0.5)
        return 1.0;
    if (x >= 1.0)
        return 0.0;
    const double t = 2.0 * x - 1.0;
    if (kind_ == ProfileKind::SmoothExponential)
        return 1.0 - smooth_step(t);

    double s = 0.0;
    for (auto c = transition_.rbegin(); c != transition_.rend(); ++c)
        s = s * t + *c;
    return 1.0 - s;
}

CutoffProfile make_profile(ProfileKind kind, int m)
{
    return CutoffProfile::make(kind, m);
}

double Filter::operator()(double xi) const
{
    if (xi < 0.0)
        throw std::domain_error("filter_a: xi must be nonnegative");
    if (xi <= 0.5 || xi >= 2.0)
        return 0.0;
    const double radicand = profile_(0.5 * xi) - profile_(xi);
    if (radicand < -kRadicandTolerance)
        throw std::logic_error("filter_a: negative radicand, cutoff profile is not monotone");
    return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

double filter_a(const Filter& filter, double xi)
{
    return filter(xi);
}

double partition_sum(const Filter& filter, double xi)
{
    double sum = 0.0;
    for (double x = xi; x > 0.5; x *= 0.5)
    {
        const double a = filter(x);
        sum += a * a;
    }
    return sum;
}

double check_partition(const Filter& filter, std::span<const double> xi_grid)
{
    double worst = 0.0;
    for (double xi : xi_grid)
        worst = std::max(worst, std::abs(partition_sum(filter, xi) - 1.0));
    return worst;
}

double filter_lower_bound(const Filter& filter, double lo, double hi, int points)
{
    double low = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i)
    {
        const double xi = lo + (hi - lo) * i / std::max(1, points - 1);
        low = std::min(low, filter(xi));
    }
    return low;
}

} // namespace needd
