#include "doctest.h"

#include "needd/littlewood_paley.hpp"

#include <cmath>
#include <vector>

using namespace needd;

TEST_CASE("polynomial profile boundary values")
{
    const auto phi = make_profile(ProfileKind::PolynomialShape, 2);
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(0.5) == 1.0);
    CHECK(phi(1.0) == 0.0);
    CHECK(phi(3.0) == 0.0);
    CHECK(phi(0.75) == doctest::Approx(0.5).epsilon(1e-15));

    // degree-5 smoothstep 10t^3 - 15t^4 + 6t^5
    const auto c = phi.transition();
    REQUIRE(c.size() == 6);
    CHECK(c[3] == doctest::Approx(10.0));
    CHECK(c[4] == doctest::Approx(-15.0));
    CHECK(c[5] == doctest::Approx(6.0));

    CHECK_THROWS(make_profile(ProfileKind::PolynomialShape, 0));
    CHECK_THROWS(parse_profile_kind("gaussian"));
    CHECK(parse_profile_kind("polynomial") == ProfileKind::PolynomialShape);
    CHECK(parse_profile_kind("exponential") == ProfileKind::SmoothExponential);
}

TEST_CASE("profile derivatives vanish at the transition ends")
{
    for (int m : {1, 2, 3, 4})
    {
        const auto phi = make_profile(ProfileKind::PolynomialShape, m);
        const double h = 1e-5;
        auto d1 = [&](double x) { return (phi(x + h) - phi(x - h)) / (2 * h); };
        // m = 1 has a jump in φ'' at the ends, so the central difference is only O(h) there
        const double tol = m >= 2 ? 1e-8 : 10 * h;
        CAPTURE(m);
        CHECK(std::abs(d1(0.5)) <= tol);
        CHECK(std::abs(d1(1.0)) <= tol);
        CHECK(d1(0.75) < 0.0);
    }
}

TEST_CASE("profile is monotone and bounded")
{
    for (auto kind : {ProfileKind::PolynomialShape, ProfileKind::SmoothExponential})
    {
        const auto phi = make_profile(kind, 2);
        double prev = 1.0;
        for (int k = 0; k <= 2000; ++k)
        {
            const double x = 1.5 * k / 2000.0;
            const double v = phi(x);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("filter values")
{
    const Filter a(make_profile(ProfileKind::PolynomialShape, 2));
    CHECK(a(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a(0.4) == 0.0);
    CHECK(a(0.5) == 0.0);
    CHECK(a(2.0) == 0.0);
    CHECK(a(2.5) == 0.0);
    CHECK(a(0.75) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(filter_a(a, 1.0) == a(1.0));
}

TEST_CASE("partition of unity")
{
    for (auto kind : {ProfileKind::PolynomialShape, ProfileKind::SmoothExponential})
    {
        const Filter a(make_profile(kind, 2));
        std::vector<double> grid;
        for (int k = 0; k < 10000; ++k)
            grid.push_back(1.0 + 1023.0 * k / 9999.0);
        grid.push_back(1.5);
        CHECK(check_partition(a, grid) <= 1e-12);

        for (double xi = 1.0; xi <= 2.0; xi += 0.01)
            CHECK(std::abs(a(xi) * a(xi) + a(xi / 2) * a(xi / 2) - 1.0) <= 1e-12);

        // below 1 the sum only reaches 1 - φ(ξ)
        const double phi06 = a.profile()(0.6);
        CHECK(partition_sum(a, 0.6) == doctest::Approx(1.0 - phi06).epsilon(1e-13));
        CHECK(partition_sum(a, 0.6) < 1.0);
    }
}

TEST_CASE("filter lower bound on [3/4, 7/4]")
{
    const Filter a(make_profile(ProfileKind::PolynomialShape, 2));
    // minimum at 7/4: a = sqrt(1 - S(3/4)) with S(t) = 10t^3 - 15t^4 + 6t^5
    const double t = 0.75;
    const double s = 10 * t * t * t - 15 * t * t * t * t + 6 * t * t * t * t * t;
    const double c = filter_lower_bound(a, 0.75, 1.75, 10001);
    CHECK(c == doctest::Approx(std::sqrt(1.0 - s)).epsilon(1e-12));
    CHECK(c > 0.3);
}

TEST_CASE("dyadic band support")
{
    const Filter a(make_profile(ProfileKind::PolynomialShape, 2));
    for (int j = 0; j <= 10; ++j)
    {
        const double scale = std::ldexp(1.0, j);
        for (int k = 0; k <= 4 * (1 << j); ++k)
            if (a(k / scale) != 0.0)
            {
                CHECK(2 * k > (1 << j));
                CHECK(k < 2 * (1 << j));
            }
    }
}
