#include "needd/simlab.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace needd
{

namespace
{

constexpr std::array<double, 11> kJumps{0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
constexpr std::array<double, 11> kBlockHeights{4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr std::array<double, 11> kBumpHeights{4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr std::array<double, 11> kBumpWidths{0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};

double sgn(double x)
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

double blocks(double x)
{
    double f = 0.0;
    for (std::size_t k = 0; k < kJumps.size(); ++k)
        f += kBlockHeights[k] * 0.5 * (1.0 + sgn(x - kJumps[k]));
    return f;
}

double bumps(double x)
{
    double f = 0.0;
    for (std::size_t k = 0; k < kJumps.size(); ++k)
        f += kBumpHeights[k] * std::pow(1.0 + std::abs((x - kJumps[k]) / kBumpWidths[k]), -4.0);
    return f;
}

double heavisine(double x)
{
    return 4.0 * std::sin(4.0 * std::numbers::pi * x) - sgn(x - 0.3) - sgn(0.72 - x);
}

double doppler(double x)
{
    return std::sqrt(x * (1.0 - x)) * std::sin(2.0 * std::numbers::pi * 1.05 / (x + 0.05));
}

} // namespace

const std::vector<std::string>& target_names()
{
    static const std::vector<std::string> names{"blocks", "bumps", "heavisine", "doppler"};
    return names;
}

int target_id(const std::string& name)
{
    const auto& names = target_names();
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name)
            return static_cast<int>(k);
    if (name == "smooth")
        return static_cast<int>(names.size());
    throw std::invalid_argument("unknown target: " + name);
}

std::function<double(double)> raw_target(const std::string& name)
{
    switch (target_id(name))
    {
    case 4:
        throw std::invalid_argument("the smooth target is defined by its coefficients");
    case 0:
        return blocks;
    case 1:
        return bumps;
    case 2:
        return heavisine;
    default:
        return doppler;
    }
}

Target target_function(const std::string& name, std::size_t n)
{
    auto raw = raw_target(name);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
    {
        const double v = raw(static_cast<double>(i) / static_cast<double>(n));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double sd = std::sqrt(std::max(0.0, sum2 / static_cast<double>(n) - mean * mean));
    Target target;
    target.name = name;
    target.scale = 1.0 / sd;
    target.eval = [raw, scale = target.scale](double x) { return scale * raw(x); };
    return target;
}

std::vector<double> smooth_coefficients(std::size_t dimension, std::size_t max_band, double s)
{
    std::vector<double> f(dimension, 0.0);
    for (std::size_t i = 0; i < dimension && i <= max_band; ++i)
        f[i] = ((i % 2) ? -1.0 : 1.0) * std::pow(1.0 + static_cast<double>(i), -(s + 0.5));
    return f;
}

} // namespace needd
