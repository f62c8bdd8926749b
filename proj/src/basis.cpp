#include "needd/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace needd
{

BasisFamily BasisFamily::jacobi(const JacobiParams& params, std::size_t capacity)
{
    BasisFamily basis;
    basis.kind_ = BasisKind::Jacobi;
    basis.params_ = JacobiParams::make(params.alpha, params.beta);
    basis.recurrence_ = std::make_shared<const JacobiRecurrence>(JacobiRecurrence::make(basis.params_, capacity));
    return basis;
}

BasisFamily BasisFamily::fourier()
{
    BasisFamily basis;
    basis.kind_ = BasisKind::FourierPeriodic;
    return basis;
}

std::string BasisFamily::name() const
{
    if (kind_ == BasisKind::FourierPeriodic)
        return "fourier";
    return "jacobi(" + std::to_string(params_.alpha) + "," + std::to_string(params_.beta) + ")";
}

std::size_t BasisFamily::band(std::size_t index) const
{
    return kind_ == BasisKind::Jacobi ? index : (index + 1) / 2;
}

std::size_t BasisFamily::first_index(std::size_t band) const
{
    if (kind_ == BasisKind::Jacobi || band == 0)
        return band;
    return 2 * band - 1;
}

std::size_t BasisFamily::dimension(std::size_t max_band) const
{
    return kind_ == BasisKind::Jacobi ? max_band + 1 : 2 * max_band + 1;
}

void BasisFamily::eval_into(double x, std::span<double> out) const
{
    if (kind_ == BasisKind::Jacobi)
    {
        if (out.size() <= recurrence_->diag.size())
        {
            jacobi_eval_into(*recurrence_, x, out);
        }
        else
        {
            const auto rec = JacobiRecurrence::make(params_, out.size());
            jacobi_eval_into(rec, x, out);
        }
        return;
    }

    if (out.empty())
        return;
    out[0] = 1.0;
    const double angle = 2.0 * std::numbers::pi * x;
    const double c1 = std::cos(angle);
    const double s1 = std::sin(angle);
    double c = 1.0;
    double s = 0.0;
    for (std::size_t i = 1; i < out.size(); i += 2)
    {
        // rotate (c, s) by one frequency step
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
        out[i] = std::numbers::sqrt2 * c;
        if (i + 1 < out.size())
            out[i + 1] = std::numbers::sqrt2 * s;
    }
}

std::vector<double> BasisFamily::eval_all(double x, std::size_t count) const
{
    std::vector<double> out(count);
    eval_into(x, out);
    return out;
}

double BasisFamily::evaluate(std::span<const double> coeffs, double x) const
{
    const auto values = eval_all(x, coeffs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        sum += coeffs[i] * values[i];
    return sum;
}

Discretization BasisFamily::rule(std::size_t count) const
{
    if (count == 0)
        throw std::invalid_argument("BasisFamily::rule: count must be positive");
    Discretization d;
    if (kind_ == BasisKind::Jacobi)
    {
        const auto rule = cached_gauss_jacobi_rule(params_, count);
        d.nodes = rule->nodes;
        d.weights = rule->weights;
        return d;
    }
    d.nodes.resize(count);
    d.weights.assign(count, 1.0 / static_cast<double>(count));
    for (std::size_t m = 0; m < count; ++m)
        d.nodes[m] = static_cast<double>(m) / static_cast<double>(count);
    return d;
}

std::size_t BasisFamily::exactness(std::size_t count) const
{
    return kind_ == BasisKind::Jacobi ? 2 * count - 1 : count - 1;
}

} // namespace needd
