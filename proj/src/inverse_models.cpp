#include "needd/inverse_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace needd
{

namespace
{

constexpr double kProjectionResolution = 1e-6;

double wicksell_singular_value(std::size_t k)
{
    return std::numbers::pi / 16.0 / std::sqrt(1.0 + static_cast<double>(k));
}

double loglog_slope(std::span<const double> spectrum)
{
    if (spectrum.size() < 2)
        return 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k)
    {
        const double x = std::log1p(static_cast<double>(k));
        const double y = std::log(spectrum[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool on_wicksell_domain(ModelKind kind)
{
    return kind == ModelKind::Wicksell || kind == ModelKind::Direct;
}

std::vector<double> project_once(const SvdModel& model, const std::function<double(double)>& f, std::size_t order)
{
    const std::size_t dim = model.dimension();
    std::vector<double> coeffs(dim, 0.0);
    std::vector<double> values(dim);
    const auto& basis = model.frame_basis();

    if (on_wicksell_domain(model.kind()))
    {
        // t = 2x² - 1 maps dμ = dx/(4x) to dt/(8(1+t)) = dγ_{0,1}/(4(1+t));
        // f_k = ∫ F(t) Π_k(t) dγ_{0,1} with F(t) = f(x) / (4x²)
        const auto rule = basis.rule(order);
        for (std::size_t q = 0; q < rule.size(); ++q)
        {
            const double t = rule.nodes[q];
            const double x2 = 0.5 * (1.0 + t);
            const double big_f = f(std::sqrt(x2)) / (4.0 * x2);
            basis.eval_into(t, values);
            const double w = rule.weights[q] * big_f;
            for (std::size_t k = 0; k < dim; ++k)
                coeffs[k] += w * values[k];
        }
        return coeffs;
    }

    for (std::size_t m = 0; m < order; ++m)
    {
        const double x = static_cast<double>(m) / static_cast<double>(order);
        basis.eval_into(x, values);
        const double w = f(x) / static_cast<double>(order);
        for (std::size_t k = 0; k < dim; ++k)
            coeffs[k] += w * values[k];
    }
    return coeffs;
}

} // namespace

std::string to_string(ModelKind kind)
{
    switch (kind)
    {
    case ModelKind::Wicksell:
        return "wicksell";
    case ModelKind::Deconvolution:
        return "deconvolution";
    case ModelKind::Direct:
        return "direct";
    }
    return "unknown";
}

SvdModel::SvdModel(ModelKind kind, std::size_t kmax, std::vector<double> spectrum, double nu)
    : kind_(kind)
    , kmax_(kmax)
    , nu_(nu)
    , basis_(kind == ModelKind::Deconvolution ? BasisFamily::fourier()
                                              : BasisFamily::jacobi(JacobiParams::make(0.0, 1.0)))
    , spectrum_(std::move(spectrum))
{
    if (spectrum_.size() != kmax_ + 1)
        throw std::invalid_argument("SvdModel: spectrum length must be kmax + 1");
    const std::size_t dim = basis_.dimension(kmax_);
    singular_values_.resize(dim);
    signs_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
    {
        const double g = spectrum_[basis_.band(i)];
        if (!(std::abs(g) > 0.0))
            throw std::domain_error("SvdModel: zero singular value at band " + std::to_string(basis_.band(i)));
        singular_values_[i] = std::abs(g);
        signs_[i] = g < 0.0 ? -1.0 : 1.0;
    }
}

void SvdModel::e_into(double x, std::span<double> out) const
{
    if (on_wicksell_domain(kind_))
    {
        const double t = std::clamp(2.0 * x * x - 1.0, -1.0, 1.0);
        basis_.eval_into(t, out);
        const double scale = 4.0 * x * x;
        for (double& v : out)
            v *= scale;
        return;
    }
    basis_.eval_into(x, out);
}

void SvdModel::g_into(double y, std::span<double> out) const
{
    if (kind_ == ModelKind::Wicksell)
    {
        // g_k = U_{2k+1}, Chebyshev polynomials of the second kind
        double u_prev = 1.0;   // U_0
        double u = 2.0 * y;    // U_1
        for (std::size_t k = 0; k < out.size(); ++k)
        {
            out[k] = u;
            const double u_next = 2.0 * y * u - u_prev;
            u_prev = u_next;
            u = 2.0 * y * u_next - u;
        }
        return;
    }
    e_into(y, out);
    if (kind_ == ModelKind::Deconvolution)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] *= signs_[i];
}

double SvdModel::e(std::size_t index, double x) const
{
    std::vector<double> values(index + 1);
    e_into(x, values);
    return values[index];
}

double SvdModel::evaluate(std::span<const double> coeffs, double x) const
{
    std::vector<double> values(coeffs.size());
    e_into(x, values);
    return std::inner_product(coeffs.begin(), coeffs.end(), values.begin(), 0.0);
}

SvdModel wicksell_model(std::size_t kmax)
{
    if (kmax < 1)
        throw std::invalid_argument("wicksell_model: kmax must be >= 1");
    std::vector<double> spectrum(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k)
        spectrum[k] = wicksell_singular_value(k);
    return SvdModel(ModelKind::Wicksell, kmax, std::move(spectrum), 0.5);
}

SvdModel deconvolution_model(std::span<const double> kernel_spectrum, std::size_t kmax)
{
    if (kernel_spectrum.size() < kmax + 1)
        throw std::invalid_argument("deconvolution_model: kernel spectrum shorter than kmax + 1");
    std::vector<double> spectrum(kernel_spectrum.begin(), kernel_spectrum.begin() + static_cast<std::ptrdiff_t>(kmax + 1));
    for (std::size_t k = 0; k <= kmax; ++k)
        if (!(std::abs(spectrum[k]) > 0.0))
            throw std::domain_error("deconvolution_model: zero Fourier coefficient at k = " + std::to_string(k));
    std::vector<double> magnitude(spectrum.size());
    std::transform(spectrum.begin(), spectrum.end(), magnitude.begin(), [](double g) { return std::abs(g); });
    const double nu = -loglog_slope(magnitude);
    return SvdModel(ModelKind::Deconvolution, kmax, std::move(spectrum), nu);
}

SvdModel direct_model(std::size_t kmax)
{
    if (kmax < 1)
        throw std::invalid_argument("direct_model: kmax must be >= 1");
    return SvdModel(ModelKind::Direct, kmax, std::vector<double>(kmax + 1, 1.0), 0.0);
}

Projection coeffs_from_function(const SvdModel& model, const std::function<double(double)>& f, std::size_t order)
{
    const std::size_t dim = model.dimension();
    std::size_t base = order;
    if (base == 0)
        base = on_wicksell_domain(model.kind()) ? std::max<std::size_t>(4 * dim, 1024)
                                                : std::max<std::size_t>(8 * model.kmax(), 64);
    const auto coarse = project_once(model, f, base);
    auto fine = project_once(model, f, 2 * base);

    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
    {
        diff += (coarse[k] - fine[k]) * (coarse[k] - fine[k]);
        norm += fine[k] * fine[k];
    }
    Projection out;
    out.relative_change = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
    out.resolved = out.relative_change <= kProjectionResolution;
    out.coeffs = std::move(fine);
    return out;
}

std::vector<double> forward(const SvdModel& model, std::span<const double> f)
{
    if (f.size() > model.dimension())
        throw std::invalid_argument("forward: more coefficients than the model dimension");
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        g[i] = model.b(i) * f[i];
    return g;
}

std::vector<double> forward_samples(const SvdModel& model, std::span<const double> f, std::span<const double> ys)
{
    const auto g = forward(model, f);
    std::vector<double> values(g.size());
    std::vector<double> out(ys.size());
    for (std::size_t m = 0; m < ys.size(); ++m)
    {
        model.g_into(ys[m], values);
        out[m] = std::inner_product(g.begin(), g.end(), values.begin(), 0.0);
    }
    return out;
}

SequenceObservation sample_observation(const SvdModel& model, std::span<const double> f, double epsilon,
                                       RandomStream& stream)
{
    if (!(epsilon >= 0.0))
        throw std::domain_error("sample_observation: epsilon must be nonnegative");
    SequenceObservation obs;
    obs.epsilon = epsilon;
    obs.y = forward(model, f);
    if (epsilon == 0.0)
        return obs;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& y : obs.y)
        y += epsilon * gauss(stream);
    return obs;
}

RsnrMode parse_rsnr_mode(const std::string& name)
{
    if (name == "sd")
        return RsnrMode::StandardDeviation;
    if (name == "rms" || name == "norm")
        return RsnrMode::RootMeanSquare;
    throw std::invalid_argument("unknown rsnr mode: " + name);
}

double calibrate_epsilon(const SvdModel& model, std::span<const double> f, double rsnr, std::size_t n,
                         RsnrMode mode)
{
    if (!(rsnr > 0.0))
        throw std::domain_error("calibrate_epsilon: rsnr must be positive");
    if (n == 0)
        throw std::invalid_argument("calibrate_epsilon: grid size must be positive");
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i)
        ys[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    const auto kf = forward_samples(model, f, ys);

    const double mean = std::accumulate(kf.begin(), kf.end(), 0.0) / static_cast<double>(n);
    double spread = 0.0;
    for (double v : kf)
    {
        const double d = mode == RsnrMode::StandardDeviation ? v - mean : v;
        spread += d * d;
    }
    spread = std::sqrt(spread / static_cast<double>(n));
    if (!(spread > 1e-14 * std::max(1.0, std::abs(mean))))
        throw std::domain_error("calibrate_epsilon: Kf is constant on the grid");
    const double sigma = spread / rsnr;
    return sigma / std::sqrt(static_cast<double>(n));
}

NaturalGrid::NaturalGrid(const SvdModel& model, std::size_t n, std::size_t count)
    : count_(count)
{
    points_.resize(n);
    values_.resize(n * count);
    for (std::size_t k = 0; k < n; ++k)
    {
        points_[k] = static_cast<double>(k + 1) / static_cast<double>(n);
        model.e_into(points_[k], std::span<double>(values_.data() + k * count, count));
    }
}

std::vector<double> NaturalGrid::evaluate(std::span<const double> coeffs) const
{
    const std::size_t m = std::min(coeffs.size(), count_);
    std::vector<double> out(points_.size(), 0.0);
    for (std::size_t k = 0; k < points_.size(); ++k)
    {
        const double* row = values_.data() + k * count_;
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            sum += coeffs[i] * row[i];
        out[k] = sum;
    }
    return out;
}

} // namespace needd
