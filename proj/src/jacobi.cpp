#include "needd/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace needd
{

namespace
{

void check_params(double alpha, double beta)
{
    if (!(alpha > -0.5) || !(beta > -0.5))
        throw std::domain_error("Jacobi parameters must satisfy alpha, beta > -1/2");
}

// d_k of the monic recurrence
double recurrence_diag(double a, double b, std::size_t k)
{
    const double s = a + b;
    if (k == 0)
        return (b - a) / (s + 2.0);
    const double t = 2.0 * static_cast<double>(k) + s;
    return (b * b - a * a) / (t * (t + 2.0));
}

// s_k^2 of the monic recurrence, k >= 1
double recurrence_offdiag_sq(double a, double b, std::size_t k)
{
    const double n = static_cast<double>(k);
    const double s = a + b;
    if (k == 1)
        return 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    const double t = 2.0 * n + s;
    return 4.0 * n * (n + a) * (n + b) * (n + s) / (t * t * (t + 1.0) * (t - 1.0));
}

} // namespace

JacobiParams JacobiParams::make(double alpha, double beta)
{
    check_params(alpha, beta);
    const double log_c = std::lgamma(alpha + beta + 2.0) - (alpha + beta + 1.0) * std::log(2.0) -
                         std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0);
    return JacobiParams{alpha, beta, std::exp(log_c)};
}

double JacobiParams::density(double x) const
{
    return c_norm * std::pow(1.0 - x, alpha) * std::pow(1.0 + x, beta);
}

bool operator==(const JacobiParams& lhs, const JacobiParams& rhs)
{
    return lhs.alpha == rhs.alpha && lhs.beta == rhs.beta;
}

JacobiRecurrence JacobiRecurrence::make(const JacobiParams& params, std::size_t n)
{
    check_params(params.alpha, params.beta);
    JacobiRecurrence rec;
    rec.diag.resize(n);
    rec.offdiag.resize(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        rec.diag[k] = recurrence_diag(params.alpha, params.beta, k);
        rec.offdiag[k] = std::sqrt(recurrence_offdiag_sq(params.alpha, params.beta, k + 1));
    }
    return rec;
}

void jacobi_eval_into(const JacobiRecurrence& rec, double x, std::span<double> out)
{
    if (out.empty())
        return;
    out[0] = 1.0;
    if (out.size() == 1)
        return;
    out[1] = (x - rec.diag[0]) / rec.offdiag[0];
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = ((x - rec.diag[k]) * out[k] - rec.offdiag[k - 1] * out[k - 1]) / rec.offdiag[k];
}

std::vector<double> jacobi_eval_all(const JacobiParams& params, std::size_t kmax, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw std::domain_error("jacobi_eval_all: |x| > 1");
    const auto rec = JacobiRecurrence::make(params, kmax + 1);
    std::vector<double> out(kmax + 1);
    jacobi_eval_into(rec, x, out);
    return out;
}

double generalized_weight(const JacobiParams& params, double n, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw std::domain_error("generalized_weight: |x| > 1");
    if (!(n >= 1.0))
        throw std::domain_error("generalized_weight: n must be >= 1");
    const double h = 1.0 / (n * n);
    return std::pow(1.0 - x + h, params.alpha + 0.5) * std::pow(1.0 + x + h, params.beta + 0.5);
}

QuadratureRule gauss_jacobi_rule(const JacobiParams& params, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("gauss_jacobi_rule: order must be positive");
    const auto rec = JacobiRecurrence::make(params, n);

    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (std::size_t k = 0; k < n; ++k)
        diag[k] = rec.diag[k];
    for (std::size_t k = 0; k + 1 < n; ++k)
        sub[k] = rec.offdiag[k];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw QuadratureError("tridiagonal eigensolver did not converge", n, 0);

    QuadratureRule rule;
    rule.order = n;
    rule.params = params;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    // eigenvalues come out ascending; nodes are stored descending
    std::vector<double> p(n + 1);
    std::vector<double> dp(n + 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        double x = solver.eigenvalues()[static_cast<Eigen::Index>(n - 1 - i)];
        double step = 0.0;
        for (int iter = 0; iter < 8; ++iter)
        {
            // p_n and p_n' through the orthonormal recurrence
            p[0] = 1.0;
            dp[0] = 0.0;
            p[1] = (x - rec.diag[0]) / rec.offdiag[0];
            dp[1] = 1.0 / rec.offdiag[0];
            for (std::size_t k = 1; k < n; ++k)
            {
                p[k + 1] = ((x - rec.diag[k]) * p[k] - rec.offdiag[k - 1] * p[k - 1]) / rec.offdiag[k];
                dp[k + 1] =
                    ((x - rec.diag[k]) * dp[k] + p[k] - rec.offdiag[k - 1] * dp[k - 1]) / rec.offdiag[k];
            }
            step = p[n] / dp[n];
            x -= step;
            if (std::abs(step) <= 1e-15)
                break;
        }
        if (!(std::abs(step) <= 1e-14) || !(std::abs(x) < 1.0))
            throw QuadratureError("Newton polish failed for Gauss-Jacobi node", n, i);

        p[0] = 1.0;
        double norm2 = 1.0;
        if (n > 1)
        {
            p[1] = (x - rec.diag[0]) / rec.offdiag[0];
            norm2 += p[1] * p[1];
            for (std::size_t k = 1; k + 1 < n; ++k)
            {
                p[k + 1] = ((x - rec.diag[k]) * p[k] - rec.offdiag[k - 1] * p[k - 1]) / rec.offdiag[k];
                norm2 += p[k + 1] * p[k + 1];
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / norm2;
    }

    for (std::size_t i = 1; i < n; ++i)
        if (!(rule.nodes[i] < rule.nodes[i - 1]))
            throw QuadratureError("Gauss-Jacobi nodes not strictly decreasing", n, i);
    return rule;
}

std::shared_ptr<const QuadratureRule> cached_gauss_jacobi_rule(const JacobiParams& params,
                                                               std::size_t n)
{
    using Key = std::tuple<double, double, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const QuadratureRule>> cache;

    const Key key{params.alpha, params.beta, n};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi_rule(params, n));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(rule)).first->second;
}

} // namespace needd
