#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace needd
{

/// Parameters of the Jacobi probability measure
/// dγ(x) = c_norm (1 - x)^alpha (1 + x)^beta dx on [-1, 1].
struct JacobiParams
{
    double alpha = 0.0;
    double beta = 0.0;
    double c_norm = 0.5;

    /// Validates alpha, beta > -1/2 and computes c_norm in log-gamma arithmetic.
    static JacobiParams make(double alpha, double beta);

    /// Density of dγ with respect to dx.
    double density(double x) const;
};

bool operator==(const JacobiParams& lhs, const JacobiParams& rhs);

/// Thrown when the node solver cannot certify a Gauss-Jacobi node.
class QuadratureError : public std::runtime_error
{
public:
    QuadratureError(const std::string& what, std::size_t order, std::size_t index)
        : std::runtime_error(what), order_(order), index_(index)
    {}

    std::size_t order() const noexcept { return order_; }
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t order_;
    std::size_t index_;
};

/// Three-term recurrence of the orthonormal polynomials:
///   x p_k = s_{k+1} p_{k+1} + d_k p_k + s_k p_{k-1},  p_0 = 1.
struct JacobiRecurrence
{
    std::vector<double> diag;    // d_0 .. d_{n-1}
    std::vector<double> offdiag; // s_1 .. s_n  (offdiag[k] = s_{k+1})

    static JacobiRecurrence make(const JacobiParams& params, std::size_t n);
};

/// Orthonormal values Π_0(x) .. Π_kmax(x) under dγ.
std::vector<double> jacobi_eval_all(const JacobiParams& params, std::size_t kmax, double x);

/// Same as jacobi_eval_all but writes out.size() values into a caller buffer using a
/// precomputed recurrence (no allocation, no domain checks beyond |x| <= 1).
void jacobi_eval_into(const JacobiRecurrence& rec, double x, std::span<double> out);

/// (1 - x + n^-2)^(alpha+1/2) (1 + x + n^-2)^(beta+1/2)
double generalized_weight(const JacobiParams& params, double n, double x);

/// N-point Gauss rule for dγ. Nodes are strictly decreasing; weights are the
/// Christoffel numbers and sum to one.
struct QuadratureRule
{
    std::size_t order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    JacobiParams params;

    template <typename F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < order; ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

QuadratureRule gauss_jacobi_rule(const JacobiParams& params, std::size_t n);

/// Process-wide memoized gauss_jacobi_rule; safe for concurrent callers.
std::shared_ptr<const QuadratureRule> cached_gauss_jacobi_rule(const JacobiParams& params,
                                                               std::size_t n);

} // namespace needd
