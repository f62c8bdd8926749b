#pragma once

#include <span>

namespace needd
{

/// Loss on the grid x_k = k/n, k = 1..n, weighted by the Wicksell density 1/(4x):
///   p = 1: (1/n) Σ |Δ_k| / (4x_k)          (weighted L1)
///   p = 2: sqrt((1/n) Σ Δ_k² / (4x_k))     (weighted RMSE)
double weighted_loss(std::span<const double> f_vals, std::span<const double> fhat_vals, int p);

inline double weighted_l1(std::span<const double> f, std::span<const double> fhat)
{
    return weighted_loss(f, fhat, 1);
}

inline double weighted_rmse(std::span<const double> f, std::span<const double> fhat)
{
    return weighted_loss(f, fhat, 2);
}

} // namespace needd
