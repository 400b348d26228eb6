#pragma once

// Pseudo-observations and sample Kendall's tau.

#include <span>
#include <vector>

#include "archicop/matrix.hpp"

namespace archicop {

/// Column ranks scaled by 1/(n+1); ties get their average rank.
DataMatrix pobs(const Matrix& x);

/// Sample Kendall's tau (C - D) / (n(n-1)/2), O(n log n) by merge-sort
/// inversion counting (Knight's algorithm).
double sample_tau(std::span<const double> x, std::span<const double> y);
/// O(n^2) definition; reference for sample_tau.
double sample_tau_naive(std::span<const double> x, std::span<const double> y);

/// Sample tau of every column pair (j1 < j2), in lexicographic pair order.
std::vector<double> pairwise_tau(const Matrix& x, Exec exec = Exec::parallel);

}  // namespace archicop
