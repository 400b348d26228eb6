#pragma once

// Exact sampling through the frailty construction U_j = psi(E_j / V).

#include <cstddef>
#include <vector>

#include "archicop/family.hpp"
#include "archicop/matrix.hpp"
#include "archicop/rng.hpp"

namespace archicop {

/// Gamma(shape, 1).
double sample_gamma(double shape, RngStream& rng);
/// Positive stable variate with Laplace transform exp(-t^alpha), alpha in (0,1].
double sample_positive_stable(double alpha, RngStream& rng);
/// Logarithmic law P(V = k) = p^k / (-log(1-p) k), given theta = -log(1-p).
/// Returns +inf when the variate exceeds the double range (theta above about 700).
double sample_logarithmic(double theta, RngStream& rng);
/// Sibuya law with Laplace transform 1 - (1 - e^{-t})^alpha, alpha in (0,1].
double sample_sibuya(double alpha, RngStream& rng);
/// Geometric law on {1,2,...} with P(V > k) = theta^k.
double sample_geometric(double theta, RngStream& rng);

/// One draw of the frailty V whose Laplace transform is psi.
double sample_V(const FamilySpec& spec, RngStream& rng);
std::vector<double> sample_V_block(const FamilySpec& spec, std::size_t m, RngStream& rng);

/// n x d sample of the copula. Entries lie strictly inside (0,1).
DataMatrix sample_copula(const FamilySpec& spec, std::size_t n, int d, RngStream& rng);

}  // namespace archicop
