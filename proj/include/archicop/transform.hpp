#pragma once

// The transform T_psi mapping copula samples to independent uniforms, the
// Kendall distribution function, and the univariate reductions used by the
// minimum-distance estimators.

#include <span>
#include <string_view>
#include <vector>

#include "archicop/family.hpp"
#include "archicop/matrix.hpp"

namespace archicop {

struct TransformOutput {
  Matrix uprime;              // n x d', d' = d when include_k, else d - 1
  bool include_k = false;
  std::vector<double> y_n;    // sum_j Phi^{-1}(U'_j)^2, chi-square(d') under the model
  std::vector<double> y_l;    // sum_j -log U'_j, Gamma(d', 1) under the model
};

/// Kendall distribution function K(t) = P(C(U) <= t) for t in (0,1).
double kendall_K(const FamilySpec& spec, int d, double t);
/// K evaluated at t = psi(s), given s = psi^{-1}(t) > 0.
double kendall_K_from_psi_inv(const FamilySpec& spec, int d, double s);

/// Default for include_k: on for d <= 5.
inline bool default_include_k(int d) { return d <= 5; }

/// Inputs are clamped to [eps, 1 - eps] before Phi^{-1}.
inline constexpr double kQuantileClamp = 1e-15;

TransformOutput hh_transform(const FamilySpec& spec, const Matrix& data, bool include_k,
                             Exec exec = Exec::parallel);

enum class RefDist { chi2, gamma };
std::string_view to_string(RefDist r);
double ref_cdf(RefDist r, int dof, double y);

/// Cramer-von Mises distance 1/(12n) + sum_i ((2i-1)/(2n) - F(y_(i)))^2.
double cvm_distance(std::span<const double> y_sorted, RefDist r, int dof);
/// Kolmogorov-Smirnov distance max_i max(F(y_(i)) - (i-1)/n, i/n - F(y_(i))).
double ks_distance(std::span<const double> y_sorted, RefDist r, int dof);

}  // namespace archicop
