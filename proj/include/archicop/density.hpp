#pragma once

// Copula log-densities and log-likelihoods.

#include <span>
#include <vector>

#include "archicop/family.hpp"
#include "archicop/matrix.hpp"
#include "archicop/polynomials.hpp"

namespace archicop {

/// Everything in the log-density that depends on (family, theta, d) only.
/// Built once per parameter value; read-only and shareable afterwards.
class DensityContext {
 public:
  DensityContext(const FamilySpec& spec, int d, PolyGMethod gumbel_method = PolyGMethod::automatic);

  const FamilySpec& spec() const { return spec_; }
  int dim() const { return d_; }

  /// log c_theta(u) from the explicit family formula.
  LogValue log_density(std::span<const double> u) const;

 private:
  FamilySpec spec_;
  int d_;
  PolyGMethod gumbel_method_;
  double log_theta_ = 0.0;
  double alpha_ = 0.0;            // 1/theta
  double c0_ = 0.0;               // family constant in front of the density
  double log1mexp_theta_ = 0.0;   // Frank
  std::vector<GumbelPolynomial> gumbel_;  // zero or one element
  std::vector<double> joe_coef_;
};

/// log c_theta(u) assembled as log((-1)^d psi^(d)(t)) + sum_j log(-(psi^-1)'(u_j)).
/// Slower reference route used to cross-check the explicit formulas.
LogValue log_density_generic(const FamilySpec& spec, std::span<const double> u);

/// Per-row log-densities of an n x d sample.
std::vector<double> log_density_rows(const DensityContext& ctx, const Matrix& u, Exec exec);

/// Sum of the row log-densities, accumulated in row order.
double log_likelihood(const DensityContext& ctx, const Matrix& u, Exec exec = Exec::parallel);

/// Monte Carlo estimate log((1/m) sum_k V_k^d exp(-V_k t)) of log((-1)^d psi^(d)(t)).
LogValue smle_log_dpsi(int d, double t, std::span<const double> v);

/// Simulated log-likelihood: exact log(-(psi^-1)') terms with the derivative
/// of psi replaced by smle_log_dpsi over the block v.
double smle_log_likelihood(const FamilySpec& spec, const Matrix& u, std::span<const double> v,
                           Exec exec = Exec::parallel);

}  // namespace archicop
