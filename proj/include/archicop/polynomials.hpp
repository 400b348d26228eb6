#pragma once

// The polynomials P^G_{d,alpha} and P^J_{d,alpha} that appear in the Gumbel and
// Joe copula densities. All entry points take and return logarithms.

#include <string_view>
#include <vector>

#include "archicop/numerics.hpp"

namespace archicop {

enum class PolyGMethod {
  pois_direct,  // Poisson-CDF representation, summed directly in double
  pois,         // Poisson-CDF representation, summed with lssum
  stirling,     // Stirling-number representation, inner polynomial by Horner in -x
  dssib_log,    // coefficients from the binomial representation via lssum, then lsum
  recurrence,   // coefficients from a_{m+1,k} = alpha a_{m,k-1} + (m - alpha k) a_{m,k}
  automatic,    // fixed fall-through chain, see polyG()
};

std::string_view to_string(PolyGMethod m);
PolyGMethod parse_polyg_method(std::string_view s);

/// A strategy reports MethodFailure when its a-priori rounding-error bound
/// (terms * eps * condition number) exceeds this relative tolerance.
inline constexpr double kPolyRelTol = 1e-10;

/// Sign s_j of the j-th term of the Poisson representation.
int pois_sign(double alpha, int j);

/// log P^G_{d,alpha}(x) given log x.
///
/// `automatic` starts at dssib_log when alpha >= 0.5 or d <= 30 and at
/// pois_direct otherwise, then falls through dssib_log, pois_direct, pois,
/// stirling, recurrence in that order on MethodFailure.
LogValue polyG(LogValue logx, double alpha, int d, PolyGMethod method = PolyGMethod::automatic);

/// log P^J_{d,alpha}(x) given log x.
LogValue polyJ(LogValue logx, double alpha, int d);

/// log a^J_{dk}(alpha), k = 0..d-1.
std::vector<double> polyJ_log_coefficients(double alpha, int d);

/// log a^G_{dk}(alpha), k = 1..d (index k-1), by the positive recurrence.
std::vector<double> polyG_log_coefficients_recurrence(double alpha, int d);

/// Same coefficients via the binomial representation and lssum. Throws
/// MethodFailure on cancellation.
std::vector<double> polyG_log_coefficients_dssib(double alpha, int d);

/// Caches everything in polyG that depends on (alpha, d) only, so repeated
/// evaluation at many x (a log-likelihood over n rows) costs O(d) per point
/// for the coefficient-based methods.
class GumbelPolynomial {
 public:
  GumbelPolynomial(double alpha, int d);

  double alpha() const { return alpha_; }
  int degree() const { return d_; }

  LogValue operator()(LogValue logx, PolyGMethod method = PolyGMethod::automatic) const;

 private:
  LogValue eval_pois(LogValue logx, bool direct) const;
  LogValue eval_stirling(LogValue logx) const;
  LogValue eval_coefficients(LogValue logx, const std::vector<double>& la) const;

  double alpha_;
  int d_;
  std::vector<double> log_ff_;    // log |(alpha j)_d|, j = 1..d
  std::vector<int> sign_;         // s_j
  std::vector<double> dssib_;     // empty when the dssib coefficients failed
  std::vector<double> recur_;
};

}  // namespace archicop
