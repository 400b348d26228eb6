#pragma once

// Log-space special functions and scalar solvers.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>

namespace archicop {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Largest n for which Stirling and Eulerian tables are available.
inline constexpr int kTableBound = 120;

/// log of a nonnegative quantity; -inf encodes zero.
using LogValue = double;

/// sign * exp(logabs). sign == 0 iff logabs == -inf.
struct SignedLog {
  int sign = 0;
  double logabs = kNegInf;

  static SignedLog zero() { return {}; }
  double value() const;
  friend bool operator==(const SignedLog&, const SignedLog&) = default;
};

/// log(sum_i exp(b_i)).
LogValue lsum(std::span<const double> b);

/// Result of a signed log-space sum together with its conditioning:
/// log_abs_total = log(sum_i |x_i|). The ratio exp(log_abs_total - value)
/// bounds the amplification of rounding errors.
struct SignedSumDetail {
  LogValue value;
  double log_abs_total;
  double log_condition() const { return log_abs_total - value; }
};

/// log(sum_i s_i exp(b_i)) for a sum known to be positive. Each sign group
/// is accumulated in increasing order of b. Throws CancellationError when
/// the computed sum is not positive.
LogValue lssum(std::span<const double> b, std::span<const int> s, bool presorted = false);
SignedSumDetail lssum_detail(std::span<const double> b, std::span<const int> s,
                             bool presorted = false);

/// log(exp(a) + exp(b)).
inline double log_add(double a, double b);

/// log(1 - exp(-a)) for a > 0.
double log1mexp(double a);

/// Stirling numbers of the first kind, signed, in log form.
SignedLog stirling1(int n, int k);
/// Stirling numbers of the second kind in log form.
LogValue stirling2(int n, int k);
/// Plain double values (both fit a double for n <= kTableBound).
double stirling1_value(int n, int k);
double stirling2_value(int n, int k);
/// log of the Eulerian number <n, k>, 0 <= k < n (and <0,0> = 1).
LogValue log_eulerian(int n, int k);

/// log Li_{-n}(z) for z in (0,1), given log z.
LogValue polylog_neg(int n, LogValue logz);

/// Debye function of order one, (1/x) int_0^x t/(e^t - 1) dt.
double debye1(double x);

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double inc_gamma_reg(double a, double x);
double inc_gamma_reg_upper(double a, double x);
double chisq_cdf(double dof, double x);
double gamma_cdf(double shape, double x);
/// P(N <= k) for N ~ Poisson(mean).
double poisson_cdf(int k, double mean);

double norm_cdf(double x);
double norm_quantile(double p);

/// log n! and log binomial(n, k).
double log_factorial(int n);
double log_choose(int n, int k);

inline constexpr double kDefaultSolverTol = 1e-9;
inline constexpr int kMaxSolverIterations = 200;

/// Bracketed root of f in [lo, hi] to within `tol` on the argument.
/// Throws BracketError when f(lo) and f(hi) share a sign and
/// EvaluationError when f is not finite.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol = kDefaultSolverTol);

struct MinResult {
  double x;
  double fx;
  int iterations;
};

/// Local minimizer of f on [lo, hi] by Brent's parabolic/golden-section search,
/// absolute argument tolerance tol plus sqrt(eps) relative.
/// Throws ConvergenceError, carrying the best iterate, after
/// kMaxSolverIterations iterations. NaN values of f raise EvaluationError;
/// +inf is allowed and treated as infeasible.
MinResult brent_min(const std::function<double(double)>& f, double lo, double hi,
                    double tol = kDefaultSolverTol);

// ---------------------------------------------------------------------------

inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace archicop
