#include "archicop/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "archicop/errors.hpp"

namespace archicop {

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(logabs); }

LogValue lsum(std::span<const double> b) {
  if (b.empty()) throw ArgumentError("lsum: empty input");
  std::size_t imax = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (std::isnan(b[i])) throw DomainError("lsum: NaN term");
    if (b[i] == kInf) throw DomainError("lsum: +inf term");
    if (b[i] > b[imax]) imax = i;
  }
  const double bmax = b[imax];
  if (bmax == kNegInf) return kNegInf;
  // The maximal term contributes exactly 1; log1p keeps the remainder exact.
  double rest = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i != imax) rest += std::exp(b[i] - bmax);
  }
  return bmax + std::log1p(rest);
}

namespace {

double group_sum(std::vector<double>& g, double bmax, bool presorted) {
  if (!presorted) std::sort(g.begin(), g.end());
  double acc = 0.0;
  for (double v : g) acc += std::exp(v - bmax);
  return acc;
}

}  // namespace

SignedSumDetail lssum_detail(std::span<const double> b, std::span<const int> s, bool presorted) {
  if (b.size() != s.size()) throw ArgumentError("lssum: lengths of terms and signs differ");
  if (b.empty()) throw ArgumentError("lssum: empty input");
  std::vector<double> pos;
  std::vector<double> neg;
  double bmax = kNegInf;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (std::isnan(b[i])) throw DomainError("lssum: NaN term");
    if (b[i] == kInf) throw DomainError("lssum: +inf term");
    if (s[i] == 0 || b[i] == kNegInf) continue;
    if (s[i] > 0) {
      pos.push_back(b[i]);
    } else {
      neg.push_back(b[i]);
    }
    bmax = std::max(bmax, b[i]);
  }
  if (bmax == kNegInf) throw CancellationError("lssum: sum is zero", 0, kNegInf);
  const double p = group_sum(pos, bmax, presorted);
  const double n = group_sum(neg, bmax, presorted);
  const double diff = p - n;
  if (!(diff > 0.0)) {
    const int sign = diff < 0.0 ? -1 : 0;
    const double residual = sign == 0 ? kNegInf : bmax + std::log(-diff);
    throw CancellationError("lssum: signed sum is not positive", sign, residual);
  }
  return {bmax + std::log(diff), bmax + std::log(p + n)};
}

LogValue lssum(std::span<const double> b, std::span<const int> s, bool presorted) {
  return lssum_detail(b, s, presorted).value;
}

double log1mexp(double a) {
  if (std::isnan(a) || a <= 0.0) throw DomainError("log1mexp: argument must be positive");
  if (a <= std::numbers::ln2) return std::log(-std::expm1(-a));
  return std::log1p(-std::exp(-a));
}

// ---------------------------------------------------------------------------
// Combinatorial tables, built once on first use (function-local statics are
// initialized exactly once even under concurrent first calls).

namespace {

struct Tables {
  static constexpr int N = kTableBound + 1;
  std::vector<double> s1_logabs = std::vector<double>(N * N, kNegInf);
  std::vector<double> s1_value = std::vector<double>(N * N, 0.0);
  std::vector<double> s2_log = std::vector<double>(N * N, kNegInf);
  std::vector<double> s2_value = std::vector<double>(N * N, 0.0);
  std::vector<double> eulerian_log = std::vector<double>(N * N, kNegInf);
  std::vector<double> log_fact = std::vector<double>(N, 0.0);

  static std::size_t at(int n, int k) { return static_cast<std::size_t>(n) * N + k; }

  Tables() {
    // |s(n+1,k)| = |s(n,k-1)| + n |s(n,k)|;  S(n+1,k) = S(n,k-1) + k S(n,k).
    s1_logabs[at(0, 0)] = 0.0;
    s1_value[at(0, 0)] = 1.0;
    s2_log[at(0, 0)] = 0.0;
    s2_value[at(0, 0)] = 1.0;
    for (int n = 0; n < kTableBound; ++n) {
      for (int k = 1; k <= n + 1; ++k) {
        const double ln = std::log(static_cast<double>(n));
        const double lk = std::log(static_cast<double>(k));
        s1_logabs[at(n + 1, k)] =
            log_add(s1_logabs[at(n, k - 1)], n == 0 ? kNegInf : ln + s1_logabs[at(n, k)]);
        s1_value[at(n + 1, k)] = s1_value[at(n, k - 1)] - n * s1_value[at(n, k)];
        s2_log[at(n + 1, k)] = log_add(s2_log[at(n, k - 1)], lk + s2_log[at(n, k)]);
        s2_value[at(n + 1, k)] = s2_value[at(n, k - 1)] + k * s2_value[at(n, k)];
      }
    }
    // <n,k> = (k+1)<n-1,k> + (n-k)<n-1,k-1>
    eulerian_log[at(0, 0)] = 0.0;
    for (int n = 1; n <= kTableBound; ++n) {
      for (int k = 0; k < n; ++k) {
        const double a = std::log(k + 1.0) + eulerian_log[at(n - 1, k)];
        const double b = k == 0 ? kNegInf : std::log(static_cast<double>(n - k)) +
                                                 eulerian_log[at(n - 1, k - 1)];
        eulerian_log[at(n, k)] = log_add(a, b);
      }
    }
    for (int n = 1; n < N; ++n) log_fact[n] = log_fact[n - 1] + std::log(static_cast<double>(n));
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

void check_table_index(const char* what, int n, int k) {
  if (n < 0 || k < 0) throw DomainError(std::string(what) + ": negative index");
  if (n > kTableBound || k > kTableBound) {
    throw CapacityError(std::string(what) + ": index beyond table bound " +
                        std::to_string(kTableBound));
  }
}

}  // namespace

SignedLog stirling1(int n, int k) {
  check_table_index("stirling1", n, k);
  const double la = tables().s1_logabs[Tables::at(n, k)];
  if (la == kNegInf) return SignedLog::zero();
  return {((n - k) % 2 == 0) ? 1 : -1, la};
}

LogValue stirling2(int n, int k) {
  check_table_index("stirling2", n, k);
  return tables().s2_log[Tables::at(n, k)];
}

double stirling1_value(int n, int k) {
  check_table_index("stirling1", n, k);
  return tables().s1_value[Tables::at(n, k)];
}

double stirling2_value(int n, int k) {
  check_table_index("stirling2", n, k);
  return tables().s2_value[Tables::at(n, k)];
}

LogValue log_eulerian(int n, int k) {
  check_table_index("eulerian", n, k);
  return tables().eulerian_log[Tables::at(n, k)];
}

LogValue polylog_neg(int n, LogValue logz) {
  if (n < 0) throw DomainError("polylog_neg: negative order");
  if (n > kTableBound) throw CapacityError("polylog_neg: order beyond table bound");
  if (std::isnan(logz) || logz >= 0.0) throw DomainError("polylog_neg: z must lie in (0,1)");
  if (logz == kNegInf) return kNegInf;
  const double log1mz = log1mexp(-logz);
  if (n == 0) return logz - log1mz;
  // Li_{-n}(z) = sum_{k<n} <n,k> z^{k+1} / (1-z)^{n+1}
  std::array<double, kTableBound> terms{};
  for (int k = 0; k < n; ++k) terms[k] = log_eulerian(n, k) + k * logz;
  return logz + lsum(std::span<const double>(terms.data(), n)) - (n + 1) * log1mz;
}

double debye1(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("debye1: argument must be nonnegative");
  if (x < 1.0) {
    // t/(e^t - 1) = sum_m B_m t^m / m!, integrated termwise; radius 2 pi.
    double sum = 0.0;
    double xp = x * x;
    double fact = 2.0;
    for (int m = 2; m <= 24; m += 2) {
      sum += boost::math::bernoulli_b2n<double>(m / 2) * xp / ((m + 1) * fact);
      xp *= x * x;
      fact *= (m + 1.0) * (m + 2.0);
    }
    return 1.0 - x / 4.0 + sum;
  }
  auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  // Beyond t = 100 the integrand is below 1e-41.
  const double upper = std::min(x, 100.0);
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 15, 1e-12);
  return integral / x;
}

namespace {

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("incomplete gamma: x must be nonnegative");
}

}  // namespace

double inc_gamma_reg(double a, double x) {
  check_gamma_args(a, x);
  if (x == kInf) return 1.0;
  return boost::math::gamma_p(a, x);
}

double inc_gamma_reg_upper(double a, double x) {
  check_gamma_args(a, x);
  if (x == kInf) return 0.0;
  return boost::math::gamma_q(a, x);
}

double chisq_cdf(double dof, double x) { return inc_gamma_reg(dof / 2.0, x / 2.0); }

double gamma_cdf(double shape, double x) { return inc_gamma_reg(shape, x); }

double poisson_cdf(int k, double mean) {
  if (k < 0) return 0.0;
  return inc_gamma_reg_upper(k + 1.0, mean);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("norm_quantile: p must lie in (0,1)");
  if (p > 0.5) return -norm_quantile(1.0 - p);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n <= kTableBound) return tables().log_fact[n];
  return boost::math::lgamma(n + 1.0);
}

double log_choose(int n, int k) {
  if (k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// ---------------------------------------------------------------------------
// Solvers

double brent_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw ArgumentError("brent_root: empty interval");
  const double flo = f(lo);
  const double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw EvaluationError("brent_root: function not finite at an interval endpoint");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("brent_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  auto checked = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw EvaluationError("brent_root: function not finite");
    return v;
  };
  auto stop = [tol](double a, double b) { return std::fabs(b - a) <= tol; };
  std::uintmax_t iters = kMaxSolverIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(checked, lo, hi, flo, fhi, stop, iters);
  if (!stop(a, b)) {
    throw ConvergenceError("brent_root: iteration limit reached", 0.5 * (a + b), checked(0.5 * (a + b)));
  }
  return 0.5 * (a + b);
}

MinResult brent_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw ArgumentError("brent_min: empty interval");
  if (!(tol > 0.0)) throw ArgumentError("brent_min: tolerance must be positive");
  auto checked = [&f](double x) {
    const double v = f(x);
    if (std::isnan(v)) throw EvaluationError("brent_min: objective is NaN");
    return v;
  };
  // Classical fmin: the first point is the interior golden-section point, so
  // an infeasible endpoint is never evaluated first.
  const double c = (3.0 - std::sqrt(5.0)) * 0.5;
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  double a = lo;
  double b = hi;
  double v = a + c * (b - a);
  double w = v;
  double x = v;
  double d = 0.0;
  double e = 0.0;
  double fx = checked(x);
  double fv = fx;
  double fw = fx;
  const double tol3 = tol / 3.0;
  for (int it = 1; it <= kMaxSolverIterations; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = sqrt_eps * std::fabs(x) + tol3;
    const double t2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= t2 - 0.5 * (b - a)) return {x, fx, it};
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    if (std::fabs(e) > tol1 && std::isfinite(fx) && std::isfinite(fv) && std::isfinite(fw)) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = (q - r) * 2.0;
      if (q > 0.0) p = -p; else q = -q;
      r = e;
      e = d;
    }
    if (std::fabs(p) >= std::fabs(0.5 * q * r) || p <= q * (a - x) || p >= q * (b - x)) {
      e = (x < xm) ? b - x : a - x;
      d = c * e;
    } else {
      d = p / q;
      const double u = x + d;
      if (u - a < t2 || b - u < t2) d = (x < xm) ? tol1 : -tol1;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : (d > 0.0 ? x + tol1 : x - tol1);
    const double fu = checked(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  throw ConvergenceError("brent_min: iteration limit reached", x, fx);
}

}  // namespace archicop
