#include "archicop/family.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "archicop/errors.hpp"
#include "archicop/polynomials.hpp"

namespace archicop {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// log(expm1(a)) for a > 0
double log_expm1(double a) { return a + log1mexp(a); }

void check_unit_open(double u, const char* who) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError(std::string(who) + ": argument must lie in (0,1)");
}

// Frank's tau from the Bernoulli expansion of the Debye function, valid for
// |theta| < 2 pi; used for theta < 1 where 1 + 4 (D1 - 1)/theta cancels.
double tau_frank_series(double th) {
  double sum = 0.0;
  double xp = th;
  double fact = 2.0;
  for (int m = 2; m <= 24; m += 2) {
    sum += boost::math::bernoulli_b2n<double>(m / 2) * xp / ((m + 1) * fact);
    xp *= th * th;
    fact *= (m + 1.0) * (m + 2.0);
  }
  return 4.0 * sum;
}

// sum_k 1/(k (k+a) (k+a-1)) = (psi(1+a) - psi(2)) / (a (a-1)), with a Taylor
// expansion in eps = a - 1 around the removable singularity.
double joe_partial_sum(double a) {
  const double eps = a - 1.0;
  if (std::fabs(eps) < 0.05) {
    // psi(2+eps) - psi(2) = sum_n (-1)^{n+1} (zeta(n+1) - 1) eps^n
    double acc = 0.0;
    double ep = 1.0;
    for (int n = 1; n <= 14; ++n) {
      const double c = boost::math::zeta(static_cast<double>(n + 1)) - 1.0;
      acc += ((n % 2 == 1) ? c : -c) * ep;
      ep *= eps;
    }
    return acc / (1.0 + eps);
  }
  return (boost::math::digamma(1.0 + a) - boost::math::digamma(2.0)) / (a * (a - 1.0));
}

// tau without parameter validation; admits the limits A: theta = 1 and F: theta = 0.
double tau_value(Family f, double th) {
  switch (f) {
    case Family::A: {
      if (th == 0.0) return 0.0;
      if (th == 1.0) return 1.0 / 3.0;
      if (std::fabs(th) <= 1e-2) {
        // power series sum_k 4 th^k / (3 k (k+1) (k+2)), summed from the small end
        double acc = 0.0;
        for (int k = 12; k >= 1; --k) acc = acc * th + 4.0 / (3.0 * k * (k + 1.0) * (k + 2.0));
        return acc * th;
      }
      const double om = 1.0 - th;
      return 1.0 - 2.0 * (th + om * om * std::log1p(-th)) / (3.0 * th * th);
    }
    case Family::C: return th / (th + 2.0);
    case Family::F:
      if (th == 0.0) return 0.0;
      if (th < 1.0) return tau_frank_series(th);
      return 1.0 + 4.0 * (debye1(th) - 1.0) / th;
    case Family::G: return (th - 1.0) / th;
    case Family::J: {
      if (th == 1.0) return 0.0;
      const double a = 2.0 / th;
      return 1.0 - 4.0 * joe_partial_sum(a) / (th * th);
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::C: return "C";
    case Family::F: return "F";
    case Family::G: return "G";
    case Family::J: return "J";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "a" || t == "amh" || t == "ali-mikhail-haq") return Family::A;
  if (t == "c" || t == "clayton") return Family::C;
  if (t == "f" || t == "frank") return Family::F;
  if (t == "g" || t == "gumbel") return Family::G;
  if (t == "j" || t == "joe") return Family::J;
  throw ArgumentError("unknown family '" + std::string(s) + "' (expected one of A, C, F, G, J)");
}

ThetaRange theta_range(Family f) {
  switch (f) {
    case Family::A: return {0.0, 1.0, true, false};
    case Family::C: return {0.0, kInf, false, false};
    case Family::F: return {0.0, kInf, false, false};
    case Family::G: return {1.0, kInf, true, false};
    case Family::J: return {1.0, kInf, true, false};
  }
  throw ArgumentError("theta_range: bad family");
}

std::optional<double> independence_theta(Family f) {
  switch (f) {
    case Family::A: return 0.0;
    case Family::G:
    case Family::J: return 1.0;
    default: return std::nullopt;
  }
}

TauRange tau_range(Family f) {
  switch (f) {
    case Family::A: return {0.0, 1.0 / 3.0, true, false};
    case Family::C:
    case Family::F: return {0.0, 1.0, false, false};
    case Family::G:
    case Family::J: return {0.0, 1.0, true, false};
  }
  throw ArgumentError("tau_range: bad family");
}

FamilySpec::FamilySpec(Family family, double theta) : family_(family), theta_(theta) {
  const auto r = theta_range(family);
  const bool lo_ok = r.lo_closed ? theta >= r.lo : theta > r.lo;
  const bool hi_ok = r.hi_closed ? theta <= r.hi : theta < r.hi;
  if (!(lo_ok && hi_ok) || !std::isfinite(theta)) {
    throw DomainError("theta = " + std::to_string(theta) + " is outside the admissible range of family " +
                      std::string(to_string(family)));
  }
}

bool FamilySpec::is_independence() const {
  const auto ind = independence_theta(family_);
  return ind && *ind == theta_;
}

// ---------------------------------------------------------------------------
// generators

double psi(const FamilySpec& s, double t) {
  if (std::isnan(t) || t < 0.0) throw DomainError("psi: t must be nonnegative");
  if (t == 0.0) return 1.0;
  if (t == kInf) return 0.0;
  const double th = s.theta();
  switch (s.family()) {
    case Family::A:
      if (th == 0.0) return std::exp(-t);
      return (1.0 - th) / (std::exp(t) - th);
    case Family::C: return std::exp(-std::log1p(t) / th);
    case Family::F: return -std::log1p(std::expm1(-th) * std::exp(-t)) / th;
    case Family::G: return std::exp(-std::pow(t, 1.0 / th));
    case Family::J: return -std::expm1(log1mexp(t) / th);
  }
  return 0.0;
}

namespace {

// log of q = (e^{-u th} - e^{-th}) / (1 - e^{-th}) for Frank, in (0,1).
double frank_log_q(double th, double u) {
  return -u * th + log1mexp(th * (1.0 - u)) - log1mexp(th);
}

}  // namespace

double psi_inv(const FamilySpec& s, double u) {
  if (std::isnan(u) || u < 0.0 || u > 1.0) throw DomainError("psi_inv: u must lie in [0,1]");
  if (u == 1.0) return 0.0;
  if (u == 0.0) return kInf;
  const double th = s.theta();
  switch (s.family()) {
    case Family::A: return std::log1p((1.0 - th) * (1.0 - u) / u);
    case Family::C: return std::expm1(-th * std::log(u));
    case Family::F: {
      const double lq = frank_log_q(th, u);
      if (lq < -kLn2) return -std::log1p(-std::exp(lq));
      // 1 - q = (1 - e^{-u th}) / (1 - e^{-th})
      return log1mexp(th) - log1mexp(u * th);
    }
    case Family::G: return std::pow(-std::log(u), th);
    case Family::J: return -log1mexp(-th * std::log1p(-u));
  }
  return 0.0;
}

double log_psi_inv(const FamilySpec& s, double u) {
  check_unit_open(u, "log_psi_inv");
  const double th = s.theta();
  switch (s.family()) {
    case Family::A: return std::log(std::log1p((1.0 - th) * (1.0 - u) / u));
    case Family::C: return log_expm1(-th * std::log(u));
    case Family::F: {
      const double lq = frank_log_q(th, u);
      if (lq < -700.0) return lq;
      if (lq < -kLn2) return std::log(-std::log1p(-std::exp(lq)));
      return std::log(log1mexp(th) - log1mexp(u * th));
    }
    case Family::G: return th * std::log(-std::log(u));
    case Family::J: {
      const double a = -th * std::log1p(-u);
      const double v = -log1mexp(a);
      return v > 0.0 ? std::log(v) : -a;
    }
  }
  return 0.0;
}

double log_neg_dpsi_inv(const FamilySpec& s, double u) {
  check_unit_open(u, "log_neg_dpsi_inv");
  const double th = s.theta();
  switch (s.family()) {
    case Family::A:
      return std::log1p(-th) - std::log(u) - std::log1p(-th * (1.0 - u));
    case Family::C: return std::log(th) - (th + 1.0) * std::log(u);
    case Family::F: return std::log(th) - log_expm1(th * u);
    case Family::G: return std::log(th) + (th - 1.0) * std::log(-std::log(u)) - std::log(u);
    case Family::J: {
      const double l1mu = std::log1p(-u);
      return std::log(th) + (th - 1.0) * l1mu - log1mexp(-th * l1mu);
    }
  }
  return 0.0;
}

LogValue log_dpsi(const FamilySpec& s, int k, double t) {
  if (!(t > 0.0)) throw DomainError("log_dpsi: t must be positive");
  if (k < 0) throw DomainError("log_dpsi: order must be nonnegative");
  if (t == kInf) return kNegInf;
  if (s.is_independence()) return -t;
  const double th = s.theta();
  switch (s.family()) {
    case Family::A:
      return std::log1p(-th) - std::log(th) + polylog_neg(k, std::log(th) - t);
    case Family::C: {
      const double a = 1.0 / th;
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += std::log(a + j);
      return acc - (a + k) * std::log1p(t);
    }
    case Family::F: {
      const double lz = log1mexp(th) - t;
      if (k == 0) {
        // -log(1 - z)
        const double v = lz < -kLn2 ? -std::log1p(-std::exp(lz)) : -log1mexp(-lz);
        return std::log(v) - std::log(th);
      }
      return polylog_neg(k - 1, lz) - std::log(th);
    }
    case Family::G: {
      const double a = 1.0 / th;
      const double lt = std::log(t);
      const double ta = std::exp(a * lt);
      if (k == 0) return -ta;
      return -ta + polyG(a * lt, a, k) - k * lt;
    }
    case Family::J: {
      const double a = 1.0 / th;
      const double l1m = log1mexp(t);
      if (k == 0) return log1mexp(-a * l1m);
      return -std::log(th) + (a - 1.0) * l1m - t + polyJ(-t - l1m, a, k);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Kendall's tau

double tau(const FamilySpec& s) { return tau_value(s.family(), s.theta()); }

double tau_joe_series(double theta) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw DomainError("tau_joe_series: theta must be >= 1");
  double sum = 0.0;
  for (long k = 1; k <= 10'000'000; ++k) {
    const double kd = static_cast<double>(k);
    const double term = 1.0 / (kd * (theta * kd + 2.0) * (theta * (kd - 1.0) + 2.0));
    sum += term;
    if (term < 1e-14) break;
  }
  return 1.0 - 4.0 * sum;
}

double tau_inv(Family f, double t) {
  if (std::isnan(t)) throw DomainError("tau_inv: tau is NaN");
  const auto r = tau_range(f);
  const bool lo_ok = r.lo_closed ? t >= r.lo : t > r.lo;
  const bool hi_ok = r.hi_closed ? t <= r.hi : t < r.hi;
  const std::string fam(to_string(f));
  if (!lo_ok) {
    throw RangeError("tau = " + std::to_string(t) + " is below the attainable range of family " + fam,
                     r.lo, false);
  }
  if (!hi_ok) {
    throw RangeError("tau = " + std::to_string(t) + " is above the attainable range of family " + fam,
                     r.hi, true);
  }
  switch (f) {
    case Family::C: return 2.0 * t / (1.0 - t);
    case Family::G: return 1.0 / (1.0 - t);
    case Family::A: {
      if (t == 0.0) return 0.0;
      return brent_root([t](double th) { return tau_value(Family::A, th) - t; }, 0.0, 1.0, 1e-15);
    }
    case Family::F:
    case Family::J: {
      const double base = f == Family::F ? 0.0 : 1.0;
      if (f == Family::J && t == 0.0) return 1.0;
      double hi = base + 1.0;
      while (tau_value(f, hi) < t) {
        hi = base + 2.0 * (hi - base);
        if (!std::isfinite(hi)) throw ConvergenceError("tau_inv: no bracket", hi, std::numeric_limits<double>::quiet_NaN());
      }
      const double lo = hi - base > 1.0 ? base + (hi - base) / 2.0 : base;
      const double tol = std::max(1e-15, 4.0 * std::numeric_limits<double>::epsilon() * hi);
      return brent_root([f, t](double th) { return tau_value(f, th) - t; }, lo, hi, tol);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Blomqvist's beta

namespace {

// log(1 + e^x)
double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log psi(e^{lt}), accurate when e^{lt} under- or overflows.
double log_psi_at_log(const FamilySpec& s, double lt) {
  if (lt == kNegInf) return 0.0;
  const double th = s.theta();
  const double t = std::exp(lt);
  if (s.is_independence()) return -t;
  switch (s.family()) {
    case Family::A:
      if (t == kInf) return kNegInf;
      return std::log1p(-th) - t - std::log1p(-th * std::exp(-t));
    case Family::C: return -log1p_exp(lt) / th;
    case Family::F: {
      // theta psi = -log(1 - e^{-a}) with a = t - log(1 - e^{-theta})
      const double lc = th > 30.0 ? -th : std::log(-log1mexp(th));
      const double la = log_add(lt, lc);
      const double a = std::exp(la);
      double lv;
      if (a > 700.0) lv = -a;
      else if (la < -700.0) lv = std::log(-la);
      else lv = std::log(-log1mexp(a));
      return lv - std::log(th);
    }
    case Family::G: return -std::exp(lt / th);
    case Family::J: {
      if (t > 700.0) return -t - std::log(th);
      const double l1m = t > 1e-8 ? log1mexp(t) : lt - 0.5 * t;
      return log1mexp(-l1m / th);
    }
  }
  return 0.0;
}

// log(-psi'(e^{lt})) for Frank, with t = e^{lt} allowed to underflow.
double frank_log_neg_dpsi1_at_log(double th, double lt) {
  const double lc = th > 30.0 ? -th : std::log(-log1mexp(th));
  const double la = log_add(lt, lc);
  const double a = std::exp(la);
  const double l1m = la < -700.0 ? la : log1mexp(a);
  return -a - l1m - std::log(th);
}

}  // namespace

double beta(const FamilySpec& s, int d) {
  if (d < 2) throw DomainError("beta: dimension must be at least 2");
  if (s.is_independence()) return 0.0;
  // work with log psi_inv(1/2) so that neither tiny nor huge arguments are lost
  const double lt_half = log_psi_inv(s, 0.5);
  std::vector<double> b(d + 1);
  std::vector<int> sg(d + 1);
  for (int j = 0; j <= d; ++j) {
    b[j] = log_choose(d, j) + (j == 0 ? 0.0 : log_psi_at_log(s, lt_half + std::log(j)));
    sg[j] = (j % 2 == 0) ? 1 : -1;
  }
  const std::string failure = "beta: survival sum cancelled (d = " + std::to_string(d) + ")";
  SignedSumDetail sum;
  try {
    sum = lssum_detail(b, sg);
  } catch (const CancellationError&) {
    throw EvaluationError(failure);
  }
  // a positive result can still be pure rounding noise; bound the absolute error
  const double err_bound = std::exp(sum.log_abs_total) * (d + 1) * std::numeric_limits<double>::epsilon();
  if (!(err_bound <= kBetaAbsTol)) throw EvaluationError(failure);
  const double survival = std::exp(sum.value);
  const double c = std::exp(log_psi_at_log(s, lt_half + std::log(d)));
  const double p = std::ldexp(1.0, d - 1);
  return p / (p - 1.0) * (c + survival - std::ldexp(1.0, 1 - d));
}

BetaInverse beta_inv(Family f, double beta_hat, int d, double theta_lo, double theta_hi) {
  if (std::isnan(beta_hat)) throw DomainError("beta_inv: beta_hat is NaN");
  const auto ind = independence_theta(f);
  double lo = ind ? *ind : theta_lo;
  // beta >= 0 on the whole range, so nonpositive targets need no evaluation
  if (beta_hat <= 0.0) return {lo, beta_hat < 0.0 || !ind};
  double b_lo = ind ? 0.0 : beta(FamilySpec(f, lo), d);
  if (beta_hat <= b_lo) return {lo, beta_hat < b_lo};
  const double b_hi = beta(FamilySpec(f, theta_hi), d);
  if (beta_hat >= b_hi) return {theta_hi, beta_hat > b_hi};
  const double th = brent_root([&](double x) { return beta(FamilySpec(f, x), d) - beta_hat; }, lo,
                               theta_hi, kDefaultSolverTol);
  return {th, false};
}

// ---------------------------------------------------------------------------

LogValue log_diag_density(const FamilySpec& s, int d, double y) {
  check_unit_open(y, "log_diag_density");
  if (d < 1) throw DomainError("log_diag_density: dimension must be positive");
  if (s.is_independence()) return std::log(static_cast<double>(d)) + (d - 1) * std::log(y);
  if (s.family() == Family::F) {
    const double lt = std::log(static_cast<double>(d)) + log_psi_inv(s, y);
    return std::log(static_cast<double>(d)) + frank_log_neg_dpsi1_at_log(s.theta(), lt) + log_neg_dpsi_inv(s, y);
  }
  const double t = d * psi_inv(s, y);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("log_diag_density: y too close to the boundary");
  return std::log(static_cast<double>(d)) + log_dpsi(s, 1, t) + log_neg_dpsi_inv(s, y);
}

// ---------------------------------------------------------------------------

double Reparam::to_alpha(double theta) const {
  switch (family) {
    case Family::A: return theta;
    case Family::C:
    case Family::F: return 2.0 * std::atan(theta) / std::numbers::pi;
    case Family::G:
    case Family::J: return 1.0 - 1.0 / theta;
  }
  return theta;
}

double Reparam::from_alpha(double alpha) const {
  switch (family) {
    case Family::A: return alpha;
    case Family::C:
    case Family::F: return std::tan(std::numbers::pi * alpha / 2.0);
    case Family::G:
    case Family::J: return 1.0 / (1.0 - alpha);
  }
  return alpha;
}

Reparam reparam(Family f) { return Reparam{f, 0.0, 1.0}; }

}  // namespace archicop
