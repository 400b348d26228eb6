#include "archicop/polynomials.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "archicop/errors.hpp"

namespace archicop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_args(double alpha, int d) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("polyG/polyJ: alpha must lie in (0,1]");
  if (d < 1) throw DomainError("polyG/polyJ: degree must be positive");
  if (d > kTableBound) throw CapacityError("polyG/polyJ: degree beyond table bound");
}

bool accurate(double log_condition, int terms) {
  return std::exp(log_condition) * terms * kEps <= kPolyRelTol;
}

// log |(x)_d| = sum_{l<d} log |x - l|
double log_abs_falling(double x, int d) {
  double acc = 0.0;
  for (int l = 0; l < d; ++l) acc += std::log(std::fabs(x - l));
  return acc;
}

}  // namespace

std::string_view to_string(PolyGMethod m) {
  switch (m) {
    case PolyGMethod::pois_direct: return "pois-direct";
    case PolyGMethod::pois: return "pois";
    case PolyGMethod::stirling: return "stirling";
    case PolyGMethod::dssib_log: return "dssib-log";
    case PolyGMethod::recurrence: return "recurrence";
    case PolyGMethod::automatic: return "default";
  }
  return "?";
}

PolyGMethod parse_polyg_method(std::string_view s) {
  for (auto m : {PolyGMethod::pois_direct, PolyGMethod::pois, PolyGMethod::stirling,
                 PolyGMethod::dssib_log, PolyGMethod::recurrence, PolyGMethod::automatic}) {
    if (s == to_string(m)) return m;
  }
  throw ArgumentError("unknown polyG method '" + std::string(s) +
                      "' (expected pois-direct, pois, stirling, dssib-log, recurrence, default)");
}

int pois_sign(double alpha, int j) {
  const double aj = alpha * j;
  const double c = std::ceil(aj);
  const bool integral = (c == aj);
  if (integral && !(alpha == 1.0)) return 0;
  // alpha == 1: only j == d survives, every other alpha*j = j < d is a root.
  // The caller restricts j <= d; for alpha == 1 and j < d the falling factorial
  // (j)_d vanishes, which we report as 0 here as well.
  if (integral) return 2;  // resolved by the caller, which knows d
  const long long e = static_cast<long long>(j) - static_cast<long long>(c);
  return (e % 2 == 0) ? 1 : -1;
}

std::vector<double> polyG_log_coefficients_recurrence(double alpha, int d) {
  check_args(alpha, d);
  const double la = std::log(alpha);
  // row m holds log a_{m,k}, k = 1..m, stored at index k-1
  std::vector<double> row{la};
  for (int m = 1; m < d; ++m) {
    std::vector<double> next(m + 1, kNegInf);
    for (int k = 1; k <= m + 1; ++k) {
      const double from_left = k >= 2 ? la + row[k - 2] : kNegInf;
      double from_same = kNegInf;
      if (k <= m) {
        const double w = m - alpha * k;
        if (w > 0.0) from_same = std::log(w) + row[k - 1];
      }
      next[k - 1] = log_add(from_left, from_same);
    }
    row = std::move(next);
  }
  return row;
}

std::vector<double> polyG_log_coefficients_dssib(double alpha, int d) {
  check_args(alpha, d);
  std::vector<double> lff(d + 1);
  std::vector<int> sg(d + 1);
  for (int j = 1; j <= d; ++j) {
    lff[j] = log_abs_falling(alpha * j, d);
    int s = pois_sign(alpha, j);
    if (s == 2) s = (j == d) ? 1 : 0;
    sg[j] = s;
  }
  std::vector<double> out(d);
  std::vector<double> b;
  std::vector<int> s;
  for (int k = 1; k <= d; ++k) {
    b.clear();
    s.clear();
    for (int j = 1; j <= k; ++j) {
      if (sg[j] == 0) continue;
      b.push_back(log_choose(k, j) + lff[j]);
      s.push_back(sg[j]);
    }
    if (b.empty()) {
      out[k - 1] = kNegInf;
      continue;
    }
    SignedSumDetail r{};
    try {
      r = lssum_detail(b, s);
    } catch (const CancellationError&) {
      throw MethodFailure("dssib-log: cancellation in coefficient " + std::to_string(k));
    }
    if (!accurate(r.log_condition(), static_cast<int>(b.size()))) {
      throw MethodFailure("dssib-log: coefficient " + std::to_string(k) + " is ill-conditioned");
    }
    out[k - 1] = r.value - log_factorial(k);
  }
  return out;
}

std::vector<double> polyJ_log_coefficients(double alpha, int d) {
  check_args(alpha, d);
  std::vector<double> out(d);
  double log_ff = 0.0;  // log (k - alpha)_k = sum_{m=1}^k log(m - alpha)
  for (int k = 0; k < d; ++k) {
    if (k > 0) {
      const double w = k - alpha;
      log_ff += (w > 0.0) ? std::log(w) : kNegInf;
    }
    out[k] = stirling2(d, k + 1) + log_ff;
  }
  return out;
}

LogValue polyJ(LogValue logx, double alpha, int d) {
  if (std::isnan(logx)) throw DomainError("polyJ: log x is NaN");
  const auto la = polyJ_log_coefficients(alpha, d);
  std::array<double, kTableBound> b{};
  for (int k = 0; k < d; ++k) b[k] = la[k] + (k == 0 ? 0.0 : k * logx);
  return lsum(std::span<const double>(b.data(), d));
}

// ---------------------------------------------------------------------------

GumbelPolynomial::GumbelPolynomial(double alpha, int d)
    : alpha_(alpha), d_(d), log_ff_(d + 1), sign_(d + 1) {
  check_args(alpha, d);
  for (int j = 1; j <= d; ++j) {
    log_ff_[j] = log_abs_falling(alpha * j, d);
    int s = pois_sign(alpha, j);
    if (s == 2) s = (j == d) ? 1 : 0;
    sign_[j] = s;
  }
  try {
    dssib_ = polyG_log_coefficients_dssib(alpha, d);
  } catch (const MethodFailure&) {
    dssib_.clear();
  }
  recur_ = polyG_log_coefficients_recurrence(alpha, d);
}

LogValue GumbelPolynomial::eval_coefficients(LogValue logx, const std::vector<double>& la) const {
  std::array<double, kTableBound> b{};
  for (int k = 1; k <= d_; ++k) b[k - 1] = la[k - 1] + k * logx;
  return lsum(std::span<const double>(b.data(), d_));
}

LogValue GumbelPolynomial::eval_pois(LogValue logx, bool direct) const {
  const double x = std::exp(logx);
  if (!std::isfinite(x)) throw MethodFailure("pois: x overflows");
  std::array<double, kTableBound> b{};
  std::array<int, kTableBound> s{};
  int m = 0;
  for (int j = 1; j <= d_; ++j) {
    if (sign_[j] == 0) continue;
    const double cdf = poisson_cdf(d_ - j, x);
    if (!(cdf > 0.0)) continue;
    b[m] = log_ff_[j] + j * logx + x - log_factorial(j) + std::log(cdf);
    s[m] = sign_[j];
    ++m;
  }
  if (m == 0) throw MethodFailure("pois: every term underflows");
  if (direct) {
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = std::exp(b[i]);
      sum += s[i] * v;
      abs_sum += v;
    }
    if (!std::isfinite(abs_sum)) throw MethodFailure("pois-direct: overflow");
    if (!(sum > 0.0)) throw MethodFailure("pois-direct: non-positive sum");
    if (abs_sum / sum * m * kEps > kPolyRelTol) throw MethodFailure("pois-direct: cancellation");
    return std::log(sum);
  }
  SignedSumDetail r{};
  try {
    r = lssum_detail(std::span<const double>(b.data(), m), std::span<const int>(s.data(), m));
  } catch (const CancellationError&) {
    throw MethodFailure("pois: cancellation");
  }
  if (!accurate(r.log_condition(), m)) throw MethodFailure("pois: ill-conditioned sum");
  return r.value;
}

LogValue GumbelPolynomial::eval_stirling(LogValue logx) const {
  const double x = std::exp(logx);
  if (!std::isfinite(x)) throw MethodFailure("stirling: x overflows");
  const double y = -x;
  double total = 0.0;
  double abs_total = 0.0;
  double alpha_pow = 1.0;
  for (int j = 1; j <= d_; ++j) {
    alpha_pow *= alpha_;
    // sum_{k=0}^{j-1} S(j,k+1) y^k by Horner, with the absolute version alongside.
    double h = stirling2_value(j, j);
    double habs = h;
    for (int k = j - 2; k >= 0; --k) {
      h = h * y + stirling2_value(j, k + 1);
      habs = habs * x + stirling2_value(j, k + 1);
    }
    const double c = stirling1_value(d_, j) * alpha_pow;
    total += c * h;
    abs_total += std::fabs(c) * habs;
  }
  if (d_ % 2 == 0) total = -total;  // (-1)^{d-1}
  if (!std::isfinite(abs_total)) throw MethodFailure("stirling: overflow");
  if (!(total > 0.0)) throw MethodFailure("stirling: non-positive sum");
  if (abs_total / total * 3.0 * d_ * kEps > kPolyRelTol) throw MethodFailure("stirling: cancellation");
  return logx + std::log(total);
}

LogValue GumbelPolynomial::operator()(LogValue logx, PolyGMethod method) const {
  if (std::isnan(logx)) throw DomainError("polyG: log x is NaN");
  switch (method) {
    case PolyGMethod::pois_direct: return eval_pois(logx, true);
    case PolyGMethod::pois: return eval_pois(logx, false);
    case PolyGMethod::stirling: return eval_stirling(logx);
    case PolyGMethod::dssib_log:
      if (dssib_.empty()) throw MethodFailure("dssib-log: ill-conditioned coefficients");
      return eval_coefficients(logx, dssib_);
    case PolyGMethod::recurrence: return eval_coefficients(logx, recur_);
    case PolyGMethod::automatic: break;
  }
  static constexpr std::array chain{PolyGMethod::dssib_log, PolyGMethod::pois_direct,
                                    PolyGMethod::pois, PolyGMethod::stirling,
                                    PolyGMethod::recurrence};
  const std::size_t start = (alpha_ >= 0.5 || d_ <= 30) ? 0 : 1;
  for (std::size_t i = start; i < chain.size(); ++i) {
    try {
      return (*this)(logx, chain[i]);
    } catch (const MethodFailure&) {
    }
  }
  throw MethodFailure("polyG: every method failed");
}

LogValue polyG(LogValue logx, double alpha, int d, PolyGMethod method) {
  return GumbelPolynomial(alpha, d)(logx, method);
}

}  // namespace archicop
