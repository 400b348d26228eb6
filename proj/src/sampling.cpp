#include "archicop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "archicop/errors.hpp"

namespace archicop {

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a+1) U^{1/a}
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::exp(std::log(rng.uniform()) / shape);
  }
  const double dd = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * dd);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + dd - dd * v + dd * std::log(v)) return dd * v;
  }
}

double sample_positive_stable(double alpha, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sample_positive_stable: alpha must lie in (0,1]");
  if (alpha == 1.0) return 1.0;
  // Kanter's representation
  const double th = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  const double ia = 1.0 / (1.0 - alpha);
  const double log_a = alpha * ia * std::log(std::sin(alpha * th)) + std::log(std::sin((1.0 - alpha) * th)) -
                       ia * std::log(std::sin(th));
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
}

double sample_logarithmic(double theta, RngStream& rng) {
  if (!(theta > 0.0)) throw DomainError("sample_logarithmic: theta must be positive");
  // Kemp's LK method with p = 1 - e^{-theta}
  const double p = -std::expm1(-theta);
  const double u2 = rng.uniform();
  if (u2 > p) return 1.0;
  const double u1 = rng.uniform();
  const double log_q = log1mexp(u1 * theta);
  if (u2 < std::exp(2.0 * log_q)) return std::floor(1.0 + std::log(u2) / log_q);
  if (u2 > std::exp(log_q)) return 1.0;
  return 2.0;
}

double sample_sibuya(double alpha, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sample_sibuya: alpha must lie in (0,1]");
  if (alpha == 1.0) return 1.0;
  // V = min{n : S(n) < W} with survival S(n) = Gamma(n+1-alpha) / (Gamma(1-alpha) Gamma(n+1)).
  const double w = rng.uniform();
  if (w > 1.0 - alpha) return 1.0;
  const double g1a = boost::math::tgamma(1.0 - alpha);
  auto survival = [&](double n) { return boost::math::tgamma_delta_ratio(n + 1.0 - alpha, alpha) / g1a; };
  // S(n) ~ n^{-alpha} / Gamma(1 - alpha) for large n
  const double guess = std::exp(-std::log(w * g1a) / alpha);
  if (!(guess < 1e15)) return std::floor(guess);
  double n = std::max(1.0, std::floor(guess));
  while (n > 1.0 && survival(n) < w) n -= 1.0;
  while (survival(n) >= w) n += 1.0;
  return n;
}

double sample_geometric(double theta, RngStream& rng) {
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("sample_geometric: theta must lie in [0,1)");
  if (theta == 0.0) return 1.0;
  return 1.0 + std::floor(std::log(rng.uniform()) / std::log(theta));
}

double sample_V(const FamilySpec& spec, RngStream& rng) {
  const double th = spec.theta();
  switch (spec.family()) {
    case Family::A: return sample_geometric(th, rng);
    case Family::C: return sample_gamma(1.0 / th, rng);
    case Family::F: return sample_logarithmic(th, rng);
    case Family::G: return sample_positive_stable(1.0 / th, rng);
    case Family::J: return sample_sibuya(1.0 / th, rng);
  }
  return 1.0;
}

std::vector<double> sample_V_block(const FamilySpec& spec, std::size_t m, RngStream& rng) {
  std::vector<double> out(m);
  for (auto& v : out) v = sample_V(spec, rng);
  return out;
}

DataMatrix sample_copula(const FamilySpec& spec, std::size_t n, int d, RngStream& rng) {
  if (n < 1) throw ArgumentError("sample_copula: n must be positive");
  if (d < 2) throw ArgumentError("sample_copula: d must be at least 2");
  DataMatrix out(n, static_cast<std::size_t>(d));
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  if (spec.is_independence()) {
    for (auto& x : out.values()) x = rng.uniform();
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = sample_V(spec, rng);
    for (int j = 0; j < d; ++j) {
      const double u = psi(spec, rng.exponential() / v);
      out(i, j) = std::clamp(u, lo, hi);
    }
  }
  return out;
}

}  // namespace archicop
