#include "archicop/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "archicop/errors.hpp"
#include "archicop/parallel.hpp"

namespace archicop {

double kendall_K_from_psi_inv(const FamilySpec& spec, int d, double s) {
  if (d < 1) throw DomainError("kendall_K: dimension must be positive");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("kendall_K: argument outside (0,1)");
  std::vector<double> b(d);
  const double ls = std::log(s);
  for (int k = 0; k < d; ++k) b[k] = log_dpsi(spec, k, s) + k * ls - log_factorial(k);
  return std::min(1.0, std::exp(lsum(b)));
}

double kendall_K(const FamilySpec& spec, int d, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("kendall_K: t must lie in (0,1)");
  if (d == 1) return t;
  return kendall_K_from_psi_inv(spec, d, psi_inv(spec, t));
}

TransformOutput hh_transform(const FamilySpec& spec, const Matrix& data, bool include_k, Exec exec) {
  const std::size_t n = data.rows();
  const int d = static_cast<int>(data.cols());
  if (d < 2) throw ArgumentError("hh_transform: need at least two columns");
  const int dp = include_k ? d : d - 1;
  TransformOutput out;
  out.uprime = Matrix(n, static_cast<std::size_t>(dp));
  out.include_k = include_k;
  out.y_n.assign(n, 0.0);
  out.y_l.assign(n, 0.0);
  for_each_index(n, exec, [&](std::size_t i) {
    const auto u = data.row(i);
    for (int j = 0; j < d; ++j) {
      if (!(u[j] > 0.0 && u[j] < 1.0)) {
        throw DomainError("hh_transform: row " + std::to_string(i) + " has a component outside (0,1)");
      }
    }
    // prefix log-sums of psi^{-1}(u_k)
    double prefix = log_psi_inv(spec, u[0]);
    double yn = 0.0;
    double yl = 0.0;
    for (int j = 1; j < d; ++j) {
      const double next = log_add(prefix, log_psi_inv(spec, u[j]));
      const double log_up = j * (prefix - next);
      const double up = std::exp(log_up);
      out.uprime(i, j - 1) = up;
      const double z = norm_quantile(std::clamp(up, kQuantileClamp, 1.0 - kQuantileClamp));
      yn += z * z;
      yl += -log_up;
      prefix = next;
    }
    if (include_k) {
      const double k = kendall_K_from_psi_inv(spec, d, std::exp(prefix));
      out.uprime(i, d - 1) = k;
      const double z = norm_quantile(std::clamp(k, kQuantileClamp, 1.0 - kQuantileClamp));
      yn += z * z;
      yl += -std::log(k);
    }
    out.y_n[i] = yn;
    out.y_l[i] = yl;
  });
  return out;
}

std::string_view to_string(RefDist r) { return r == RefDist::chi2 ? "chi2" : "gamma"; }

double ref_cdf(RefDist r, int dof, double y) {
  return r == RefDist::chi2 ? chisq_cdf(dof, y) : gamma_cdf(dof, y);
}

namespace {

void check_sorted(std::span<const double> y) {
  if (y.empty()) throw ArgumentError("distance: empty sample");
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] < y[i - 1]) throw ArgumentError("distance: sample must be sorted ascending");
  }
}

}  // namespace

double cvm_distance(std::span<const double> y, RefDist r, int dof) {
  check_sorted(y);
  const double n = static_cast<double>(y.size());
  double acc = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = (2.0 * i + 1.0) / (2.0 * n) - ref_cdf(r, dof, y[i]);
    acc += diff * diff;
  }
  return acc;
}

double ks_distance(std::span<const double> y, RefDist r, int dof) {
  check_sorted(y);
  const double n = static_cast<double>(y.size());
  double best = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double f = ref_cdf(r, dof, y[i]);
    best = std::max({best, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return best;
}

}  // namespace archicop
