#include "archicop/density.hpp"

#include <cmath>
#include <string>

#include "archicop/errors.hpp"
#include "archicop/parallel.hpp"

namespace archicop {

namespace {

void check_point(std::span<const double> u, int d) {
  if (static_cast<int>(u.size()) != d) {
    throw ArgumentError("log_density: point has " + std::to_string(u.size()) + " components, expected " +
                        std::to_string(d));
  }
  for (double x : u) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("log_density: components must lie in (0,1)");
  }
}

// log(1 + t) given log t
double log1p_from_log(double lt) {
  return lt > 0.0 ? lt + std::log1p(std::exp(-lt)) : std::log1p(std::exp(lt));
}

}  // namespace

DensityContext::DensityContext(const FamilySpec& spec, int d, PolyGMethod gumbel_method)
    : spec_(spec), d_(d), gumbel_method_(gumbel_method) {
  if (d < 1) throw DomainError("DensityContext: dimension must be positive");
  if (spec.is_independence()) return;
  const double th = spec.theta();
  log_theta_ = std::log(th);
  alpha_ = 1.0 / th;
  switch (spec.family()) {
    case Family::A:
      c0_ = (d + 1) * std::log1p(-th) - 2.0 * log_theta_;
      break;
    case Family::C:
      c0_ = 0.0;
      for (int k = 0; k < d; ++k) c0_ += std::log1p(th * k);
      break;
    case Family::F:
      log1mexp_theta_ = log1mexp(th);
      c0_ = (d - 1) * (log_theta_ - log1mexp_theta_);
      break;
    case Family::G:
      c0_ = d * log_theta_;
      gumbel_.emplace_back(alpha_, d);
      break;
    case Family::J:
      c0_ = (d - 1) * log_theta_;
      joe_coef_ = polyJ_log_coefficients(alpha_, d);
      break;
  }
}

LogValue DensityContext::log_density(std::span<const double> u) const {
  check_point(u, d_);
  if (spec_.is_independence()) return 0.0;
  const double th = spec_.theta();
  switch (spec_.family()) {
    case Family::A: {
      double slu = 0.0;
      double lh = log_theta_;
      for (double x : u) {
        const double lx = std::log(x);
        slu += lx;
        lh += lx - std::log1p(-th * (1.0 - x));
      }
      return c0_ + lh - 2.0 * slu + polylog_neg(d_, lh);
    }
    case Family::C: {
      double slu = 0.0;
      std::vector<double> b(d_);
      for (int j = 0; j < d_; ++j) {
        const double lx = std::log(u[j]);
        slu += lx;
        const double a = -th * lx;
        b[j] = a + log1mexp(a);  // log expm1(a)
      }
      return c0_ - (1.0 + th) * slu - (d_ + alpha_) * log1p_from_log(lsum(b));
    }
    case Family::F: {
      double lh = (1 - d_) * log1mexp_theta_;
      double su = 0.0;
      for (double x : u) {
        su += x;
        lh += log1mexp(th * x);
      }
      return c0_ + polylog_neg(d_ - 1, lh) - th * su - lh;
    }
    case Family::G: {
      std::vector<double> b(d_);
      double slx = 0.0;
      double slu = 0.0;
      for (int j = 0; j < d_; ++j) {
        const double lu = std::log(u[j]);
        const double lx = std::log(-lu);
        slu += lu;
        slx += lx;
        b[j] = th * lx;
      }
      const double lt = lsum(b);
      return c0_ - std::exp(alpha_ * lt) + (th - 1.0) * slx - d_ * lt - slu +
             gumbel_.front()(alpha_ * lt, gumbel_method_);
    }
    case Family::J: {
      double s1mu = 0.0;
      double lh = 0.0;
      for (double x : u) {
        const double l = std::log1p(-x);
        s1mu += l;
        lh += log1mexp(-th * l);
      }
      const double l1mh = log1mexp(-lh);
      const double lx = lh - l1mh;
      std::vector<double> b(d_);
      for (int k = 0; k < d_; ++k) b[k] = joe_coef_[k] + (k == 0 ? 0.0 : k * lx);
      return c0_ + (th - 1.0) * s1mu - (1.0 - alpha_) * l1mh + lsum(b);
    }
  }
  return 0.0;
}

LogValue log_density_generic(const FamilySpec& spec, std::span<const double> u) {
  const int d = static_cast<int>(u.size());
  check_point(u, d);
  if (spec.is_independence()) return 0.0;
  double t = 0.0;
  double rest = 0.0;
  for (double x : u) {
    t += psi_inv(spec, x);
    rest += log_neg_dpsi_inv(spec, x);
  }
  return log_dpsi(spec, d, t) + rest;
}

std::vector<double> log_density_rows(const DensityContext& ctx, const Matrix& u, Exec exec) {
  if (static_cast<int>(u.cols()) != ctx.dim()) throw ArgumentError("log_likelihood: dimension mismatch");
  std::vector<double> out(u.rows());
  for_each_index(u.rows(), exec, [&](std::size_t i) { out[i] = ctx.log_density(u.row(i)); });
  return out;
}

double log_likelihood(const DensityContext& ctx, const Matrix& u, Exec exec) {
  const auto rows = log_density_rows(ctx, u, exec);
  double acc = 0.0;
  for (double v : rows) acc += v;
  return acc;
}

namespace {

LogValue smle_from_logs(int d, double t, std::span<const double> v, std::span<const double> logv,
                        std::vector<double>& scratch) {
  scratch.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    // a variate beyond the double range contributes nothing for t > 0
    scratch[k] = (v[k] == kInf && t > 0.0) ? kNegInf : d * logv[k] - v[k] * t;
  }
  return lsum(scratch) - std::log(static_cast<double>(v.size()));
}

}  // namespace

LogValue smle_log_dpsi(int d, double t, std::span<const double> v) {
  if (v.empty()) throw ArgumentError("smle_log_dpsi: empty variate block");
  std::vector<double> logv(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) logv[k] = std::log(v[k]);
  std::vector<double> scratch;
  return smle_from_logs(d, t, v, logv, scratch);
}

double smle_log_likelihood(const FamilySpec& spec, const Matrix& u, std::span<const double> v, Exec exec) {
  if (v.empty()) throw ArgumentError("smle_log_likelihood: empty variate block");
  const int d = static_cast<int>(u.cols());
  std::vector<double> logv(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) logv[k] = std::log(v[k]);
  std::vector<double> rows(u.rows());
  for_each_index(u.rows(), exec, [&](std::size_t i) {
    const auto x = u.row(i);
    check_point(x, d);
    double t = 0.0;
    double rest = 0.0;
    for (double xj : x) {
      t += psi_inv(spec, xj);
      rest += log_neg_dpsi_inv(spec, xj);
    }
    std::vector<double> scratch;
    rows[i] = smle_from_logs(d, t, v, logv, scratch) + rest;
  });
  double acc = 0.0;
  for (double r : rows) acc += r;
  return acc;
}

}  // namespace archicop
