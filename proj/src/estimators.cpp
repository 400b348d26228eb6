#include "archicop/estimators.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "archicop/density.hpp"
#include "archicop/errors.hpp"
#include "archicop/rank.hpp"
#include "archicop/sampling.hpp"

namespace archicop {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::tau_tau_bar: return "tau-tau-bar";
    case Method::tau_theta_bar: return "tau-theta-bar";
    case Method::beta: return "beta";
    case Method::mde_chi_cvm: return "mde-chi-cvm";
    case Method::mde_chi_ks: return "mde-chi-ks";
    case Method::mde_gamma_cvm: return "mde-gamma-cvm";
    case Method::mde_gamma_ks: return "mde-gamma-ks";
    case Method::mle: return "mle";
    case Method::smle: return "smle";
    case Method::dmle: return "dmle";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (s == to_string(m)) return m;
  }
  std::string list;
  for (Method m : kAllMethods) {
    if (!list.empty()) list += ", ";
    list += to_string(m);
  }
  throw ArgumentError("unknown method '" + std::string(s) + "' (expected one of " + list + ")");
}

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

Interval tau_interval(Family f, const EstimatorConfig& cfg) {
  const auto r = tau_range(f);
  double lo = std::max(cfg.tau_lo, r.lo);
  double hi = std::min(cfg.tau_hi, f == Family::A ? r.hi - 1e-9 : r.hi);
  if (!(lo > 0.0 && lo < hi && hi < r.hi)) {
    throw ArgumentError("tau range [" + std::to_string(cfg.tau_lo) + ", " + std::to_string(cfg.tau_hi) +
                        "] does not fit the attainable range of family " + std::string(to_string(f)));
  }
  return {lo, hi};
}

Interval initial_interval(Family f, const EstimatorConfig& cfg) {
  const Interval t = tau_interval(f, cfg);
  return {tau_inv(f, t.lo), tau_inv(f, t.hi)};
}

namespace {

struct Inversion {
  double theta;
  bool clamped;
};

// tau^{-1} with out-of-range targets mapped to the boundary of the admissible
// range: the independence parameter where the family has one, otherwise the
// initial-interval endpoint.
Inversion invert_tau(Family f, double t, const EstimatorConfig& cfg) {
  const auto r = tau_range(f);
  const bool below = r.lo_closed ? t < r.lo : t <= r.lo;
  const bool above = t >= r.hi;
  if ((below || above) && cfg.tau_clamp == TauClampPolicy::error) return {tau_inv(f, t), false};
  const Interval ti = tau_interval(f, cfg);
  if (below) {
    if (const auto ind = independence_theta(f)) return {*ind, true};
    return {tau_inv(f, ti.lo), true};
  }
  if (above) return {tau_inv(f, ti.hi), true};
  return {tau_inv(f, t), false};
}

int dim_of(const Matrix& u) {
  if (u.cols() < 2) throw ArgumentError("estimator: data needs at least two columns");
  if (u.rows() < 1) throw ArgumentError("estimator: data is empty");
  return static_cast<int>(u.cols());
}

// Minimizes neg_objective(theta) over the reparameterized initial interval.
EstimateResult optimize(Family f, Method m, const EstimatorConfig& cfg, double tol,
                        const std::function<double(double)>& neg_objective) {
  EstimateResult res;
  res.method = m;
  const Interval th = initial_interval(f, cfg);
  const Reparam rp = reparam(f);
  const double a_lo = rp.to_alpha(th.lo);
  const double a_hi = rp.to_alpha(th.hi);
  int evals = 0;
  auto fa = [&](double a) {
    ++evals;
    try {
      const double v = neg_objective(rp.from_alpha(a));
      return std::isnan(v) ? kInf : v;
    } catch (const Error&) {
      return kInf;
    }
  };
  double alpha;
  double fx;
  res.converged = true;
  try {
    const MinResult r = brent_min(fa, a_lo, a_hi, tol);
    alpha = r.x;
    fx = r.fx;
  } catch (const ConvergenceError& e) {
    alpha = e.best_x();
    fx = e.best_f();
    res.converged = false;
  }
  if (!std::isfinite(fx)) res.converged = false;
  const double edge = 1e-5 * (a_hi - a_lo);
  if (alpha - a_lo <= edge) {
    res.theta_hat = th.lo;
    res.clamped = true;
  } else if (a_hi - alpha <= edge) {
    res.theta_hat = th.hi;
    res.clamped = true;
  } else {
    res.theta_hat = rp.from_alpha(alpha);
  }
  res.objective = fx;
  res.evals = evals;
  return res;
}

}  // namespace

double mean_pairwise_tau(const Matrix& u, Exec exec) {
  const auto taus = pairwise_tau(u, exec);
  double acc = 0.0;
  for (double t : taus) acc += t;
  return acc / static_cast<double>(taus.size());
}

double sample_beta(const Matrix& u) {
  const int d = dim_of(u);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const auto r = u.row(i);
    const bool all_low = std::all_of(r.begin(), r.end(), [](double x) { return x <= 0.5; });
    const bool all_high = std::all_of(r.begin(), r.end(), [](double x) { return x > 0.5; });
    hits += static_cast<std::size_t>(all_low) + static_cast<std::size_t>(all_high);
  }
  const double p = std::ldexp(1.0, d - 1);
  return p / (p - 1.0) * (static_cast<double>(hits) / static_cast<double>(u.rows()) - std::ldexp(1.0, 1 - d));
}

EstimateResult est_tau_tau_bar(Family f, const Matrix& u, const EstimatorConfig& cfg) {
  dim_of(u);
  const double t = mean_pairwise_tau(u, cfg.exec);
  const Inversion inv = invert_tau(f, t, cfg);
  EstimateResult res;
  res.method = Method::tau_tau_bar;
  res.theta_hat = inv.theta;
  res.clamped = inv.clamped;
  res.converged = true;
  res.objective = t;
  return res;
}

EstimateResult est_tau_theta_bar(Family f, const Matrix& u, const EstimatorConfig& cfg) {
  dim_of(u);
  const auto taus = pairwise_tau(u, cfg.exec);
  double acc = 0.0;
  int clamps = 0;
  for (double t : taus) {
    const Inversion inv = invert_tau(f, t, cfg);
    acc += inv.theta;
    clamps += inv.clamped ? 1 : 0;
  }
  EstimateResult res;
  res.method = Method::tau_theta_bar;
  res.theta_hat = acc / static_cast<double>(taus.size());
  res.clamped = clamps > 0;
  res.clamp_count = clamps;
  res.converged = true;
  return res;
}

EstimateResult est_beta(Family f, const Matrix& u, const EstimatorConfig& cfg) {
  const int d = dim_of(u);
  const double b = sample_beta(u);
  const Interval th = initial_interval(f, cfg);
  const BetaInverse inv = beta_inv(f, b, d, th.lo, th.hi);
  EstimateResult res;
  res.method = Method::beta;
  res.theta_hat = inv.theta;
  res.clamped = inv.clamped;
  res.converged = true;
  res.objective = b;
  return res;
}

MdeKind mde_kind(Method m) {
  switch (m) {
    case Method::mde_chi_cvm: return MdeKind::chi_cvm;
    case Method::mde_chi_ks: return MdeKind::chi_ks;
    case Method::mde_gamma_cvm: return MdeKind::gamma_cvm;
    case Method::mde_gamma_ks: return MdeKind::gamma_ks;
    default: throw ArgumentError("mde_kind: not a minimum-distance method");
  }
}

namespace {

Method mde_method(MdeKind k) {
  switch (k) {
    case MdeKind::chi_cvm: return Method::mde_chi_cvm;
    case MdeKind::chi_ks: return Method::mde_chi_ks;
    case MdeKind::gamma_cvm: return Method::mde_gamma_cvm;
    case MdeKind::gamma_ks: return Method::mde_gamma_ks;
  }
  return Method::mde_chi_cvm;
}

}  // namespace

double mde_objective(const FamilySpec& spec, const Matrix& u, MdeKind kind, bool include_k, Exec exec) {
  const TransformOutput tr = hh_transform(spec, u, include_k, exec);
  const bool chi = kind == MdeKind::chi_cvm || kind == MdeKind::chi_ks;
  std::vector<double> y = chi ? tr.y_n : tr.y_l;
  std::sort(y.begin(), y.end());
  const int dof = static_cast<int>(tr.uprime.cols());
  const RefDist ref = chi ? RefDist::chi2 : RefDist::gamma;
  const bool cvm = kind == MdeKind::chi_cvm || kind == MdeKind::gamma_cvm;
  return cvm ? cvm_distance(y, ref, dof) : ks_distance(y, ref, dof);
}

EstimateResult est_mde(Family f, const Matrix& u, MdeKind kind, const EstimatorConfig& cfg) {
  const int d = dim_of(u);
  const bool include_k = cfg.mde_include_k.value_or(default_include_k(d));
  return optimize(f, mde_method(kind), cfg, cfg.tol, [&](double theta) {
    return mde_objective(FamilySpec(f, theta), u, kind, include_k, cfg.exec);
  });
}

EstimateResult est_mle(Family f, const Matrix& u, const EstimatorConfig& cfg) {
  const int d = dim_of(u);
  return optimize(f, Method::mle, cfg, cfg.tol, [&](double theta) {
    const DensityContext ctx(FamilySpec(f, theta), d, cfg.gumbel_method);
    return -log_likelihood(ctx, u, cfg.exec);
  });
}

EstimateResult est_smle(Family f, const Matrix& u, const EstimatorConfig& cfg, RngStream& rng) {
  dim_of(u);
  if (cfg.smle_m < 1) throw ArgumentError("smle: block size must be positive");
  const RngStream start = rng;
  return optimize(f, Method::smle, cfg, cfg.smle_tol, [&](double theta) {
    const FamilySpec spec(f, theta);
    RngStream fixed = start;
    RngStream& src = cfg.smle_fixed_block ? fixed : rng;
    const auto v = sample_V_block(spec, cfg.smle_m, src);
    return -smle_log_likelihood(spec, u, v, cfg.exec);
  });
}

std::vector<double> row_maxima(const Matrix& u) {
  std::vector<double> y(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const auto r = u.row(i);
    y[i] = *std::max_element(r.begin(), r.end());
  }
  return y;
}

double dmle_objective(const FamilySpec& spec, std::span<const double> ymax, int d) {
  double acc = 0.0;
  for (double y : ymax) acc -= log_diag_density(spec, d, y);
  return acc;
}

double gumbel_dmle_closed_form(std::span<const double> ymax, int d) {
  if (ymax.empty()) throw ArgumentError("dmle: empty sample");
  double s = 0.0;
  for (double y : ymax) {
    if (!(y > 0.0 && y < 1.0)) throw DomainError("dmle: maxima must lie in (0,1)");
    s += -std::log(y);
  }
  return std::log(static_cast<double>(d)) / (std::log(static_cast<double>(ymax.size())) - std::log(s));
}

EstimateResult est_dmle(Family f, const Matrix& u, const EstimatorConfig& cfg) {
  const int d = dim_of(u);
  const auto y = row_maxima(u);
  if (f == Family::G) {
    EstimateResult res;
    res.method = Method::dmle;
    const double th = gumbel_dmle_closed_form(y, d);
    res.converged = std::isfinite(th);
    // a negative denominator also signals an estimate below the independence value
    res.clamped = !(th >= 1.0);
    res.theta_hat = res.clamped ? 1.0 : th;
    res.objective = dmle_objective(FamilySpec(f, res.theta_hat), y, d);
    return res;
  }
  return optimize(f, Method::dmle, cfg, cfg.tol,
                  [&](double theta) { return dmle_objective(FamilySpec(f, theta), y, d); });
}

EstimateResult estimate(Method m, Family f, const Matrix& u, const EstimatorConfig& cfg, RngStream& rng) {
  const double t0 = thread_cpu_seconds();
  EstimateResult res;
  switch (m) {
    case Method::tau_tau_bar: res = est_tau_tau_bar(f, u, cfg); break;
    case Method::tau_theta_bar: res = est_tau_theta_bar(f, u, cfg); break;
    case Method::beta: res = est_beta(f, u, cfg); break;
    case Method::mde_chi_cvm:
    case Method::mde_chi_ks:
    case Method::mde_gamma_cvm:
    case Method::mde_gamma_ks: res = est_mde(f, u, mde_kind(m), cfg); break;
    case Method::mle: res = est_mle(f, u, cfg); break;
    case Method::smle: res = est_smle(f, u, cfg, rng); break;
    case Method::dmle: res = est_dmle(f, u, cfg); break;
  }
  res.user_time = thread_cpu_seconds() - t0;
  return res;
}

}  // namespace archicop
