#pragma once

// Parameter estimators for one-parameter Archimedean copulas.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "archicop/family.hpp"
#include "archicop/matrix.hpp"
#include "archicop/numerics.hpp"
#include "archicop/polynomials.hpp"
#include "archicop/rng.hpp"
#include "archicop/transform.hpp"

namespace archicop {

enum class Method {
  tau_tau_bar,
  tau_theta_bar,
  beta,
  mde_chi_cvm,
  mde_chi_ks,
  mde_gamma_cvm,
  mde_gamma_ks,
  mle,
  smle,
  dmle,
};

inline constexpr std::array<Method, 10> kAllMethods{
    Method::tau_tau_bar, Method::tau_theta_bar, Method::beta,  Method::mde_chi_cvm, Method::mde_chi_ks,
    Method::mde_gamma_cvm, Method::mde_gamma_ks, Method::mle, Method::smle,      Method::dmle};

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

/// What the tau-based estimators do with an averaged tau outside the
/// attainable range.
enum class TauClampPolicy { clamp, error };

struct EstimatorConfig {
  std::size_t smle_m = 10000;
  /// Draw one variate block per fit instead of one per objective evaluation.
  bool smle_fixed_block = false;
  /// Unset: include K for d <= 5.
  std::optional<bool> mde_include_k;
  TauClampPolicy tau_clamp = TauClampPolicy::clamp;
  /// Optimizer tolerance on the reparameterized argument.
  double tol = kDefaultSolverTol;
  double smle_tol = 1e-4;
  /// Kendall's tau range defining the initial optimization interval.
  double tau_lo = 0.001;
  double tau_hi = 0.999;
  PolyGMethod gumbel_method = PolyGMethod::automatic;
  /// Execution policy of the row kernels inside one estimator call.
  Exec exec = Exec::serial;
};

struct EstimateResult {
  Method method = Method::mle;
  double theta_hat = kNaN;
  bool converged = false;
  bool clamped = false;
  double objective = kNaN;
  double user_time = 0.0;  // thread CPU seconds
  int evals = 0;
  /// Pairwise inversions that needed clamping (tau-theta-bar only).
  int clamp_count = 0;

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

struct Interval {
  double lo;
  double hi;
};

/// Kendall's tau range used for the initial interval: cfg's range intersected
/// with the attainable range of the family (A stays below 1/3).
Interval tau_interval(Family f, const EstimatorConfig& cfg);
/// [tau^{-1}(tau_lo), tau^{-1}(tau_hi)].
Interval initial_interval(Family f, const EstimatorConfig& cfg);

/// Mean of the pairwise sample taus.
double mean_pairwise_tau(const Matrix& u, Exec exec = Exec::serial);
/// Sample version of the d-variate Blomqvist's beta.
double sample_beta(const Matrix& u);

enum class MdeKind { chi_cvm, chi_ks, gamma_cvm, gamma_ks };
MdeKind mde_kind(Method m);
/// Distance between the reduced transformed sample and its reference law.
double mde_objective(const FamilySpec& spec, const Matrix& u, MdeKind kind, bool include_k,
                     Exec exec = Exec::serial);

/// Negative diagonal log-likelihood -sum_i log delta'(max_j u_ij).
double dmle_objective(const FamilySpec& spec, std::span<const double> ymax, int d);
/// Unadjusted closed-form Gumbel diagonal MLE log d / (log n - log sum(-log Y_i)).
double gumbel_dmle_closed_form(std::span<const double> ymax, int d);
std::vector<double> row_maxima(const Matrix& u);

EstimateResult est_tau_tau_bar(Family f, const Matrix& u, const EstimatorConfig& cfg);
EstimateResult est_tau_theta_bar(Family f, const Matrix& u, const EstimatorConfig& cfg);
EstimateResult est_beta(Family f, const Matrix& u, const EstimatorConfig& cfg);
EstimateResult est_mde(Family f, const Matrix& u, MdeKind kind, const EstimatorConfig& cfg);
EstimateResult est_mle(Family f, const Matrix& u, const EstimatorConfig& cfg);
EstimateResult est_smle(Family f, const Matrix& u, const EstimatorConfig& cfg, RngStream& rng);
EstimateResult est_dmle(Family f, const Matrix& u, const EstimatorConfig& cfg);

/// Dispatch on the method tag. `rng` is used by SMLE only.
EstimateResult estimate(Method m, Family f, const Matrix& u, const EstimatorConfig& cfg, RngStream& rng);

/// Thread CPU time in seconds.
double thread_cpu_seconds();

}  // namespace archicop
