#pragma once

// The five one-parameter Archimedean families A (Ali-Mikhail-Haq), C (Clayton),
// F (Frank), G (Gumbel) and J (Joe).

#include <array>
#include <optional>
#include <string_view>

#include "archicop/numerics.hpp"

namespace archicop {

enum class Family { A, C, F, G, J };

inline constexpr std::array<Family, 5> kAllFamilies{Family::A, Family::C, Family::F, Family::G,
                                                    Family::J};

std::string_view to_string(Family f);
/// Accepts the single letters and the full names (case-insensitive).
Family parse_family(std::string_view s);

/// Admissible theta range; endpoints flagged closed where admissible.
struct ThetaRange {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
};
ThetaRange theta_range(Family f);

/// Parameter at which the family reduces to the independence copula, if the
/// range contains it (A: 0, G and J: 1).
std::optional<double> independence_theta(Family f);

/// Attainable Kendall's tau range of the family.
struct TauRange {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
};
TauRange tau_range(Family f);

class FamilySpec {
 public:
  /// Throws DomainError when theta is outside the admissible range.
  FamilySpec(Family family, double theta);

  Family family() const { return family_; }
  double theta() const { return theta_; }
  bool is_independence() const;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

 private:
  Family family_;
  double theta_;
};

/// Generator and its inverse. psi(t) for t in [0, inf], psi_inv(u) for u in [0, 1].
double psi(const FamilySpec& s, double t);
double psi_inv(const FamilySpec& s, double u);
/// log psi_inv(u) for u in (0,1), without underflow for large theta.
double log_psi_inv(const FamilySpec& s, double u);
/// log(-(psi_inv)'(u)) for u in (0,1).
double log_neg_dpsi_inv(const FamilySpec& s, double u);

/// log((-1)^k psi^(k)(t)) for t > 0.
LogValue log_dpsi(const FamilySpec& s, int k, double t);

/// Kendall's tau of the bivariate copula.
double tau(const FamilySpec& s);
/// Joe's tau from its defining series, summed until the term drops below
/// 1e-14. Slow reference for the closed form used by tau().
double tau_joe_series(double theta);
/// Inverse of tau. Throws RangeError outside the attainable range.
double tau_inv(Family f, double tau_target);

/// A-priori bound on the absolute rounding error of beta() above which the
/// evaluation is refused.
inline constexpr double kBetaAbsTol = 1e-6;

/// Blomqvist's beta of the d-dimensional copula. Throws EvaluationError when
/// the alternating survival sum cancels: either to a non-positive value or
/// with a rounding-error bound above kBetaAbsTol.
double beta(const FamilySpec& s, int d);

struct BetaInverse {
  double theta;
  bool clamped;
};
/// Solves beta(theta, d) = beta_hat for theta in [theta_lo, theta_hi]. For A, G
/// and J the lower end extends to the independence parameter. Targets outside
/// the attainable range are clamped to the nearest endpoint and flagged.
BetaInverse beta_inv(Family f, double beta_hat, int d, double theta_lo, double theta_hi);

/// log of the density of max_j U_j, the diagonal of the copula.
LogValue log_diag_density(const FamilySpec& s, int d, double y);

/// Optimizer reparameterization theta <-> alpha.
struct Reparam {
  Family family;
  double alpha_lo;
  double alpha_hi;

  double to_alpha(double theta) const;
  double from_alpha(double alpha) const;
};
Reparam reparam(Family f);

}  // namespace archicop
