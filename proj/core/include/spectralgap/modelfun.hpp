#pragma once

// One-sided model functions v_{R,l}: the solution of L_{R,l} v = -lambda v
// started at the singular end with v = -1, its first critical point b and
// the value m = v(b). Also the interval matching used to compare a space's
// eigenfunction against the model, and the two comparison checkers.

#include <cstddef>
#include <optional>

#include "spectralgap/models.hpp"
#include "spectralgap/ode_ivp.hpp"
#include "spectralgap/spaces.hpp"

namespace spectralgap {

/// Tight defaults: profiles feed comparisons at the 1e-8 level.
IntegratorConfig profile_config();

struct ModelProfile {
  OneSidedModel model{0.0, 2.0};
  double lambda = 0.0;
  double a = 0.0;
  double b = 0.0;
  double m = 0.0;
  /// True when v' has no zero inside the Trig domain and b is the regular
  /// singular right end (lambda equal to the threshold l).
  bool b_at_singular_end = false;
  /// Samples on [a, b]; first and last samples sit exactly at a and b.
  Trajectory trajectory;
};

/// Throws PreconditionError for l <= 1 or lambda <= 0, NumericalError when
/// v' keeps its sign (Trig with lambda below the threshold l, or no critical
/// point within 64 half-wavelengths otherwise).
ModelProfile model_profile(double R, double l, double lambda,
                           const IntegratorConfig& config = profile_config());

double m_value(double R, double l, double lambda, const IntegratorConfig& config = profile_config());

/// sup over samples of |lambda int_a^s rho v + rho(s) v'(s)|.
double weighted_flux_residual(const ModelProfile& profile);

/// Translated model families used for matching: the density is one of
/// cos^{N-1}(sqrt(L) s), 1, s^{N-1}, sinh^{N-1}(sqrt(-L) s), cosh^{N-1}(sqrt(-L) s).
enum class FamilyBranch { Trig, Flat, Power, Sinh, Cosh };

const char* to_string(FamilyBranch branch);

struct TranslatedModel {
  FamilyBranch branch = FamilyBranch::Flat;
  double L = 0.0;  // R/(N-1)
  double p = 0.0;  // N-1

  [[nodiscard]] double drift(double s) const;
  [[nodiscard]] double weight(double s) const;
};

struct MatchedInterval {
  TranslatedModel family;
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;
  double max_v = 0.0;
  Trajectory trajectory;  // v on [a, b] with v(a) = -1, v'(a) = v'(b) = 0
};

/// Finds [a, b] in the translated family for curvature R and dimension N
/// on which the Neumann eigenfunction for lambda1 runs from -1 to max_f.
/// lambda1 = NR/(N-1) is accepted (the full Trig interval). Throws
/// PreconditionError on bad input and NumericalError when no bracket is
/// found.
MatchedInterval match_interval(double R, double N, double lambda1, double max_f,
                               const IntegratorConfig& config = profile_config(),
                               double value_tol = 1e-10);

struct GradientReport {
  std::size_t n = 0;
  double lambda_space = 0.0;
  double lambda_model = 0.0;
  double max_gamma = 0.0;
  double max_violation = 0.0;  // max over interior cells of Gamma(f) - phi(f)
  bool pass = false;
};

/// Compares Gamma(f) = f'^2 of a discrete eigenfunction against
/// phi(f) = (v' o v^{-1})^2(f). Throws PreconditionError when the
/// eigenvalues differ by more than lambda_tol or f leaves [min v, max v]
/// by more than range_slack.
GradientReport check_gradient_comparison(const EigenPair& eig, const Trajectory& model_v, double tol,
                                         double lambda_tol = 1e-6, double range_slack = 1e-6);

/// Full pipeline: eigenpair on n cells, match in the space's declared
/// family, then compare. N_override as in check_max_comparison.
GradientReport gradient_comparison(const WeightedInterval& space, std::size_t n, double tol = 1e-4,
                                   std::optional<double> N_override = std::nullopt);

struct MaxReport {
  double K = 0.0;
  double N = 0.0;
  double lambda1 = 0.0;
  double max_f = 0.0;
  double m_KN = 0.0;
  bool pass = false;
};

/// max f >= m_{K,N}(lambda1) - tol with lambda1 the space's own eigenvalue.
/// N_override replaces the declared N (needed for flat intervals, N = 1).
MaxReport check_max_comparison(const WeightedInterval& space, double tol = 1e-4, std::size_t n = 2048,
                               std::optional<double> N_override = std::nullopt);

}  // namespace spectralgap
