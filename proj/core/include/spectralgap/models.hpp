#pragma once

// One-dimensional model families: the symmetric Neumann model on
// (-d/2, d/2) and the one-sided models started at a singular endpoint.
//
// Sign convention shared with ode_ivp: every model ODE is written
//     v'' - drift(x) v' = -lambda v,
// so drift = -rho'/rho for the self-adjoint weight rho.

#include <optional>
#include <utility>

namespace spectralgap {

/// Curvature lower bound K and dimension upper bound N.
class CurvatureDimension {
 public:
  /// Throws PreconditionError for N < 1, non-finite input, or (K > 0, N = 1).
  CurvatureDimension(double K, double N);

  [[nodiscard]] double K() const noexcept { return K_; }
  [[nodiscard]] double N() const noexcept { return N_; }

  /// K/(N-1); only meaningful for N > 1.
  [[nodiscard]] double L() const;

  /// True when the model drift (N-1)T vanishes identically (K = 0 or N = 1).
  [[nodiscard]] bool drift_free() const noexcept { return K_ == 0.0 || N_ == 1.0; }

 private:
  double K_;
  double N_;
};

/// pi*sqrt((N-1)/K) for K > 0, N > 1; nullopt ("unbounded") otherwise.
std::optional<double> d_max(const CurvatureDimension& cd);

/// T(x): sqrt(L) tan(sqrt(L) x) for K > 0, 0 for K = 0, and
/// -sqrt(-L) tanh(sqrt(-L) x) for K < 0 (the cosh^{N-1}-weighted model).
double drift_T(const CurvatureDimension& cd, double x);

/// Self-adjoint weight with rho'/rho = -(N-1) T; rho(0) = 1.
double weight_rho(const CurvatureDimension& cd, double x);

enum class EndpointKind { Regular, Singular };

/// Which side of the interval an endpoint sits on.
enum class Side { Left, Right };

/// Data describing a point where the weight vanishes like t^p, t the
/// distance into the domain. The model drift then expands as
///     -rho'/rho = -(p/t + q t - q^2/(5p) t^3 + O(t^5)),  q = regular_slope,
/// in the inward variable t.
struct SingularEndpoint {
  double position = 0.0;
  Side side = Side::Left;
  double exponent = 0.0;       // p
  double regular_slope = 0.0;  // linear coefficient of rho'/rho - p/t
};

class SymmetricModel {
 public:
  /// Throws PreconditionError for d <= 0 or d > d_max (with a 1e-12
  /// relative allowance so that d = d_max given in floating point is
  /// accepted and snapped onto d_max).
  SymmetricModel(CurvatureDimension cd, double d);

  [[nodiscard]] const CurvatureDimension& cd() const noexcept { return cd_; }
  [[nodiscard]] double d() const noexcept { return d_; }
  [[nodiscard]] double left() const noexcept { return -0.5 * d_; }
  [[nodiscard]] double right() const noexcept { return 0.5 * d_; }
  [[nodiscard]] EndpointKind endpoint_kind() const noexcept { return endpoint_; }

  /// Coefficient for ode_ivp: (N-1) T(x); zero when drift_free().
  [[nodiscard]] double drift(double x) const;
  [[nodiscard]] double weight(double x) const;

  /// Only valid when endpoint_kind() == Singular.
  [[nodiscard]] SingularEndpoint singular_endpoint(Side side) const;

 private:
  CurvatureDimension cd_;
  double d_;
  EndpointKind endpoint_;
};

enum class OneSidedFamily { Trig, Power, Hyperbolic };

/// The model L_{R,l} started at its singular endpoint a, with density
/// cos^{l-1}(sqrt(L) s), s^{l-1} or sinh^{l-1}(sqrt(-L) s).
class OneSidedModel {
 public:
  /// Throws PreconditionError unless l > 1 and R, l are finite.
  OneSidedModel(double R, double l);

  [[nodiscard]] double R() const noexcept { return R_; }
  [[nodiscard]] double l() const noexcept { return l_; }
  [[nodiscard]] double L() const noexcept { return R_ / (l_ - 1.0); }
  [[nodiscard]] OneSidedFamily family() const noexcept { return family_; }

  /// -pi/(2 sqrt(L)) for Trig, 0 otherwise.
  [[nodiscard]] double a() const;

  /// Right end of the domain: -a for Trig, +infinity otherwise.
  [[nodiscard]] double right_end() const;

  /// -rho'/rho, the ode_ivp drift coefficient. Domain: a < s < right_end.
  [[nodiscard]] double drift(double s) const;

  [[nodiscard]] SingularEndpoint left_endpoint() const;

  /// Only for Trig: the density also vanishes at -a.
  [[nodiscard]] SingularEndpoint right_endpoint() const;

 private:
  double R_;
  double l_;
  OneSidedFamily family_;
};

/// rho(s) per family; rho(a) = 0. Throws DomainError outside [a, right_end].
double one_sided_density(const OneSidedModel& model, double s);

/// Frobenius series start at a singular endpoint with v'(x0) = 0 imposed.
///
/// Solves v'' + (p/t + q t) v' = -lambda v in the inward variable t by
/// v = v0 (1 + c1 t^2 + c2 t^4), returning (v, dv/dx) at x0 +- h0. The
/// next term c3 h0^6 serves as truncation estimate; with max_error > 0 the
/// function throws PreconditionError when that estimate exceeds it.
std::pair<double, double> frobenius_start(const SingularEndpoint& endpoint, double lambda,
                                          double v0, double h0, double max_error = 0.0);

/// Truncation estimate |v0 c3| h0^6 of frobenius_start.
double frobenius_truncation(const SingularEndpoint& endpoint, double lambda, double v0,
                            double h0);

/// Series offset: start_fraction * length, halved until the truncation
/// estimate is below abs_tol.
double frobenius_offset(const SingularEndpoint& endpoint, double lambda, double length,
                        double abs_tol, double start_fraction = 1e-4);

/// Derivative dv/dx of the regular (series) solution through value v at
/// distance h0 from the endpoint; used for series-consistent residuals.
double frobenius_regular_slope(const SingularEndpoint& endpoint, double lambda, double v,
                               double h0);

}  // namespace spectralgap
