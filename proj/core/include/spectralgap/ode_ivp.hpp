#pragma once

// Adaptive Dormand–Prince 5(4) integration of the eigen-ODE
//     v'' - drift(x) v' = -lambda v
// as a first-order system in (v, v'), with PI step control, quintic Hermite
// dense output, and location of the first zero of v'.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace spectralgap {

using Coefficient = std::function<double(double)>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 1'000'000;

  /// Throws PreconditionError unless 0 < rel_tol < 1e-2, abs_tol > 0, max_steps > 0.
  void validate() const;
};

/// One accepted point. ddv is the ODE right-hand side at (x, v, dv), kept so
/// that consecutive samples define a quintic Hermite interpolant.
struct Sample {
  double x = 0.0;
  double v = 0.0;
  double dv = 0.0;
  double ddv = 0.0;
};

enum class TerminalStatus { ReachedEndpoint, EventFired, StepLimit };

struct Trajectory {
  std::vector<Sample> samples;
  double lambda = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  TerminalStatus status = TerminalStatus::ReachedEndpoint;

  [[nodiscard]] const Sample& front() const { return samples.front(); }
  [[nodiscard]] const Sample& back() const { return samples.back(); }

  /// Dense output at x inside the covered range (either direction).
  /// Throws DomainError outside it.
  [[nodiscard]] Sample at(double x) const;

  /// Number of strict sign changes of v between consecutive samples.
  [[nodiscard]] std::size_t sign_changes() const;
};

/// Integrates from (x0, v0, dv0) to x1. Throws NumericalError on step-limit
/// or non-finite state; the drift must be finite on [x0, x1].
Trajectory integrate_eigen_ode(const Coefficient& drift, double lambda, double x0, double v0,
                               double dv0, double x1, const IntegratorConfig& config = {});

/// Like integrate_eigen_ode but stops at the first sign change of v' after
/// x0 (status EventFired, last sample at the located zero), or at x1
/// (status ReachedEndpoint) when v' keeps its sign.
Trajectory integrate_to_critical_point(const Coefficient& drift, double lambda, double x0,
                                       double v0, double dv0, double x1,
                                       const IntegratorConfig& config = {});

struct CriticalPoint {
  double b = 0.0;
  double v_b = 0.0;
  Trajectory trajectory;
};

/// First x > x0 with v'(x) = 0, located to 1e-12 in x. Throws NumericalError
/// when v' keeps its sign up to x_limit.
CriticalPoint first_critical_point(const Coefficient& drift, double lambda, double x0, double v0,
                                   double dv0, double x_limit, const IntegratorConfig& config = {});

/// Cumulative integral of weight(x) v(x) from `lower` along the trajectory,
/// one entry per sample. Composite Simpson per accepted step (midpoint from
/// dense output). The gap [lower, front().x] left by a series start is
/// closed with 4-point Gauss–Legendre on linearly interpolated v.
std::vector<double> cumulative_weighted_integral(const Trajectory& trajectory,
                                                 const Coefficient& weight, double lower,
                                                 double v_lower);

}  // namespace spectralgap
