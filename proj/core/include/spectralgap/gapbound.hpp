#pragma once

// lambda_hat(K, N, d): first nonzero Neumann eigenvalue of
//     v'' - (N-1) T(x) v' = -lambda v   on (-d/2, d/2),
// by shooting on the Neumann miss function and, independently, by
// finite-volume discretization with Richardson extrapolation.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spectralgap/models.hpp"
#include "spectralgap/ode_ivp.hpp"

namespace spectralgap {

enum class Method { Shooting, Discretization, ClosedForm, Both };

std::string to_string(Method m);
/// Accepts "shooting", "discretization", "closed-form", "both".
Method method_from_string(const std::string& name);

struct SpectralDiagnostics {
  // Shooting.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int scan_evaluations = 0;
  int root_iterations = 0;
  std::size_t ode_steps = 0;  // summed over every shot
  // Discretization.
  std::vector<std::size_t> grid_sizes;
  std::vector<double> grid_values;
  double observed_order = 0.0;
  bool order_warning = false;
  // Both.
  std::optional<double> shooting_value;
  std::optional<double> discretization_value;
  std::optional<double> agreement;
};

struct SpectralResult {
  double lambda = 0.0;
  Method method = Method::Shooting;
  double achieved_tol = 0.0;
  SpectralDiagnostics diagnostics;
};

struct MissValue {
  double D = 0.0;                          // terminal weighted flux rho v'
  std::size_t interior_sign_changes = 0;   // zeros of v along the shot
  std::size_t ode_steps = 0;               // accepted integrator steps
};

/// Shoots from the left end with v = 1, v' = 0 (series start at a singular
/// end) to the right end. At a singular right end the flux is taken
/// relative to the regular series solution, rho (v' - v'_reg).
MissValue miss_function(const SymmetricModel& model, double lambda, const IntegratorConfig& config = {});

/// Shooting path. Throws NumericalError when the bracket scan is exhausted.
SpectralResult shoot_hat_lambda(const SymmetricModel& model, double tol = 1e-9);

/// Discretization path: second eigenvalue of the finite-volume pencil on
/// each grid, Richardson-extrapolated from the two finest; achieved_tol is
/// the spread between the last two extrapolations.
SpectralResult discretize_hat_lambda(const SymmetricModel& model,
                                     const std::vector<std::size_t>& grids = {512, 1024, 2048});

/// Dispatches on method. Drift-free models (K = 0 or N = 1) always take the
/// closed form pi^2/d^2. Both runs the two numerical paths, requires
/// agreement within 10 tol (NumericalError otherwise) and returns the
/// shooting value. Discretization throws NumericalError when its error
/// estimate exceeds tol.
SpectralResult hat_lambda(const CurvatureDimension& cd, double d, double tol = 1e-9,
                          Method method = Method::Shooting);

/// N K / (N - 1); requires K > 0 and N > 1.
double lichnerowicz(const CurvatureDimension& cd);

/// N / (1 - cos^N(d/2)); requires N > 1 and 0 < d <= pi.
double remark_bound(double N, double d);

}  // namespace spectralgap
