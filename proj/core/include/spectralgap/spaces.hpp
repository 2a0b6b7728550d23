#pragma once

// Model spaces with known curvature-dimension data, diameter and spectral
// gap, used to check lambda_1 >= lambda_hat(K, N, diam) end to end.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spectralgap/models.hpp"

namespace spectralgap {

enum class WeightFamily { Cos, Cosh };

/// [x0, x1] with weight cos^p(x) (inside |x| <= pi/2) or cosh^p(x). Declared
/// data follow from the weight: (K, N) = (p, p + 1) for cos, (-p, p + 1) for
/// cosh. p = 0 is a flat interval.
struct WeightedInterval {
  double x0 = 0.0;
  double x1 = 1.0;
  double p = 0.0;
  WeightFamily family = WeightFamily::Cos;

  void validate() const;
  [[nodiscard]] double weight(double x) const;
  [[nodiscard]] double declared_K() const { return family == WeightFamily::Cos ? p : -p; }
  [[nodiscard]] double declared_N() const { return p + 1.0; }
  [[nodiscard]] double diameter() const { return x1 - x0; }
};

struct Circle {
  double circumference = 0.0;
};
struct Sphere {
  int n = 2;
};
struct Rectangle {
  double a = 1.0;
  double b = 1.0;
};
struct FlatInterval {
  double d = 1.0;
};

using SpaceKind = std::variant<Circle, Sphere, Rectangle, FlatInterval, WeightedInterval>;

struct ModelSpace {
  std::string name;
  SpaceKind kind;
  double declared_K = 0.0;
  double declared_N = 1.0;
  double diameter = 0.0;
  std::optional<double> lambda1;  // closed form when known
  bool equality_case = false;     // lambda_1 == lambda_hat expected
};

/// Fills declared data, diameter and closed-form lambda_1 from the kind.
ModelSpace make_space(std::string name, SpaceKind kind, bool equality_case = false);

/// Built-in verification catalog.
const std::vector<ModelSpace>& builtin_catalog();

/// Catalog filter: empty string selects everything, "equality" selects the
/// equality cases, anything else is a comma-separated list of name
/// substrings. "none" selects nothing.
std::vector<ModelSpace> filter_catalog(const std::string& filter);

struct EigenPair {
  double lambda1 = 0.0;               // raw value on the n-cell grid
  double lambda1_extrapolated = 0.0;  // Richardson from n/2 and n
  double error_estimate = 0.0;        // |lambda_n - lambda_{n/2}| / 3
  double h = 0.0;
  std::vector<double> x;  // cell centers
  std::vector<double> f;  // eigenfunction, min f = -1, max f <= 1
};

/// Second eigenpair of the finite-volume pencil; n >= 64.
EigenPair first_neumann_eigenpair(const WeightedInterval& space, std::size_t n);

struct BoundReport {
  std::string space;
  double K = 0.0;
  double N = 0.0;
  double diameter = 0.0;
  double lambda1 = 0.0;
  double lambda1_error = 0.0;
  double lambda_hat = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// margin = lambda_1 - lambda_hat(K, N, diam); pass when margin >= -(tol +
/// discretization error of lambda_1).
BoundReport verify_bound(const ModelSpace& space, double tol = 1e-5, std::size_t n = 2048);

/// sin(sqrt(k) t)/sqrt(k), t, or sinh(sqrt(-k) t)/sqrt(-k).
double s_kappa(double kappa, double theta);

/// Bishop–Gromov volume-ratio lower bound
///   int_0^r s_{K/(N-1)}^{N-1} / int_0^R s_{K/(N-1)}^{N-1}.
double bg_ratio_lower_bound(const CurvatureDimension& cd, double r, double R);

}  // namespace spectralgap
