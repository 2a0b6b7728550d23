#include "spectralgap/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spectralgap/errors.hpp"
#include "spectralgap/gapbound.hpp"
#include "spectralgap/tridiag_eigen.hpp"

namespace spectralgap {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void WeightedInterval::validate() const {
  if (!(x1 > x0) || !std::isfinite(x0) || !std::isfinite(x1)) throw PreconditionError("weighted interval needs x0 < x1");
  if (!(p >= 0.0)) throw PreconditionError("weight exponent must be nonnegative");
  if (family == WeightFamily::Cos && p > 0.0 && (x0 < -0.5 * kPi * (1 + 1e-14) || x1 > 0.5 * kPi * (1 + 1e-14))) {
    throw PreconditionError("cos^p weighted interval must lie inside [-pi/2, pi/2]");
  }
}

double WeightedInterval::weight(double x) const {
  if (p == 0.0) return 1.0;
  if (family == WeightFamily::Cosh) return std::pow(std::cosh(x), p);
  return std::pow(std::max(0.0, std::cos(x)), p);
}

ModelSpace make_space(std::string name, SpaceKind kind, bool equality_case) {
  ModelSpace s;
  s.name = std::move(name);
  s.equality_case = equality_case;
  std::visit(overloaded{
                 [&](const Circle& c) {
                   if (!(c.circumference > 0.0)) throw PreconditionError("circle circumference must be positive");
                   s.declared_K = 0.0;
                   s.declared_N = 1.0;
                   s.diameter = 0.5 * c.circumference;
                   s.lambda1 = std::pow(2.0 * kPi / c.circumference, 2);
                 },
                 [&](const Sphere& sp) {
                   if (sp.n < 2) throw PreconditionError("sphere dimension must be >= 2");
                   s.declared_K = sp.n - 1.0;
                   s.declared_N = sp.n;
                   s.diameter = kPi;
                   s.lambda1 = static_cast<double>(sp.n);
                 },
                 [&](const Rectangle& r) {
                   if (!(r.a > 0.0 && r.b > 0.0)) throw PreconditionError("rectangle sides must be positive");
                   s.declared_K = 0.0;
                   s.declared_N = 2.0;
                   s.diameter = std::hypot(r.a, r.b);
                   s.lambda1 = kPi * kPi / std::pow(std::max(r.a, r.b), 2);
                 },
                 [&](const FlatInterval& f) {
                   if (!(f.d > 0.0)) throw PreconditionError("interval length must be positive");
                   s.declared_K = 0.0;
                   s.declared_N = 1.0;
                   s.diameter = f.d;
                   s.lambda1 = kPi * kPi / (f.d * f.d);
                 },
                 [&](const WeightedInterval& w) {
                   w.validate();
                   s.declared_K = w.declared_K();
                   s.declared_N = w.declared_N();
                   s.diameter = w.diameter();
                 },
             },
             s.kind = std::move(kind));
  return s;
}

const std::vector<ModelSpace>& builtin_catalog() {
  static const std::vector<ModelSpace> catalog = [] {
    const double h = 0.5 * kPi;
    struct Entry {
      const char* name;
      SpaceKind kind;
      bool equality;
    };
    const std::vector<Entry> table{
        {"circle-2pi", Circle{2.0 * kPi}, true},
        {"circle-1", Circle{1.0}, true},
        {"circle-5", Circle{5.0}, true},
        {"sphere-2", Sphere{2}, true},
        {"sphere-3", Sphere{3}, true},
        {"sphere-5", Sphere{5}, true},
        {"rectangle-1x1", Rectangle{1.0, 1.0}, false},
        {"rectangle-1x2", Rectangle{1.0, 2.0}, false},
        {"rectangle-0.5x3", Rectangle{0.5, 3.0}, false},
        {"flat-1", FlatInterval{1.0}, true},
        {"flat-pi", FlatInterval{kPi}, true},
        {"flat-4", FlatInterval{4.0}, true},
        {"cos2-full", WeightedInterval{-h, h, 2.0, WeightFamily::Cos}, true},
        {"cos2-sym-1", WeightedInterval{-1.0, 1.0, 2.0, WeightFamily::Cos}, true},
        {"cos4-trim-0.05", WeightedInterval{-h + 0.05, h - 0.05, 4.0, WeightFamily::Cos}, true},
        {"cos2-sym-0.5", WeightedInterval{-0.5, 0.5, 2.0, WeightFamily::Cos}, true},
        {"cos2-asym", WeightedInterval{-h + 0.02, h - 0.7, 2.0, WeightFamily::Cos}, false},
        {"cos1-asym", WeightedInterval{-0.5, 1.2, 1.0, WeightFamily::Cos}, false},
        {"cosh2-sym-1.5", WeightedInterval{-1.5, 1.5, 2.0, WeightFamily::Cosh}, true},
        {"cosh1-asym", WeightedInterval{-0.4, 1.6, 1.0, WeightFamily::Cosh}, false},
    };
    std::vector<ModelSpace> out;
    out.reserve(table.size());
    for (const auto& e : table) out.push_back(make_space(e.name, e.kind, e.equality));
    return out;
  }();
  return catalog;
}

std::vector<ModelSpace> filter_catalog(const std::string& filter) {
  const auto& all = builtin_catalog();
  if (filter.empty() || filter == "all") return all;
  std::vector<ModelSpace> out;
  if (filter == "none") return out;
  if (filter == "equality") {
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [](const ModelSpace& s) { return s.equality_case; });
    return out;
  }
  std::vector<std::string> needles;
  std::stringstream ss(filter);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) needles.push_back(tok);
  }
  for (const auto& s : all) {
    for (const auto& n : needles) {
      if (s.name.find(n) != std::string::npos) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

EigenPair first_neumann_eigenpair(const WeightedInterval& space, std::size_t n) {
  space.validate();
  if (n < 64) throw PreconditionError("first_neumann_eigenpair needs n >= 64");
  const auto weight = [&space](double x) { return space.weight(x); };
  const double scale = std::max(1.0, kPi * kPi / std::pow(space.diameter(), 2));
  const auto fine = assemble_neumann(weight, space.x0, space.x1, n);
  const auto coarse = assemble_neumann(weight, space.x0, space.x1, n / 2);
  EigenPair out;
  out.lambda1 = eigenvalue_k(fine, 1, 1e-14 * scale);
  const double lc = eigenvalue_k(coarse, 1, 1e-14 * scale);
  out.lambda1_extrapolated = richardson(lc, out.lambda1);
  out.error_estimate = std::abs(out.lambda1 - lc) / 3.0;
  out.h = space.diameter() / static_cast<double>(n);
  out.x = cell_centers(space.x0, space.x1, n);
  out.f = eigenvector_k(fine, 1, out.lambda1);
  return out;
}

BoundReport verify_bound(const ModelSpace& space, double tol, std::size_t n) {
  BoundReport r;
  r.space = space.name;
  r.K = space.declared_K;
  r.N = space.declared_N;
  r.diameter = space.diameter;
  if (space.lambda1) {
    r.lambda1 = *space.lambda1;
  } else {
    const auto& w = std::get<WeightedInterval>(space.kind);
    const auto eig = first_neumann_eigenpair(w, n);
    const auto half = first_neumann_eigenpair(w, n / 2);
    r.lambda1 = eig.lambda1_extrapolated;
    // Spread of two successive extrapolations bounds what is left after
    // the h^2 term is removed.
    r.lambda1_error = std::abs(eig.lambda1_extrapolated - half.lambda1_extrapolated) + 1e-12 * r.lambda1;
  }
  const CurvatureDimension cd(r.K, r.N);
  r.lambda_hat = hat_lambda(cd, r.diameter, std::min(1e-9, tol * 1e-2)).lambda;
  r.margin = r.lambda1 - r.lambda_hat;
  r.pass = r.margin >= -(tol + r.lambda1_error);
  return r;
}

double s_kappa(double kappa, double theta) {
  if (!(theta >= 0.0)) throw PreconditionError("s_kappa needs theta >= 0");
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::sin(s * theta) / s;
  }
  if (kappa < 0.0) {
    const double s = std::sqrt(-kappa);
    return std::sinh(s * theta) / s;
  }
  return theta;
}

double bg_ratio_lower_bound(const CurvatureDimension& cd, double r, double R) {
  if (!(cd.N() > 1.0)) throw PreconditionError("Bishop–Gromov ratio needs N > 1");
  if (!(r > 0.0 && r < R)) throw PreconditionError("Bishop–Gromov ratio needs 0 < r < R");
  if (const auto dm = d_max(cd); dm && R > *dm * (1.0 + 1e-12)) {
    throw PreconditionError("Bishop–Gromov ratio needs R <= pi sqrt((N-1)/K)");
  }
  const double kappa = cd.K() / (cd.N() - 1.0);
  const double p = cd.N() - 1.0;
  auto f = [kappa, p](double t) { return std::pow(std::max(0.0, s_kappa(kappa, t)), p); };
  using boost::math::quadrature::gauss_kronrod;
  // Split at r so both integrals share the inner piece.
  const double inner = gauss_kronrod<double, 31>::integrate(f, 0.0, r, 15, 1e-11);
  const double outer = gauss_kronrod<double, 31>::integrate(f, r, R, 15, 1e-11);
  return inner / (inner + outer);
}

}  // namespace spectralgap
