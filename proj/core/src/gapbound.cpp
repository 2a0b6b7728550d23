#include "spectralgap/gapbound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "spectralgap/errors.hpp"
#include "spectralgap/tridiag_eigen.hpp"

namespace spectralgap {

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorConfig shooting_config(double tol) {
  IntegratorConfig cfg;
  cfg.rel_tol = std::clamp(tol * 1e-2, 1e-13, 1e-10);
  cfg.abs_tol = cfg.rel_tol * 1e-2;
  return cfg;
}

enum class Branch { Below, Upper, Far };

Branch classify(const MissValue& m) {
  if (m.D < 0.0 && m.interior_sign_changes <= 1) return Branch::Below;
  if (m.D > 0.0 && m.interior_sign_changes >= 1 && m.interior_sign_changes <= 2) return Branch::Upper;
  if (m.D == 0.0 && m.interior_sign_changes == 1) return Branch::Upper;
  return Branch::Far;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Shooting: return "shooting";
    case Method::Discretization: return "discretization";
    case Method::ClosedForm: return "closed-form";
    case Method::Both: return "both";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "shooting") return Method::Shooting;
  if (name == "discretization") return Method::Discretization;
  if (name == "closed-form") return Method::ClosedForm;
  if (name == "both") return Method::Both;
  throw PreconditionError("unknown method '" + name + "'");
}

MissValue miss_function(const SymmetricModel& model, double lambda, const IntegratorConfig& config) {
  if (!(lambda > 0.0)) throw PreconditionError("miss_function needs lambda > 0");
  const Coefficient drift = [&model](double x) { return model.drift(x); };
  double x_start = model.left();
  double x_end = model.right();
  double v = 1.0, dv = 0.0;
  double h0 = 0.0;
  const bool singular = model.endpoint_kind() == EndpointKind::Singular;
  if (singular) {
    const auto left = model.singular_endpoint(Side::Left);
    h0 = frobenius_offset(left, lambda, model.d(), config.abs_tol);
    std::tie(v, dv) = frobenius_start(left, lambda, 1.0, h0);
    x_start += h0;
    x_end -= h0;
  }
  const auto traj = integrate_eigen_ode(drift, lambda, x_start, v, dv, x_end, config);
  const auto& end = traj.back();
  MissValue out;
  out.interior_sign_changes = traj.sign_changes();
  out.ode_steps = traj.accepted_steps;
  if (singular) {
    const auto right = model.singular_endpoint(Side::Right);
    out.D = model.weight(end.x) * (end.dv - frobenius_regular_slope(right, lambda, end.v, h0));
  } else {
    out.D = model.weight(end.x) * end.dv;
  }
  return out;
}

SpectralResult shoot_hat_lambda(const SymmetricModel& model, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const auto cfg = shooting_config(tol);
  const double d = model.d();
  const double flat = kPi * kPi / (d * d);
  double seed = flat;
  if (model.cd().K() > 0.0 && model.cd().N() > 1.0) seed = std::min(seed, lichnerowicz(model.cd()));
  seed *= 0.5;

  SpectralResult result;
  result.method = Method::Shooting;
  auto& diag = result.diagnostics;
  auto eval = [&](double lam) {
    ++diag.scan_evaluations;
    const auto m = miss_function(model, lam, cfg);
    diag.ode_steps += m.ode_steps;
    return classify(m);
  };

  const double floor = 1e-14 * flat;
  const double ceiling = 1e6 * flat;
  double lo = seed;
  double hi = 0.0;
  double far = 0.0;
  // Walk down until the shot is clearly below the first eigenvalue.
  for (Branch b = eval(lo); b != Branch::Below; b = eval(lo)) {
    if (b == Branch::Upper) hi = lo;
    else far = lo;
    lo *= 0.5;
    if (lo < floor) throw NumericalError("lambda_hat bracket scan exhausted below");
  }
  // Walk up geometrically; fall back to bisection after overshooting.
  if (hi == 0.0) {
    double lam = lo;
    while (true) {
      const double next = far > 0.0 ? 0.5 * (lo + far) : lam * 1.5;
      if (next > ceiling) throw NumericalError("lambda_hat bracket scan exhausted (> 1e6 pi^2/d^2)");
      const Branch b = eval(next);
      if (b == Branch::Below) {
        lo = next;
        lam = next;
      } else if (b == Branch::Upper) {
        hi = next;
        break;
      } else {
        far = next;
      }
      if (diag.scan_evaluations > 400) throw NumericalError("lambda_hat bracket scan did not converge");
    }
  }
  diag.bracket_lo = lo;
  diag.bracket_hi = hi;

  auto D = [&](double lam) {
    const auto m = miss_function(model, lam, cfg);
    diag.ode_steps += m.ode_steps;
    return m.D;
  };
  const double f_lo = D(lo);
  const double f_hi = D(hi);
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(D, lo, hi, f_lo, f_hi, stop, max_iter);
  diag.root_iterations = static_cast<int>(max_iter);
  result.lambda = 0.5 * (a + b);
  result.achieved_tol = std::abs(b - a);
  if (result.achieved_tol > tol) throw NumericalError("root refinement did not reach tolerance");
  return result;
}

SpectralResult discretize_hat_lambda(const SymmetricModel& model, const std::vector<std::size_t>& grids) {
  if (grids.size() < 2) throw PreconditionError("discretization needs at least two grids");
  for (std::size_t i = 1; i < grids.size(); ++i) {
    if (grids[i] != 2 * grids[i - 1]) throw PreconditionError("discretization grids must double");
  }
  SpectralResult result;
  result.method = Method::Discretization;
  auto& diag = result.diagnostics;
  const auto weight = [&model](double x) { return model.weight(x); };
  for (std::size_t n : grids) {
    const auto pencil = assemble_neumann(weight, model.left(), model.right(), n);
    const double lam = eigenvalue_k(pencil, 1, 1e-14 * std::max(1.0, kPi * kPi / (model.d() * model.d())));
    diag.grid_sizes.push_back(n);
    diag.grid_values.push_back(lam);
  }
  const auto& g = diag.grid_values;
  const std::size_t m = g.size();
  result.lambda = richardson(g[m - 2], g[m - 1]);
  if (m >= 3) {
    const double prev = richardson(g[m - 3], g[m - 2]);
    result.achieved_tol = std::abs(result.lambda - prev);
    const double num = g[m - 3] - g[m - 2];
    const double den = g[m - 2] - g[m - 1];
    diag.observed_order = (num != 0.0 && den != 0.0 && num / den > 0.0) ? std::log2(num / den) : 0.0;
  } else {
    result.achieved_tol = std::abs(g[m - 1] - g[m - 2]) / 3.0;
    diag.observed_order = 2.0;
  }
  diag.order_warning = diag.observed_order < 1.7 || diag.observed_order > 2.3;
  return result;
}

SpectralResult hat_lambda(const CurvatureDimension& cd, double d, double tol, Method method) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const SymmetricModel model(cd, d);
  if (cd.drift_free()) {
    SpectralResult r;
    r.lambda = kPi * kPi / (model.d() * model.d());
    r.method = Method::ClosedForm;
    r.achieved_tol = 0.0;
    return r;
  }
  switch (method) {
    case Method::ClosedForm:
      throw PreconditionError("closed form only exists for K = 0 or N = 1");
    case Method::Shooting:
      return shoot_hat_lambda(model, tol);
    case Method::Discretization: {
      auto r = discretize_hat_lambda(model);
      if (r.achieved_tol > tol) {
        std::ostringstream os;
        os.precision(3);
        os << "discretization error estimate " << r.achieved_tol << " exceeds tol " << tol;
        throw NumericalError(os.str());
      }
      return r;
    }
    case Method::Both: {
      auto shot = shoot_hat_lambda(model, tol);
      const auto disc = discretize_hat_lambda(model);
      const double gap = std::abs(shot.lambda - disc.lambda);
      shot.diagnostics.shooting_value = shot.lambda;
      shot.diagnostics.discretization_value = disc.lambda;
      shot.diagnostics.agreement = gap;
      shot.diagnostics.grid_sizes = disc.diagnostics.grid_sizes;
      shot.diagnostics.grid_values = disc.diagnostics.grid_values;
      shot.diagnostics.observed_order = disc.diagnostics.observed_order;
      shot.diagnostics.order_warning = disc.diagnostics.order_warning;
      if (gap > 10.0 * tol) {
        std::ostringstream os;
        os.precision(17);
        os << "shooting " << shot.lambda << " and discretization " << disc.lambda << " disagree by " << gap;
        throw NumericalError(os.str());
      }
      return shot;
    }
  }
  throw PreconditionError("unknown method");
}

double lichnerowicz(const CurvatureDimension& cd) {
  if (!(cd.K() > 0.0 && cd.N() > 1.0)) throw PreconditionError("Lichnerowicz value needs K > 0 and N > 1");
  return cd.N() * cd.K() / (cd.N() - 1.0);
}

double remark_bound(double N, double d) {
  if (!(N > 1.0) || !(d > 0.0) || d > kPi) throw PreconditionError("N/(1 - cos^N(d/2)) needs N > 1 and 0 < d <= pi");
  return N / (1.0 - std::pow(std::cos(0.5 * d), N));
}

}  // namespace spectralgap
