#include "spectralgap/modelfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include "spectralgap/errors.hpp"
#include "spectralgap/tridiag_eigen.hpp"

namespace spectralgap {

namespace {

constexpr double kPi = std::numbers::pi;

// Largest |rho v'| along the trajectory; the scale for flux residuals.
double flux_scale(const Trajectory& traj, const Coefficient& weight) {
  double s = 0.0;
  for (const auto& smp : traj.samples) s = std::max(s, std::abs(weight(smp.x) * smp.dv));
  return s;
}

// Second derivative at a singular end where v' = 0: v'' = -lambda v/(p+1).
double singular_curvature(double lambda, double p, double v) { return -lambda * v / (p + 1.0); }

}  // namespace

IntegratorConfig profile_config() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  return cfg;
}

ModelProfile model_profile(double R, double l, double lambda, const IntegratorConfig& config) {
  config.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("model_profile needs lambda > 0");
  ModelProfile out;
  out.model = OneSidedModel(R, l);
  out.lambda = lambda;
  const auto& model = out.model;
  out.a = model.a();
  const auto left = model.left_endpoint();
  const double p = left.exponent;
  const double wavelength = kPi / std::sqrt(lambda);
  const bool trig = model.family() == OneSidedFamily::Trig;
  const double length = trig ? model.right_end() - out.a : wavelength;

  const double h0 = frobenius_offset(left, lambda, length, config.abs_tol);
  const auto [v0, dv0] = frobenius_start(left, lambda, -1.0, h0);
  const Coefficient drift = [&model](double s) { return model.drift(s); };
  const Coefficient weight = [&model](double s) { return one_sided_density(model, s); };

  double h1 = 0.0;
  double x_limit = out.a + 64.0 * wavelength;
  if (trig) {
    // Stop well before the right end: integration error picks up the
    // singular solution, which grows like t^{1-p} towards it.
    h1 = frobenius_offset(model.right_endpoint(), lambda, length, config.abs_tol, 0.05);
    x_limit = model.right_end() - h1;
  }
  auto traj = integrate_to_critical_point(drift, lambda, out.a + h0, v0, dv0, x_limit, config);
  traj.samples.insert(traj.samples.begin(), Sample{out.a, -1.0, 0.0, singular_curvature(lambda, p, -1.0)});

  if (traj.status == TerminalStatus::EventFired) {
    out.b = traj.back().x;
    out.m = traj.back().v;
  } else if (trig) {
    // No zero of v' inside: b can only be the right end, and only if v is
    // the regular solution there. Split v = A r + B s with r the series
    // solution and s ~ t^{1-p} (log t for p = 1) the singular one.
    const auto right = model.right_endpoint();
    const auto& end = traj.back();
    const double t = h1;
    const auto [r, dr] = frobenius_start(right, lambda, 1.0, t);
    const double pr = right.exponent;
    const double s = pr == 1.0 ? std::log(t) : std::pow(t, 1.0 - pr);
    const double ds = pr == 1.0 ? -1.0 / t : (pr - 1.0) * std::pow(t, -pr);
    const double W = r * ds - dr * s;
    const double A = (end.v * ds - end.dv * s) / W;
    const double B = (r * end.dv - dr * end.v) / W;
    // Singular share of the flux at the end point, relative to the largest flux.
    const double D = weight(end.x) * B * ds;
    const double threshold = std::max(1e-9, 1e3 * config.rel_tol) * flux_scale(traj, weight);
    if (!(std::abs(D) <= threshold)) {
      throw NumericalError("model_profile: v' has no zero before the singular end (lambda = " +
                           std::to_string(lambda) + " below the threshold " + std::to_string(l) + ")");
    }
    out.b = model.right_end();
    out.m = A;
    out.b_at_singular_end = true;
    traj.samples.push_back(Sample{out.b, out.m, 0.0, singular_curvature(lambda, p, out.m)});
  } else {
    throw NumericalError("model_profile: no critical point within 64 half-wavelengths");
  }
  for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
    if (traj.samples[i].dv < 0.0) throw NumericalError("model_profile: v not increasing before b");
  }
  out.trajectory = std::move(traj);
  return out;
}

double m_value(double R, double l, double lambda, const IntegratorConfig& config) {
  return model_profile(R, l, lambda, config).m;
}

double weighted_flux_residual(const ModelProfile& profile) {
  const auto& model = profile.model;
  const Coefficient weight = [&model](double s) { return one_sided_density(model, s); };
  const auto& samples = profile.trajectory.samples;
  const auto integral = cumulative_weighted_integral(profile.trajectory, weight, profile.a, -1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = profile.lambda * integral[i] + weight(samples[i].x) * samples[i].dv;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

const char* to_string(FamilyBranch branch) {
  switch (branch) {
    case FamilyBranch::Trig: return "trig";
    case FamilyBranch::Flat: return "flat";
    case FamilyBranch::Power: return "power";
    case FamilyBranch::Sinh: return "sinh";
    case FamilyBranch::Cosh: return "cosh";
  }
  return "unknown";
}

double TranslatedModel::drift(double s) const {
  switch (branch) {
    case FamilyBranch::Trig: {
      const double r = std::sqrt(L);
      return p * r * std::tan(r * s);
    }
    case FamilyBranch::Flat: return 0.0;
    case FamilyBranch::Power: return -p / s;
    case FamilyBranch::Sinh: {
      const double r = std::sqrt(-L);
      return -p * r / std::tanh(r * s);
    }
    case FamilyBranch::Cosh: {
      const double r = std::sqrt(-L);
      return -p * r * std::tanh(r * s);
    }
  }
  return 0.0;
}

double TranslatedModel::weight(double s) const {
  switch (branch) {
    case FamilyBranch::Trig: return std::pow(std::max(0.0, std::cos(std::sqrt(L) * s)), p);
    case FamilyBranch::Flat: return 1.0;
    case FamilyBranch::Power: return std::pow(std::max(0.0, s), p);
    case FamilyBranch::Sinh: return std::pow(std::max(0.0, std::sinh(std::sqrt(-L) * s)), p);
    case FamilyBranch::Cosh: return std::pow(std::cosh(std::sqrt(-L) * s), p);
  }
  return 1.0;
}

namespace {

// Critical: v' vanished at b. Escaped: v' kept its sign up to the end of
// the family's domain; a critical point can only be lost through that end,
// so the sign of v(end) - max_f still orients a bracket.
enum class ShotKind { Failed, Critical, Escaped };

struct Shot {
  ShotKind kind = ShotKind::Failed;
  double a = 0.0;
  double g = 0.0;  // v(b) - max_f, or v(end) - max_f when escaped
  double b = 0.0;
  double vb = 0.0;
  Trajectory traj;
};

struct MatchProblem {
  double R;
  double N;
  double lambda;
  double max_f;
  IntegratorConfig config;
};

// Start at the family's own singular point: the one-sided profile.
Shot shoot_singular(const MatchProblem& pb) {
  Shot s;
  try {
    auto prof = model_profile(pb.R, pb.N, pb.lambda, pb.config);
    s.kind = ShotKind::Critical;
    s.a = prof.a;
    s.b = prof.b;
    s.vb = prof.m;
    s.g = prof.m - pb.max_f;
    s.traj = std::move(prof.trajectory);
  } catch (const NumericalError&) {
  }
  return s;
}

Shot shoot_regular(const MatchProblem& pb, const TranslatedModel& fam, double a) {
  Shot s;
  s.a = a;
  const Coefficient drift = [&fam](double x) { return fam.drift(x); };
  double limit = a + 64.0 * kPi / std::sqrt(pb.lambda);
  if (fam.branch == FamilyBranch::Trig) {
    const double end = 0.5 * kPi / std::sqrt(fam.L);
    limit = end - 1e-7 * end;
  }
  try {
    auto traj = integrate_to_critical_point(drift, pb.lambda, a, -1.0, 0.0, limit, pb.config);
    if (traj.status != TerminalStatus::EventFired) {
      s.kind = ShotKind::Escaped;
      s.g = traj.back().v - pb.max_f;
      return s;
    }
    s.kind = ShotKind::Critical;
    s.b = traj.back().x;
    s.vb = traj.back().v;
    s.g = s.vb - pb.max_f;
    s.traj = std::move(traj);
  } catch (const NumericalError&) {
  }
  return s;
}

struct Path {
  TranslatedModel family;
  std::vector<double> starts;  // ordered toward the symmetric configuration
  bool singular_first = false;  // starts.front() is the family's singular point
};

std::vector<Path> matching_paths(double R, double N, double lambda) {
  const double p = N - 1.0;
  const double L = R / p;
  const double ell = kPi / std::sqrt(lambda);
  std::vector<Path> paths;
  if (R > 0.0) {
    Path path{{FamilyBranch::Trig, L, p}, {}, true};
    const double a_sing = -0.5 * kPi / std::sqrt(L);
    constexpr int kSteps = 48;
    for (int k = 0; k < kSteps; ++k) path.starts.push_back(a_sing * (1.0 - static_cast<double>(k) / kSteps));
    paths.push_back(std::move(path));
  } else if (R == 0.0) {
    Path path{{FamilyBranch::Power, 0.0, p}, {0.0}, true};
    for (int j = -6; j <= 12; ++j) path.starts.push_back(std::ldexp(ell, j));
    paths.push_back(std::move(path));
  } else {
    Path sinh{{FamilyBranch::Sinh, L, p}, {0.0}, true};
    for (int j = -6; j <= 6; ++j) sinh.starts.push_back(std::ldexp(ell, j));
    paths.push_back(std::move(sinh));
    Path cosh{{FamilyBranch::Cosh, L, p}, {}, false};
    for (int j = 6; j >= -6; --j) cosh.starts.push_back(-std::ldexp(ell, j));
    cosh.starts.push_back(0.0);
    paths.push_back(std::move(cosh));
  }
  return paths;
}

MatchedInterval finish(const TranslatedModel& fam, double lambda, Shot shot) {
  if (shot.traj.sign_changes() != 1) {
    throw NumericalError("match_interval: matched eigenfunction does not have exactly one zero");
  }
  MatchedInterval out;
  out.family = fam;
  out.a = shot.traj.front().x;
  out.b = shot.b;
  out.lambda = lambda;
  out.max_v = shot.vb;
  out.trajectory = std::move(shot.traj);
  return out;
}

}  // namespace

MatchedInterval match_interval(double R, double N, double lambda1, double max_f,
                               const IntegratorConfig& config, double value_tol) {
  config.validate();
  if (!(N > 1.0) || !std::isfinite(N) || !std::isfinite(R)) throw PreconditionError("match_interval needs N > 1");
  if (!(max_f > 0.0 && max_f <= 1.0)) throw PreconditionError("match_interval needs max_f in (0, 1]");
  const double threshold = std::max(0.0, N * R / (N - 1.0));
  if (!(lambda1 > 0.0) || lambda1 < threshold * (1.0 - 1e-14)) {
    throw PreconditionError("match_interval needs lambda1 > max{0, NR/(N-1)} = " + std::to_string(threshold));
  }
  const MatchProblem pb{R, N, lambda1, max_f, config};

  if (R == 0.0 && max_f >= 1.0 - value_tol) {
    // Flat symmetric case: cosine eigenfunction on an interval of length d.
    const TranslatedModel flat{FamilyBranch::Flat, 0.0, N - 1.0};
    const double d = kPi / std::sqrt(lambda1);
    Shot s = shoot_regular(pb, flat, -0.5 * d);
    if (s.kind != ShotKind::Critical) throw NumericalError("match_interval: flat shot failed");
    return finish(flat, lambda1, std::move(s));
  }

  // Candidates in path order; the last one is nearest the symmetric end.
  struct Candidate {
    std::size_t path;
    Shot lo;
    Shot hi;
    bool exact;
  };
  std::vector<Candidate> candidates;
  const auto paths = matching_paths(R, N, lambda1);
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& path = paths[pi];
    Shot prev;
    for (std::size_t k = 0; k < path.starts.size(); ++k) {
      Shot cur = (k == 0 && path.singular_first) ? shoot_singular(pb) : shoot_regular(pb, path.family, path.starts[k]);
      if (cur.kind == ShotKind::Failed) {
        prev = Shot{};
        continue;
      }
      if (cur.kind == ShotKind::Critical && std::abs(cur.g) <= value_tol) {
        candidates.push_back({pi, cur, cur, true});
      } else if (prev.kind != ShotKind::Failed && !(prev.kind == ShotKind::Critical && std::abs(prev.g) <= value_tol) &&
                 (prev.g < 0.0) != (cur.g < 0.0)) {
        candidates.push_back({pi, prev, cur, false});
      }
      prev = std::move(cur);
    }
  }
  if (candidates.empty()) {
    throw NumericalError("match_interval: max_f = " + std::to_string(max_f) +
                         " is not attained in the model family at lambda1 = " + std::to_string(lambda1));
  }
  auto& c = candidates.back();
  const auto& fam = paths[c.path].family;
  if (c.exact) return finish(fam, lambda1, std::move(c.lo));

  Shot lo = std::move(c.lo);
  Shot hi = std::move(c.hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo.a + hi.a);
    if (std::abs(hi.a - lo.a) <= 1e-14 * std::max(1.0, std::abs(mid))) break;
    Shot s = shoot_regular(pb, fam, mid);
    if (s.kind == ShotKind::Failed) throw NumericalError("match_interval: shot failed inside a bracket");
    if (s.kind == ShotKind::Critical && std::abs(s.g) <= value_tol) return finish(fam, lambda1, std::move(s));
    if ((s.g < 0.0) == (lo.g < 0.0)) {
      lo = std::move(s);
    } else {
      hi = std::move(s);
    }
  }
  const bool lo_ok = lo.kind == ShotKind::Critical;
  const bool hi_ok = hi.kind == ShotKind::Critical;
  if (!lo_ok && !hi_ok) throw NumericalError("match_interval: bracket collapsed without a critical point");
  if (lo_ok && (!hi_ok || std::abs(lo.g) <= std::abs(hi.g))) return finish(fam, lambda1, std::move(lo));
  return finish(fam, lambda1, std::move(hi));
}

GradientReport check_gradient_comparison(const EigenPair& eig, const Trajectory& model_v, double tol,
                                         double lambda_tol, double range_slack) {
  if (eig.f.size() < 3) throw PreconditionError("gradient comparison needs at least 3 samples");
  if (model_v.samples.size() < 2) throw PreconditionError("gradient comparison needs a model trajectory");
  GradientReport rep;
  rep.n = eig.f.size();
  rep.lambda_space = eig.lambda1_extrapolated;
  rep.lambda_model = model_v.lambda;
  if (std::abs(rep.lambda_space - rep.lambda_model) > lambda_tol * std::max(1.0, rep.lambda_model)) {
    throw PreconditionError("gradient comparison: space and model eigenvalues differ");
  }

  // phi(y) = v'(v^{-1}(y))^2 on the increasing table; d phi/dy = 2 v''.
  std::vector<double> ys, phis, slopes;
  for (const auto& s : model_v.samples) {
    if (!ys.empty() && !(s.v > ys.back())) continue;
    ys.push_back(s.v);
    phis.push_back(s.dv * s.dv);
    slopes.push_back(2.0 * s.ddv);
  }
  const double vmin = ys.front();
  const double vmax = ys.back();
  const auto [fmin_it, fmax_it] = std::minmax_element(eig.f.begin(), eig.f.end());
  if (*fmin_it < vmin - range_slack || *fmax_it > vmax + range_slack) {
    throw PreconditionError("gradient comparison: range of f not contained in range of v");
  }
  const boost::math::interpolators::cubic_hermite phi(std::move(ys), std::move(phis), std::move(slopes));

  const double inv2h = 0.5 / eig.h;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < eig.f.size(); ++i) {
    const double df = (eig.f[i + 1] - eig.f[i - 1]) * inv2h;
    const double gamma = df * df;
    const double y = std::clamp(eig.f[i], vmin, vmax);
    rep.max_gamma = std::max(rep.max_gamma, gamma);
    rep.max_violation = std::max(rep.max_violation, gamma - phi(y));
  }
  rep.pass = rep.max_violation <= tol * (1.0 + rep.max_gamma);
  return rep;
}

namespace {

// The space's eigenvalue for the model side. Below the Lichnerowicz
// threshold only by discretization error means it is that threshold.
double model_lambda(const EigenPair& eig, double K, double N) {
  double lambda = eig.lambda1_extrapolated;
  if (K > 0.0 && N > 1.0) {
    const double lich = N * K / (N - 1.0);
    if (lambda < lich && lich - lambda <= 10.0 * eig.error_estimate + 1e-9 * lich) lambda = lich;
  }
  return lambda;
}

double max_of(const std::vector<double>& f) { return *std::max_element(f.begin(), f.end()); }

}  // namespace

GradientReport gradient_comparison(const WeightedInterval& space, std::size_t n, double tol,
                                   std::optional<double> N_override) {
  if (N_override && *N_override < space.declared_N()) {
    throw PreconditionError("gradient_comparison: N override must not be below the declared N");
  }
  const auto eig = first_neumann_eigenpair(space, n);
  const auto half = first_neumann_eigenpair(space, n / 2);
  const double K = space.declared_K();
  const double N = N_override.value_or(space.declared_N());
  const double lambda = model_lambda(eig, K, N);
  const double fmax = max_of(eig.f);
  // The discrete maximum is only known up to its own grid error.
  const double value_tol = std::max(1e-10, 2.0 * std::abs(fmax - max_of(half.f)));
  const auto matched = match_interval(K, N, lambda, std::min(1.0, fmax), profile_config(), value_tol);
  const double lambda_tol = 10.0 * eig.error_estimate / std::max(1.0, lambda) + 1e-8;
  return check_gradient_comparison(eig, matched.trajectory, tol, lambda_tol, 2.0 * value_tol + 1e-8);
}

MaxReport check_max_comparison(const WeightedInterval& space, double tol, std::size_t n,
                               std::optional<double> N_override) {
  MaxReport rep;
  rep.K = space.declared_K();
  rep.N = N_override.value_or(space.declared_N());
  if (N_override && *N_override < space.declared_N()) {
    throw PreconditionError("check_max_comparison: N override must not be below the declared N");
  }
  const auto eig = first_neumann_eigenpair(space, n);
  rep.lambda1 = model_lambda(eig, rep.K, rep.N);
  rep.max_f = max_of(eig.f);
  rep.m_KN = m_value(rep.K, rep.N, rep.lambda1);
  rep.pass = rep.max_f >= rep.m_KN - tol;
  return rep;
}

}  // namespace spectralgap
