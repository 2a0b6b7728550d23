#include "spectralgap/ode_ivp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "spectralgap/errors.hpp"

namespace spectralgap {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-2)) throw PreconditionError("rel_tol must lie in (0, 1e-2)");
  if (!(abs_tol > 0.0)) throw PreconditionError("abs_tol must be positive");
  if (!(max_step > 0.0)) throw PreconditionError("max_step must be positive");
  if (max_steps == 0) throw PreconditionError("max_steps must be positive");
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::array<double, 2>;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    out[0] += h * coef * (*k)[0];
    out[1] += h * coef * (*k)[1];
  }
  return out;
}

class Stepper {
 public:
  Stepper(const Coefficient& drift, double lambda) : drift_(drift), lambda_(lambda) {}

  State rhs(double x, const State& y) const { return {y[1], drift_(x) * y[1] - lambda_ * y[0]}; }

  struct Result {
    State y;
    State k7;
    double error;  // scaled RMS norm
  };

  // One DP5 step from (x, y) with FSAL derivative k1.
  Result step(double x, const State& y, const State& k1, double h, const IntegratorConfig& cfg) const {
    const State k2 = rhs(x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y1 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(x + h, y1);
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      sum += (err / scale) * (err / scale);
    }
    return {y1, k7, std::sqrt(0.5 * sum)};
  }

 private:
  const Coefficient& drift_;
  double lambda_;
};

double rms_scaled(const State& v, const State& y, const IntegratorConfig& cfg) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double s = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    sum += (v[i] / s) * (v[i] / s);
  }
  return std::sqrt(0.5 * sum);
}

// Starting step size (Hairer, Nørsett & Wanner, II.4).
double initial_step(const Stepper& st, double x0, const State& y0, const State& f0, double span,
                    const IntegratorConfig& cfg) {
  const double d0 = rms_scaled(y0, y0, cfg);
  const double d1 = rms_scaled(f0, y0, cfg);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, std::abs(span), cfg.max_step});
  const double dir = span > 0 ? 1.0 : -1.0;
  const State y1 = axpy(y0, dir * h0, {{1.0, &f0}});
  const State f1 = st.rhs(x0 + dir * h0, y1);
  State df{f1[0] - f0[0], f1[1] - f0[1]};
  const double d2 = rms_scaled(df, y0, cfg) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, std::abs(span), cfg.max_step});
}

// Quintic Hermite basis on theta in [0,1]; returns (v, dv/dx) at theta.
std::pair<double, double> hermite(const Sample& s0, const Sample& s1, double theta) {
  const double h = s1.x - s0.x;
  const double t = theta, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double G0 = 10 * t3 - 15 * t4 + 6 * t5;
  const double G1 = -4 * t3 + 7 * t4 - 3 * t5;
  const double G2 = 0.5 * (t3 - 2 * t4 + t5);
  const double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double dH2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double dG0 = 30 * t2 - 60 * t3 + 30 * t4;
  const double dG1 = -12 * t2 + 28 * t3 - 15 * t4;
  const double dG2 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double v = H0 * s0.v + h * H1 * s0.dv + h * h * H2 * s0.ddv + G0 * s1.v + h * G1 * s1.dv +
                   h * h * G2 * s1.ddv;
  const double dv = (dH0 * s0.v + h * dH1 * s0.dv + h * h * dH2 * s0.ddv + dG0 * s1.v + h * dG1 * s1.dv +
                     h * h * dG2 * s1.ddv) /
                    h;
  return {v, dv};
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

Trajectory integrate(const Coefficient& drift, double lambda, double x0, double v0, double dv0, double x1,
                     const IntegratorConfig& cfg, bool stop_at_critical_point) {
  cfg.validate();
  if (!std::isfinite(lambda)) throw PreconditionError("lambda must be finite");
  if (!std::isfinite(x0) || !std::isfinite(x1)) throw PreconditionError("integration bounds must be finite");

  const Stepper st(drift, lambda);
  Trajectory traj;
  traj.lambda = lambda;
  State y{v0, dv0};
  State k = st.rhs(x0, y);
  traj.samples.push_back({x0, y[0], y[1], k[1]});
  if (x1 == x0) return traj;

  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = x1 - x0;
  double x = x0;
  double h = dir * initial_step(st, x0, y, k, span, cfg);
  double err_old = 1e-4;
  bool last_rejected = false;
  int reference_sign = sign_of(dv0);

  constexpr double safe = 0.9, beta = 0.04, expo = 0.2 - beta * 0.75;
  constexpr double fac_min = 0.2, fac_max = 10.0;

  while (true) {
    if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
      traj.status = TerminalStatus::StepLimit;
      throw NumericalError("ODE integration exceeded max_steps");
    }
    if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
    bool hits_end = false;
    if (dir * (x + h - x1) >= 0.0 || std::abs(x1 - (x + h)) < 1e-14 * std::abs(span)) {
      h = x1 - x;
      hits_end = true;
    }
    const auto res = st.step(x, y, k, h, cfg);
    if (!std::isfinite(res.error) || !std::isfinite(res.y[0]) || !std::isfinite(res.y[1])) {
      // Treat a non-finite trial as a hard rejection; give up once the step underflows.
      ++traj.rejected_steps;
      h *= 0.25;
      if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x))) throw NumericalError("non-finite state in ODE integration");
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(res.error, expo);
    if (res.error <= 1.0) {
      ++traj.accepted_steps;
      const Sample prev = traj.samples.back();
      x = hits_end ? x1 : x + h;
      y = res.y;
      k = res.k7;
      traj.samples.push_back({x, y[0], y[1], k[1]});

      if (stop_at_critical_point) {
        if (reference_sign == 0) reference_sign = sign_of(y[1]);
        else if (sign_of(y[1]) != reference_sign) {
          // Bisection on the dense output of v' over the last step.
          const Sample cur = traj.samples.back();
          double lo = 0.0, hi = 1.0;
          const double width = std::abs(cur.x - prev.x);
          while ((hi - lo) * width > 1e-12 && hi - lo > 1e-16) {
            const double mid = 0.5 * (lo + hi);
            const double dv = hermite(prev, cur, mid).second;
            if (sign_of(dv) == reference_sign) lo = mid;
            else hi = mid;
          }
          const double theta = 0.5 * (lo + hi);
          const double xb = prev.x + theta * (cur.x - prev.x);
          // Re-step from the previous sample to the located point.
          const State yp{prev.v, prev.dv};
          const State kp = st.rhs(prev.x, yp);
          const auto polish = st.step(prev.x, yp, kp, xb - prev.x, cfg);
          traj.samples.back() = {xb, polish.y[0], polish.y[1], polish.k7[1]};
          traj.status = TerminalStatus::EventFired;
          return traj;
        }
      }
      if (hits_end) {
        traj.status = TerminalStatus::ReachedEndpoint;
        return traj;
      }
      double fac = fac11 / std::pow(err_old, beta);
      fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
      double h_new = h / fac;
      if (last_rejected) h_new = dir * std::min(std::abs(h_new), std::abs(h));
      err_old = std::max(res.error, 1e-4);
      h = h_new;
      last_rejected = false;
    } else {
      ++traj.rejected_steps;
      h /= std::min(1.0 / fac_min, fac11 / safe);
      last_rejected = true;
    }
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x))) throw NumericalError("ODE step size underflow");
  }
}

}  // namespace

Sample Trajectory::at(double x) const {
  if (samples.empty()) throw DomainError("empty trajectory");
  const bool increasing = samples.back().x >= samples.front().x;
  const double lo = increasing ? samples.front().x : samples.back().x;
  const double hi = increasing ? samples.back().x : samples.front().x;
  if (x < lo || x > hi) throw DomainError("dense output requested outside trajectory");
  if (samples.size() == 1) return samples.front();
  auto it = increasing
                ? std::lower_bound(samples.begin(), samples.end(), x,
                                   [](const Sample& s, double value) { return s.x < value; })
                : std::lower_bound(samples.begin(), samples.end(), x,
                                   [](const Sample& s, double value) { return s.x > value; });
  if (it == samples.begin()) return samples.front();
  if (it == samples.end()) return samples.back();
  const Sample& s1 = *it;
  const Sample& s0 = *(it - 1);
  if (x == s1.x) return s1;
  const double theta = (x - s0.x) / (s1.x - s0.x);
  const auto [v, dv] = hermite(s0, s1, theta);
  // ddv interpolated linearly; it only seeds subsequent Hermite segments.
  return {x, v, dv, s0.ddv + theta * (s1.ddv - s0.ddv)};
}

std::size_t Trajectory::sign_changes() const {
  std::size_t count = 0;
  int last = 0;
  for (const auto& s : samples) {
    const int sg = sign_of(s.v);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

Trajectory integrate_eigen_ode(const Coefficient& drift, double lambda, double x0, double v0, double dv0,
                               double x1, const IntegratorConfig& config) {
  return integrate(drift, lambda, x0, v0, dv0, x1, config, false);
}

Trajectory integrate_to_critical_point(const Coefficient& drift, double lambda, double x0, double v0,
                                       double dv0, double x1, const IntegratorConfig& config) {
  return integrate(drift, lambda, x0, v0, dv0, x1, config, true);
}

CriticalPoint first_critical_point(const Coefficient& drift, double lambda, double x0, double v0, double dv0,
                                   double x_limit, const IntegratorConfig& config) {
  auto traj = integrate(drift, lambda, x0, v0, dv0, x_limit, config, true);
  if (traj.status != TerminalStatus::EventFired) {
    throw NumericalError("no critical point of v before the domain end (lambda too small for this model)");
  }
  const double b = traj.back().x;
  const double vb = traj.back().v;
  return {b, vb, std::move(traj)};
}

std::vector<double> cumulative_weighted_integral(const Trajectory& trajectory, const Coefficient& weight,
                                                 double lower, double v_lower) {
  const auto& s = trajectory.samples;
  std::vector<double> out(s.size(), 0.0);
  if (s.empty()) return out;

  // Gap between the true lower end and the first sample.
  double acc = 0.0;
  const double gap = s.front().x - lower;
  if (gap != 0.0) {
    static constexpr std::array<double, 4> node{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                                0.8611363115940526};
    static constexpr std::array<double, 4> wt{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                              0.3478548451374538};
    for (int i = 0; i < 4; ++i) {
      const double u = 0.5 * (node[i] + 1.0);
      const double xq = lower + u * gap;
      acc += 0.5 * gap * wt[i] * weight(xq) * (v_lower + u * (s.front().v - v_lower));
    }
  }
  out[0] = acc;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double h = s[i].x - s[i - 1].x;
    const double xm = s[i - 1].x + 0.5 * h;
    const double vm = hermite(s[i - 1], s[i], 0.5).first;
    acc += h / 6.0 * (weight(s[i - 1].x) * s[i - 1].v + 4.0 * weight(xm) * vm + weight(s[i].x) * s[i].v);
    out[i] = acc;
  }
  return out;
}

}  // namespace spectralgap
