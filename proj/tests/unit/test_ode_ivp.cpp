#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spectralgap/errors.hpp"
#include "spectralgap/models.hpp"
#include "spectralgap/ode_ivp.hpp"
#include "oracles.hpp"

using namespace spectralgap;
using std::numbers::pi;

namespace {
const Coefficient zero = [](double) { return 0.0; };
}

TEST_CASE("config validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  c.rel_tol = 0.1;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("closed-form flat solutions") {
  const auto t = integrate_eigen_ode(zero, 1.0, 0.0, 1.0, 0.0, pi);
  CHECK(t.back().v == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(t.back().dv) < 1e-9);
  CHECK(t.status == TerminalStatus::ReachedEndpoint);

  const auto lin = integrate_eigen_ode(zero, 0.0, 0.0, 3.0, 2.0, 1.0);
  CHECK(lin.back().v == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(lin.back().dv == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("sin x through the K=2, N=3 model from its singular end") {
  const OneSidedModel m(2, 3);
  const auto e = m.left_endpoint();
  IntegratorConfig cfg;
  const double h0 = frobenius_offset(e, 3.0, pi, cfg.abs_tol);
  const auto [v0, dv0] = frobenius_start(e, 3.0, -1.0, h0);
  const auto t = integrate_eigen_ode([&](double s) { return m.drift(s); }, 3.0, -pi / 2 + h0, v0, dv0, 0.0, cfg);
  CHECK(std::abs(t.back().v) < 1e-8);
  CHECK(t.back().dv == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("conserved energy for drift 0") {
  IntegratorConfig cfg;
  const double lambda = 7.0;
  const auto t = integrate_eigen_ode(zero, lambda, 0.0, 0.3, 1.1, 10.0, cfg);
  const double e0 = 0.3 * 0.3 + 1.1 * 1.1 / lambda;
  for (const auto& s : t.samples) {
    CHECK(std::abs(s.v * s.v + s.dv * s.dv / lambda - e0) / e0 <= 10 * cfg.rel_tol);
  }
}

TEST_CASE("tighter tolerance does not worsen the error") {
  double prev = 1.0;
  for (double rt : {1e-6, 1e-8, 1e-10, 1e-12}) {
    IntegratorConfig cfg;
    cfg.rel_tol = rt;
    cfg.abs_tol = rt * 1e-2;
    const auto t = integrate_eigen_ode(zero, 1.0, 0.0, 1.0, 0.0, pi, cfg);
    const double err = std::abs(t.back().v + 1.0);
    CHECK(err <= prev * 1.0001);
    prev = err;
  }
}

TEST_CASE("reversal returns to the start") {
  IntegratorConfig cfg;
  const Coefficient drift = [](double x) { return std::sin(x); };
  const auto fwd = integrate_eigen_ode(drift, 2.0, 0.0, 1.0, -0.5, 3.0, cfg);
  const auto back = integrate_eigen_ode(drift, 2.0, 3.0, fwd.back().v, fwd.back().dv, 0.0, cfg);
  CHECK(back.back().v == doctest::Approx(1.0).epsilon(100 * cfg.rel_tol));
  CHECK(back.back().dv == doctest::Approx(-0.5).epsilon(100 * cfg.rel_tol));
}

TEST_CASE("dense output matches the closed form between steps") {
  const auto t = integrate_eigen_ode(zero, 4.0, 0.0, 1.0, 0.0, 3.0);
  for (double x = 0.05; x < 3.0; x += 0.137) {
    CHECK(t.at(x).v == doctest::Approx(std::cos(2 * x)).scale(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(static_cast<void>(t.at(3.5)), DomainError);
}

TEST_CASE("first critical point") {
  SUBCASE("flat") {
    const auto c = first_critical_point(zero, 4.0, 0.0, -1.0, 0.0, 10.0);
    CHECK(c.b == doctest::Approx(pi / 2).epsilon(1e-11));
    CHECK(c.v_b == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("power family l = 3") {
    const OneSidedModel m(0, 3);
    const auto e = m.left_endpoint();
    const double h0 = frobenius_offset(e, 1.0, pi, 1e-14);
    const auto [v0, dv0] = frobenius_start(e, 1.0, -1.0, h0);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    const auto c = first_critical_point([&](double s) { return m.drift(s); }, 1.0, h0, v0, dv0, 20.0, cfg);
    CHECK(c.b == doctest::Approx(oracle::tan_root).epsilon(1e-10));
    CHECK(c.v_b == doctest::Approx(oracle::power_m).epsilon(1e-10));
  }
  SUBCASE("no critical point") {
    CHECK_THROWS_AS(first_critical_point(zero, 1.0, 0.0, -1.0, 0.0, 1.0), NumericalError);
  }
}

TEST_CASE("weighted flux identity along a one-sided trajectory") {
  const OneSidedModel m(0, 4);
  const auto e = m.left_endpoint();
  const double lambda = 2.0;
  const double h0 = frobenius_offset(e, lambda, 3.0, 1e-14);
  const auto [v0, dv0] = frobenius_start(e, lambda, -1.0, h0);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const Coefficient w = [&](double s) { return one_sided_density(m, s); };
  const auto t = integrate_eigen_ode([&](double s) { return m.drift(s); }, lambda, h0, v0, dv0, 6.0, cfg);
  const auto I = cumulative_weighted_integral(t, w, 0.0, -1.0);
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    CHECK(std::abs(lambda * I[i] + w(t.samples[i].x) * t.samples[i].dv) < 1e-6);
  }
}
