#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spectralgap/errors.hpp"
#include "spectralgap/gapbound.hpp"
#include "spectralgap/spaces.hpp"
#include "oracles.hpp"

using namespace spectralgap;
using std::numbers::pi;

TEST_CASE("declared data of the closed-form spaces") {
  const auto c = make_space("c", Circle{2 * pi});
  CHECK(c.diameter == doctest::Approx(pi));
  CHECK(*c.lambda1 == doctest::Approx(1.0));
  const auto s = make_space("s", Sphere{3});
  CHECK(s.declared_K == 2.0);
  CHECK(s.declared_N == 3.0);
  CHECK(*s.lambda1 == 3.0);
  const auto r = make_space("r", Rectangle{1, 2});
  CHECK(r.diameter == doctest::Approx(std::sqrt(5.0)));
  CHECK(*r.lambda1 == doctest::Approx(pi * pi / 4));
  const auto w = make_space("w", WeightedInterval{-1, 1, 2});
  CHECK(w.declared_K == 2.0);
  CHECK(w.declared_N == 3.0);
  CHECK_FALSE(w.lambda1.has_value());
  const auto h = make_space("h", WeightedInterval{-1, 1, 2, WeightFamily::Cosh});
  CHECK(h.declared_K == -2.0);
  CHECK_THROWS_AS(make_space("bad", Sphere{1}), PreconditionError);
  CHECK_THROWS_AS(make_space("bad", WeightedInterval{-2, 1, 2}), PreconditionError);
}

TEST_CASE("verify_bound examples") {
  const auto sphere = verify_bound(make_space("s2", Sphere{2}));
  CHECK(sphere.pass);
  CHECK(std::abs(sphere.margin) < 1e-8);
  const auto circle = verify_bound(make_space("c", Circle{2 * pi}));
  CHECK(circle.margin == doctest::Approx(0.0).scale(1.0));
  const auto rect = verify_bound(make_space("r", Rectangle{1, 2}));
  CHECK(rect.margin == doctest::Approx(pi * pi / 4 - pi * pi / 5).epsilon(1e-10));
}

TEST_CASE("catalog and filters") {
  const auto& all = builtin_catalog();
  CHECK(all.size() >= 18);
  CHECK(filter_catalog("").size() == all.size());
  CHECK(filter_catalog("none").empty());
  CHECK(filter_catalog("sphere").size() == 3);
  CHECK(filter_catalog("circle,rectangle").size() == 6);
  for (const auto& s : filter_catalog("equality")) CHECK(s.equality_case);
  int weighted = 0;
  for (const auto& s : all) weighted += std::holds_alternative<WeightedInterval>(s.kind) ? 1 : 0;
  CHECK(weighted >= 6);
}

TEST_CASE("first Neumann eigenpair") {
  const auto flat = first_neumann_eigenpair({0, pi, 0.0}, 1024);
  CHECK(std::abs(flat.lambda1 - 1.0) < 1e-4);
  CHECK(std::abs(flat.lambda1_extrapolated - 1.0) < 1e-10);
  CHECK(*std::min_element(flat.f.begin(), flat.f.end()) == -1.0);

  const auto near = first_neumann_eigenpair({-pi / 2 + 1e-3, pi / 2 - 1e-3, 2.0}, 2048);
  CHECK(std::abs(near.lambda1 - 3.0) < 2e-3);

  const auto half = first_neumann_eigenpair({-0.5, 0.5, 2.0}, 1024);
  CHECK(half.lambda1_extrapolated >= hat_lambda({2, 3}, 1.0).lambda - 1e-8);
  CHECK_THROWS_AS(first_neumann_eigenpair({0, 1, 0}, 32), PreconditionError);
}

TEST_CASE("s_kappa") {
  CHECK(s_kappa(0, 2.5) == 2.5);
  CHECK(s_kappa(1, pi / 2) == doctest::Approx(1.0));
  CHECK(s_kappa(-1, 1) == doctest::Approx(std::sinh(1.0)));
  for (double t : {0.5, 1.0, 2.0}) {
    const double e = 1e-6;
    CHECK(std::abs(s_kappa(e, t) - t) <= e * t * t * t / 6 * 1.01);
    CHECK(std::abs(s_kappa(-e, t) - t) <= e * t * t * t / 6 * 1.01);
  }
  CHECK_THROWS_AS(s_kappa(1, -1), PreconditionError);
}

TEST_CASE("Bishop-Gromov ratio") {
  CHECK(bg_ratio_lower_bound({0, 3}, 1, 2) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(bg_ratio_lower_bound({2, 3}, pi / 4, pi / 2) == doctest::Approx(oracle::bg_ratio_2_3).epsilon(1e-10));
  CHECK(bg_ratio_lower_bound({-1, 4}, 2 * (1 - 1e-9), 2) == doctest::Approx(1.0).epsilon(1e-7));
  for (const CurvatureDimension cd : {CurvatureDimension{2, 3}, CurvatureDimension{-1, 2.5}, CurvatureDimension{0, 5}}) {
    double prev = 1.0;
    for (double R = 0.6; R <= 3.0; R += 0.3) {
      const double v = bg_ratio_lower_bound(cd, 0.5, R);
      CHECK(v > 0.0);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
  CHECK_THROWS_AS(bg_ratio_lower_bound({2, 3}, 1, 4), PreconditionError);
  CHECK_THROWS_AS(bg_ratio_lower_bound({2, 3}, 2, 1), PreconditionError);
  CHECK_THROWS_AS(bg_ratio_lower_bound({0, 1}, 1, 2), PreconditionError);
}
