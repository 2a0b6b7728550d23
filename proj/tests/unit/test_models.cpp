#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spectralgap/errors.hpp"
#include "spectralgap/models.hpp"

using namespace spectralgap;
using std::numbers::pi;

TEST_CASE("curvature-dimension validation") {
  CHECK_NOTHROW(CurvatureDimension(0.0, 1.0));
  CHECK_NOTHROW(CurvatureDimension(-3.0, 1.0));
  CHECK_THROWS_AS(CurvatureDimension(1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(CurvatureDimension(0.0, 0.5), PreconditionError);
  CHECK_THROWS_AS(CurvatureDimension(NAN, 2.0), PreconditionError);
  CHECK(CurvatureDimension(0.0, 1.0).drift_free());
  CHECK(CurvatureDimension(2.0, 3.0).L() == doctest::Approx(1.0));
}

TEST_CASE("d_max") {
  CHECK(*d_max({2, 3}) == doctest::Approx(pi).epsilon(1e-15));
  CHECK_FALSE(d_max({0, 5}).has_value());
  CHECK_FALSE(d_max({-1, 5}).has_value());
  CHECK(*d_max({4, 2}) == doctest::Approx(pi / 2).epsilon(1e-15));
}

TEST_CASE("drift and weight examples") {
  CHECK(drift_T({0, 3}, 0.7) == 0.0);
  CHECK(drift_T({2, 3}, pi / 4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(drift_T({-2, 3}, 0.0) == 0.0);
  CHECK(weight_rho({0, 7}, 1.3) == 1.0);
  CHECK(weight_rho({2, 3}, pi / 3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(weight_rho({-2, 3}, 0.0) == 1.0);
  CHECK_THROWS_AS(drift_T({2, 3}, pi / 2), DomainError);
}

TEST_CASE("log-derivative of the weight is -(N-1) T, drift odd, weight even") {
  const CurvatureDimension cds[] = {{2, 3}, {-2, 3}, {0.5, 4.5}, {-1, 1.7}, {0, 2}};
  for (const auto& cd : cds) {
    const double lim = d_max(cd) ? 0.45 * *d_max(cd) : 2.0;
    for (int i = -10; i <= 10; ++i) {
      const double x = lim * i / 10.0;
      const double h = 1e-5;
      const double dlog = (std::log(weight_rho(cd, x + h)) - std::log(weight_rho(cd, x - h))) / (2 * h);
      CHECK(dlog == doctest::Approx(-(cd.N() - 1) * drift_T(cd, x)).epsilon(1e-6).scale(1.0));
      CHECK(drift_T(cd, -x) == doctest::Approx(-drift_T(cd, x)).epsilon(1e-14));
      CHECK(weight_rho(cd, -x) == doctest::Approx(weight_rho(cd, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("symmetric model endpoint classification") {
  const SymmetricModel full({2, 3}, pi);
  CHECK(full.endpoint_kind() == EndpointKind::Singular);
  CHECK(full.singular_endpoint(Side::Left).exponent == 2.0);
  CHECK(SymmetricModel({2, 3}, 3.0).endpoint_kind() == EndpointKind::Regular);
  CHECK(SymmetricModel({-2, 3}, 30.0).endpoint_kind() == EndpointKind::Regular);
  CHECK_THROWS_AS(SymmetricModel({2, 3}, 3.2), PreconditionError);
  CHECK_THROWS_AS(SymmetricModel({2, 3}, 0.0), PreconditionError);
}

TEST_CASE("one-sided densities") {
  CHECK(one_sided_density(OneSidedModel(0, 3), 2.0) == doctest::Approx(4.0));
  CHECK(one_sided_density(OneSidedModel(2, 3), 0.0) == doctest::Approx(1.0));
  CHECK(one_sided_density(OneSidedModel(-2, 3), 0.0) == 0.0);
  for (double R : {2.0, 0.0, -2.0}) {
    const OneSidedModel m(R, 3.5);
    CHECK(one_sided_density(m, m.a()) == doctest::Approx(0.0).scale(1e-300));
    CHECK(one_sided_density(m, m.a() + 1e-3) > 0.0);
    CHECK_THROWS_AS(one_sided_density(m, m.a() - 0.1), DomainError);
  }
  CHECK(OneSidedModel(2, 3).family() == OneSidedFamily::Trig);
  CHECK(OneSidedModel(2, 3).a() == doctest::Approx(-pi / 2));
  CHECK(OneSidedModel(0, 3).family() == OneSidedFamily::Power);
  CHECK(OneSidedModel(-1, 3).family() == OneSidedFamily::Hyperbolic);
  CHECK_THROWS_AS(OneSidedModel(0, 1.0), PreconditionError);
}

TEST_CASE("Frobenius start") {
  const SingularEndpoint power{0.0, Side::Left, 2.0, 0.0};
  SUBCASE("lambda = 0 returns the constant exactly") {
    for (double h0 : {1e-6, 1e-3, 0.1}) {
      const auto [v, dv] = frobenius_start(power, 0.0, 1.7, h0);
      CHECK(v == 1.7);
      CHECK(dv == 0.0);
    }
  }
  SUBCASE("p = 2 matches -sin(s)/s") {
    const double s = 1e-2;
    const auto [v, dv] = frobenius_start(power, 1.0, -1.0, s);
    CHECK(v == doctest::Approx(-std::sin(s) / s).epsilon(1e-15));
    CHECK(dv == doctest::Approx(-(s * std::cos(s) - std::sin(s)) / (s * s)).epsilon(1e-12));
  }
  SUBCASE("Trig p = 1 at -pi/2 matches sin") {
    const auto e = OneSidedModel(1, 2).left_endpoint();
    const double h = 1e-2;
    const auto [v, dv] = frobenius_start(e, 2.0, -1.0, h);
    CHECK(v == doctest::Approx(std::sin(-pi / 2 + h)).epsilon(1e-14));
    CHECK(dv == doctest::Approx(std::cos(-pi / 2 + h)).epsilon(1e-10));
  }
  SUBCASE("right side flips the slope") {
    const auto e = OneSidedModel(1, 2).right_endpoint();
    const auto [v, dv] = frobenius_start(e, 2.0, 1.0, 1e-2);
    CHECK(v == doctest::Approx(std::sin(pi / 2 - 1e-2)).epsilon(1e-14));
    CHECK(dv == doctest::Approx(std::cos(pi / 2 - 1e-2)).epsilon(1e-10));
  }
  SUBCASE("offset honours the truncation budget") {
    const double h0 = frobenius_offset(power, 50.0, 1.0, 1e-14);
    CHECK(frobenius_truncation(power, 50.0, 1.0, h0) <= 1e-14);
    CHECK_THROWS_AS(frobenius_start(power, 50.0, 1.0, 0.5, 1e-14), PreconditionError);
  }
}
