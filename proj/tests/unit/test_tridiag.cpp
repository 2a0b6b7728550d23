#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "spectralgap/errors.hpp"
#include "spectralgap/models.hpp"
#include "spectralgap/tridiag_eigen.hpp"
#include "oracles.hpp"

using namespace spectralgap;
using std::numbers::pi;

namespace {
double one(double) { return 1.0; }
}

TEST_CASE("assembly") {
  const auto p = assemble_neumann(one, 0.0, pi, 16);
  CHECK(p.size() == 16);
  CHECK_NOTHROW(p.validate());
  const std::vector<double> ones(16, 1.0);
  const auto y = p.apply_stiffness(ones);
  double norm = 0.0;
  for (double v : y) norm = std::max(norm, std::abs(v));
  CHECK(norm <= 1e-12 * p.stiffness_norm());
  CHECK_THROWS_AS(assemble_neumann(one, 0.0, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(assemble_neumann([](double) { return -1.0; }, 0.0, 1.0, 8), PreconditionError);
}

TEST_CASE("discrete cosine spectrum") {
  for (std::size_t n : {4u, 16u, 64u, 257u}) {
    const auto p = assemble_neumann(one, 0.0, pi, n);
    const double h = pi / static_cast<double>(n);
    for (std::size_t k : {0u, 1u, 2u, 3u}) {
      if (k >= n) continue;
      const double exact = 4.0 / (h * h) * std::pow(std::sin(k * pi / (2.0 * n)), 2);
      // Beyond n = 64 the 1e-12 target drops below the eps*||K|| rounding floor.
      const double tol = n <= 64 ? 1e-12 : 64 * 2.3e-16 * p.stiffness_norm();
      CHECK(std::abs(eigenvalue_k(p, k) - exact) <= tol);
    }
  }
  const auto p4 = assemble_neumann(one, 0.0, pi, 4);
  CHECK(eigenvalue_k(p4, 1) == doctest::Approx(oracle::discrete_cosine_n4_k1).epsilon(1e-13));
  CHECK_THROWS_AS(eigenvalue_k(p4, 4), PreconditionError);
}

TEST_CASE("constant weight scales out") {
  const auto a = assemble_neumann(one, -1.0, 2.0, 32);
  const auto b = assemble_neumann([](double) { return 7.5; }, -1.0, 2.0, 32);
  for (std::size_t k : {1u, 5u, 31u}) CHECK(eigenvalue_k(a, k) == doctest::Approx(eigenvalue_k(b, k)).epsilon(1e-12));
}

TEST_CASE("inertia") {
  const auto p = assemble_neumann(one, 0.0, pi, 4);
  CHECK(inertia(p, -1.0).below == 0);
  CHECK(inertia(p, 0.5).below == 1);
  CHECK(inertia(p, 1e6).below == 4);
  // Exactly at an eigenvalue the count restarts with a tiny shift.
  const auto q = assemble_neumann(one, 0.0, 1.0, 8);
  const auto r = inertia(q, 0.0);
  CHECK(r.below <= 1);
}

TEST_CASE("continuum convergence") {
  const auto p = assemble_neumann(one, 0.0, pi, 1024);
  CHECK(std::abs(eigenvalue_k(p, 1) - 1.0) < 1e-4);
  const auto c = assemble_neumann(one, 0.0, pi, 512);
  CHECK(std::abs(richardson(eigenvalue_k(c, 1), eigenvalue_k(p, 1)) - 1.0) < 1e-10);
}

TEST_CASE("eigenvectors") {
  const std::size_t n = 256;
  const auto p = assemble_neumann(one, 0.0, pi, n);
  const auto x = cell_centers(0.0, pi, n);
  const double lam = eigenvalue_k(p, 1, 1e-13);
  const auto v = eigenvector_k(p, 1, lam);
  const double scale = 1.0 / std::cos(x[0]);
  for (std::size_t i = 0; i < n; ++i) CHECK(v[i] == doctest::Approx(-std::cos(x[i]) * scale).scale(1.0).epsilon(1e-12));
  const auto c = eigenvector_k(p, 0, eigenvalue_k(p, 0));
  for (double e : c) CHECK(e == -1.0);

  // The K=2, N=3 model with slightly trimmed ends: eigenfunction ~ sin x.
  const double eps = 1e-3;
  const auto w = assemble_neumann([](double t) { return std::pow(std::cos(t), 2); }, -pi / 2 + eps, pi / 2 - eps, 2048);
  const auto xs = cell_centers(-pi / 2 + eps, pi / 2 - eps, 2048);
  const double l2 = eigenvalue_k(w, 1, 1e-13);
  CHECK(std::abs(l2 - 3.0) < 2e-3);
  const auto f = eigenvector_k(w, 1, l2);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(std::abs(f[i]) - std::abs(std::sin(xs[i]))));
  CHECK(worst < 1e-3);
}
