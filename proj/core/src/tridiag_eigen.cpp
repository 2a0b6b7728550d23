#include "spectralgap/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectralgap/errors.hpp"

namespace spectralgap {

void TridiagonalPencil::validate() const {
  const std::size_t n = stiff_diag.size();
  if (n < 2) throw PreconditionError("pencil needs n >= 2");
  if (stiff_off.size() != n - 1 || mass_diag.size() != n) throw PreconditionError("pencil arrays have inconsistent sizes");
  for (double m : mass_diag) {
    if (!(m >= 0.0)) throw PreconditionError("mass entries must be nonnegative");
  }
}

double TridiagonalPencil::stiffness_norm() const {
  double norm = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(stiff_diag[i]);
    if (i > 0) row += std::abs(stiff_off[i - 1]);
    if (i + 1 < n) row += std::abs(stiff_off[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

std::vector<double> TridiagonalPencil::apply_stiffness(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = stiff_diag[i] * x[i];
    if (i > 0) s += stiff_off[i - 1] * x[i - 1];
    if (i + 1 < n) s += stiff_off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> cell_centers(double x0, double x1, std::size_t n) {
  std::vector<double> x(n);
  const double h = (x1 - x0) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = x0 + (static_cast<double>(i) + 0.5) * h;
  return x;
}

TridiagonalPencil assemble_neumann(const std::function<double(double)>& weight, double x0, double x1,
                                   std::size_t n) {
  if (n < 2) throw PreconditionError("assemble_neumann needs n >= 2");
  if (!(x1 > x0)) throw PreconditionError("assemble_neumann needs x1 > x0");
  const double h = (x1 - x0) / static_cast<double>(n);
  const double inv_h2 = 1.0 / (h * h);

  TridiagonalPencil p;
  p.stiff_diag.assign(n, 0.0);
  p.stiff_off.assign(n - 1, 0.0);
  p.mass_diag.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double face = weight(x0 + static_cast<double>(i + 1) * h);
    if (!(face >= 0.0)) throw PreconditionError("weight is negative (or NaN) at an evaluation point");
    const double flux = face * inv_h2;
    p.stiff_off[i] = -flux;
    p.stiff_diag[i] += flux;
    p.stiff_diag[i + 1] += flux;
  }
  const auto xc = cell_centers(x0, x1, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight(xc[i]);
    if (!(w >= 0.0)) throw PreconditionError("weight is negative (or NaN) at an evaluation point");
    p.mass_diag[i] = w;
  }
  return p;
}

InertiaCount inertia(const TridiagonalPencil& pencil, double sigma) {
  const std::size_t n = pencil.size();
  InertiaCount result;
  const double scale = std::max(pencil.stiffness_norm(), std::abs(sigma)) + std::numeric_limits<double>::min();
  for (;;) {
    std::size_t negatives = 0;
    double pivot = pencil.stiff_diag[0] - sigma * pencil.mass_diag[0];
    bool breakdown = false;
    for (std::size_t i = 0;;) {
      if (pivot == 0.0) {
        breakdown = true;
        break;
      }
      if (pivot < 0.0) ++negatives;
      if (++i == n) break;
      const double e = pencil.stiff_off[i - 1];
      pivot = (pencil.stiff_diag[i] - sigma * pencil.mass_diag[i]) - e * e / pivot;
    }
    if (!breakdown) {
      result.below = negatives;
      return result;
    }
    ++result.perturbations;
    sigma += 4.0 * std::numeric_limits<double>::epsilon() * scale * result.perturbations;
  }
}

namespace {

std::pair<double, double> gershgorin(const TridiagonalPencil& p) {
  const std::size_t n = p.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.mass_diag[i] <= 0.0) continue;
    double radius = 0.0;
    if (i > 0 && p.mass_diag[i - 1] > 0.0) radius += std::abs(p.stiff_off[i - 1]) / std::sqrt(p.mass_diag[i - 1] * p.mass_diag[i]);
    if (i + 1 < n && p.mass_diag[i + 1] > 0.0) radius += std::abs(p.stiff_off[i]) / std::sqrt(p.mass_diag[i + 1] * p.mass_diag[i]);
    const double center = p.stiff_diag[i] / p.mass_diag[i];
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  // The pencil is positive semidefinite.
  lo = std::min(lo, 0.0);
  const double pad = 1e-12 * std::max(1.0, hi - lo);
  return {lo - pad, hi + pad};
}

// Solves the tridiagonal system (sub, diag, sup) x = rhs by Gaussian
// elimination with partial pivoting. Zero pivots are replaced by a tiny
// value, which is what inverse iteration wants.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> sup2(n, 0.0);  // second superdiagonal created by row swaps
  const double tiny = std::numeric_limits<double>::epsilon() *
                      (1.0 + *std::max_element(diag.begin(), diag.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i]) > std::abs(diag[i])) {
      // swap rows i and i+1
      std::swap(diag[i], sub[i]);
      const double t_sup = sup[i];
      sup[i] = diag[i + 1];
      diag[i + 1] = t_sup;
      if (i + 2 < n) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = 0.0;
      }
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (diag[i] == 0.0) diag[i] = tiny;
    const double m = sub[i] / diag[i];
    diag[i + 1] -= m * sup[i];
    if (i + 2 < n) sup[i + 1] -= m * sup2[i];
    rhs[i + 1] -= m * rhs[i];
    sub[i] = 0.0;
  }
  if (diag[n - 1] == 0.0) diag[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    if (ii + 1 < n) s -= sup[ii] * x[ii + 1];
    if (ii + 2 < n) s -= sup2[ii] * x[ii + 2];
    x[ii] = s / diag[ii];
  }
  return x;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double eigenvalue_k(const TridiagonalPencil& pencil, std::size_t k, double tol) {
  pencil.validate();
  if (k >= pencil.size()) throw PreconditionError("eigenvalue index out of range");
  if (!(tol > 0.0)) throw PreconditionError("eigenvalue tolerance must be positive");
  auto [lo, hi] = gershgorin(pencil);
  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inertia(pencil, mid).below > k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> eigenvector_k(const TridiagonalPencil& pencil, std::size_t k, double lambda_k) {
  pencil.validate();
  const std::size_t n = pencil.size();
  if (k >= n) throw PreconditionError("eigenvector index out of range");
  if (k == 0) return std::vector<double>(n, -1.0);

  std::vector<double> sub(pencil.stiff_off), sup(pencil.stiff_off), diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = pencil.stiff_diag[i] - lambda_k * pencil.mass_diag[i];

  // Deterministic start vector with components along every mode.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);

  const double knorm = pencil.stiffness_norm();
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = pencil.mass_diag[i] * v[i];
    v = solve_tridiagonal(sub, diag, sup, rhs);
    const double s = max_abs(v);
    if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("inverse iteration broke down");
    for (double& x : v) x /= s;

    const auto kv = pencil.apply_stiffness(v);
    double res = 0.0, vn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kv[i] - lambda_k * pencil.mass_diag[i] * v[i];
      res += r * r;
      vn += v[i] * v[i];
    }
    if (iter >= 1 && std::sqrt(res) <= 1e-8 * knorm * std::sqrt(vn)) {
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      double lo = *mn, hi = *mx;
      const double tie = 1e-9 * std::max(std::abs(lo), std::abs(hi));
      bool flip = false;
      if (std::abs(hi) > std::abs(lo) + tie) flip = true;
      else if (std::abs(std::abs(hi) - std::abs(lo)) <= tie) flip = v.front() > 0.0;
      const double scale = flip ? -1.0 / hi : -1.0 / lo;
      for (double& x : v) x *= scale;
      return v;
    }
  }
  throw NumericalError("inverse iteration did not converge in 20 iterations");
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace spectralgap
