#pragma once

// Symmetric-definite tridiagonal pencil (K, M), M diagonal, from the
// conservative finite-volume discretization of (rho v')' = -lambda rho v
// with natural Neumann boundaries. Eigenvalues by Sturm-count bisection,
// eigenvectors by inverse iteration.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spectralgap {

struct TridiagonalPencil {
  std::vector<double> stiff_diag;  // n
  std::vector<double> stiff_off;   // n-1
  std::vector<double> mass_diag;   // n

  [[nodiscard]] std::size_t size() const noexcept { return stiff_diag.size(); }

  /// Throws PreconditionError on inconsistent sizes, n < 2, or negative mass.
  void validate() const;

  /// max row sum of |K|.
  [[nodiscard]] double stiffness_norm() const;

  /// y = K x.
  [[nodiscard]] std::vector<double> apply_stiffness(std::span<const double> x) const;
};

/// Uniform grid of n cells on [x0, x1]: cell centers x0 + (i + 1/2) h,
/// fluxes at interior faces, none through the two boundary faces.
/// Stiffness is scaled by 1/h^2 and mass is rho at the cell centers.
/// Throws PreconditionError for n < 2 or x1 <= x0, and when rho < 0.
TridiagonalPencil assemble_neumann(const std::function<double(double)>& weight, double x0,
                                   double x1, std::size_t n);

/// Cell-center coordinates matching assemble_neumann.
std::vector<double> cell_centers(double x0, double x1, std::size_t n);

struct InertiaCount {
  std::size_t below = 0;     // eigenvalues strictly below sigma
  int perturbations = 0;     // tiny-shift restarts after a zero pivot
};

InertiaCount inertia(const TridiagonalPencil& pencil, double sigma);

/// k-th smallest eigenvalue (0-based), bisection to absolute width tol
/// from a Gershgorin bracket. Throws PreconditionError for k >= n.
double eigenvalue_k(const TridiagonalPencil& pencil, std::size_t k, double tol = 1e-12);

/// Inverse iteration at lambda_k. The result is scaled to min value -1,
/// with the sign chosen so that the larger excursion is the negative one
/// (ties broken by a negative first entry); the constant mode k = 0 is
/// returned as all -1. Throws NumericalError after 20 iterations without
/// reaching residual <= 1e-8 ||K|| ||v||.
std::vector<double> eigenvector_k(const TridiagonalPencil& pencil, std::size_t k, double lambda_k);

/// (4 l_fine - l_coarse)/3 for a grid ratio of 2 and order 2.
double richardson(double coarse, double fine);

}  // namespace spectralgap
