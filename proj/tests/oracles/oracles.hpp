#pragma once

// Reference values produced by tests/oracles/compute_oracles.py (mpmath,
// 40-digit arithmetic, Chebyshev collocation at two resolutions). None of
// them comes from the library under test.

namespace spectralgap::oracle {

// First positive root of tan t = t, and -sin(t)/t there.
inline constexpr double tan_root = 4.4934094579090641753;
inline constexpr double power_m = 0.21723362821122165741;

// int_0^{pi/4} sin^2 / int_0^{pi/2} sin^2 = (pi/8 - 1/4)/(pi/4).
inline constexpr double bg_ratio_2_3 = 0.18169011381620932846;

// (4/h^2) sin^2(pi/8), h = pi/4: Neumann finite-volume Laplacian, n = 4.
inline constexpr double discrete_cosine_n4_k1 = 0.94964120355178363474;

struct HatLambda {
  double K, N, d, value;
};

// Symmetric-model eigenvalues; collocation at 40 and 48 nodes agree to
// better than 1e-15.
inline constexpr HatLambda hat_lambda_table[] = {
    {-3.0, 2.0, 1.7, 2.35479807510639651},
    {1.0, 3.0, 2.0, 3.04015809094168249},
    {-1.0, 2.5, 1.0, 9.38801814456600718},
    {-2.0, 4.0, 2.5, 0.853397110601306129},
};

}  // namespace spectralgap::oracle
