#pragma once

#include <vector>

namespace speclyap {

/// Bessel function of the first kind J_m(x) for 0 <= m <= 60, 0 <= x <= 500.
/// Power series where it is free of cancellation, normalized backward (Miller)
/// recurrence elsewhere. Throws std::domain_error outside the supported range.
double bessel_j(int m, double x);

/// k-th positive zero j_{m,k} of J_m, 0 <= m <= 60, 1 <= k <= 100.
double bessel_zero(int m, int k);

/// The first `count` positive zeros of J_m in increasing order.
std::vector<double> bessel_zeros(int m, int count);

/// All positive zeros of J_m strictly below `limit` (limit <= 500).
std::vector<double> bessel_zeros_below(int m, double limit);

/// Classical radial Zernike polynomial R_n^m(r), n >= m >= 0, n - m even, n <= 60.
double zernike_radial(int n, int m, double r);

/// Orthonormal Hermite function psi_n(x), n <= 200, |x| <= 30.
double hermite_function(int n, double x);

/// Associated Legendre function normalized so that 2 pi * int_{-1}^{1} P^2 dx = 1
/// (includes the Condon-Shortley phase). 0 <= m <= l, |x| <= 1.
double normalized_legendre(int l, int m, double x);

}  // namespace speclyap
