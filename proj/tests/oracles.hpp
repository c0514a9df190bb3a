#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "speclyap/spectral_core.hpp"
#include "speclyap/sym_matrix.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_100;

// Power series sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!) in 100-digit arithmetic.
inline mp bessel_j_series(int m, const mp& x) {
  const mp half = x / 2;
  mp term = 1;
  for (int i = 1; i <= m; ++i) term *= half / i;
  mp sum = term;
  const mp q = half * half;
  const mp eps = std::numeric_limits<mp>::epsilon() * 1e-5;
  for (int k = 1; k < 2000; ++k) {
    term *= -q / (k * (k + m));
    sum += term;
    if (k > q && abs(term) < eps) break;
  }
  return sum;
}

inline double bessel_j(int m, double x) { return static_cast<double>(bessel_j_series(m, mp(x))); }

// k-th positive zero of J_m: sign-change scan on a 0.05 grid, then bisection.
inline double bessel_zero(int m, int k) {
  const double step = 0.05;
  double a = m == 0 ? step : m;
  mp fa = bessel_j_series(m, mp(a));
  int found = 0;
  for (;;) {
    const double b = a + step;
    const mp fb = bessel_j_series(m, mp(b));
    if (fa * fb < 0 && ++found == k) {
      mp lo = a, hi = b, flo = fa;
      for (int it = 0; it < 80; ++it) {
        const mp mid = (lo + hi) / 2;
        const mp fm = bessel_j_series(m, mid);
        if (fm * flo <= 0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      return static_cast<double>((lo + hi) / 2);
    }
    a = b;
    fa = fb;
  }
}

// Largest |eigenvalue| by power iteration on M^2 from a fixed dense start vector.
inline double power_iteration_norm(const speclyap::SymMatrix& M, int iters = 20000) {
  const std::size_t n = M.dim();
  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += M(i, j) * x[j];
      y[i] = s;
    }
  };
  double lam = 0;
  for (int it = 0; it < iters; ++it) {
    apply(v, w);
    std::vector<double> u(n);
    apply(w, u);
    double nu = 0, nv = 0;
    for (std::size_t i = 0; i < n; ++i) {
      nu += u[i] * u[i];
      nv += v[i] * v[i];
    }
    const double next = std::sqrt(std::sqrt(nu / nv));
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / std::sqrt(nu);
    if (it > 50 && std::abs(next - lam) <= 1e-15 * next) {
      lam = next;
      break;
    }
    lam = next;
  }
  return lam;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct Instance {
  speclyap::DissipativeSpectrum spec;
  speclyap::SymMatrix Q;
};

// Eigenvalues uniform in [lo, hi] sorted descending; Q = B B^T / n with Gaussian B.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n, double lo = -10.0, double hi = -0.1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::normal_distribution<double> g;
  std::vector<double> lam(n);
  for (auto& l : lam) l = u(rng);
  std::sort(lam.begin(), lam.end(), std::greater<>());
  std::vector<double> B(n * n);
  for (auto& b : B) b = g(rng);
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < n; ++k) s += B[i * n + k] * B[j * n + k];
      q[i * n + j] = s / static_cast<double>(n);
    }
  return {speclyap::DissipativeSpectrum::from_eigenvalues(lam), speclyap::SymMatrix::from_row_major(n, q)};
}

}  // namespace oracle
