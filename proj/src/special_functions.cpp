#include "speclyap/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace speclyap {

namespace {

constexpr int kMaxBesselOrder = 60;
constexpr double kMaxBesselArg = 500.0;

double bessel_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double h2 = half * half;
  for (int k = 0; k < 500; ++k) {
    term *= -h2 / ((k + 1.0) * (k + 1.0 + m));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J_m(x) and J_{m+1}(x) by Miller's algorithm, normalized with
// J_0 + 2 sum_{k>=1} J_{2k} = 1.
std::pair<double, double> bessel_miller(int m, double x) {
  const double big = std::max(static_cast<double>(m + 1), x);
  int start = static_cast<int>(big + 20.0 + std::sqrt(60.0 * big));
  start += start % 2;
  constexpr double kRescale = 1e250;
  constexpr double kRescaleFactor = 1e-250;

  double jp = 0.0;  // J_{k+1}
  double jk = 1.0;  // J_k
  double norm = 0.0;
  double out_m = 0.0;
  double out_m1 = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    // Here jk = J_k, jp = J_{k+1}.
    if (k == m) out_m = jk;
    if (k == m + 1) out_m1 = jk;
    if (k % 2 == 0) norm += 2.0 * jk;
    const double jm = k * two_over_x * jk - jp;  // J_{k-1}
    jp = jk;
    jk = jm;
    if (std::abs(jk) > kRescale) {
      jk *= kRescaleFactor;
      jp *= kRescaleFactor;
      norm *= kRescaleFactor;
      out_m *= kRescaleFactor;
      out_m1 *= kRescaleFactor;
    }
  }
  // jk = J_0, jp = J_1
  if (m == 0) out_m = jk;
  if (m + 1 == 1) out_m1 = jp;
  norm += jk;
  return {out_m / norm, out_m1 / norm};
}

// Series only where its terms decrease from the first one; Miller elsewhere.
bool use_series(int m, double x) { return x <= 2.0 || x * x <= 4.0 * (m + 1); }

// J_m and J_{m+1}; m may reach kMaxBesselOrder + 1 for the companion value.
std::pair<double, double> bessel_pair(int m, double x) {
  if (x == 0.0) return {m == 0 ? 1.0 : 0.0, 0.0};
  if (use_series(m, x) && use_series(m + 1, x)) return {bessel_series(m, x), bessel_series(m + 1, x)};
  return bessel_miller(m, x);
}

void check_bessel_range(int m, double x) {
  if (m < 0 || m > kMaxBesselOrder)
    throw std::domain_error("bessel_j: order " + std::to_string(m) + " outside [0, 60]");
  if (!(x >= 0.0) || x > kMaxBesselArg)
    throw std::domain_error("bessel_j: argument outside [0, 500]");
}

double mcmahon_guess(int m, int k) {
  const double beta = (k + 0.5 * m - 0.25) * std::numbers::pi;
  const double mu = 4.0 * m * m;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

// Safeguarded Newton on J_m inside a sign-change bracket [a, b].
double refine_zero(int m, int k, double a, double b) {
  double fa = bessel_pair(m, a).first;
  double x = mcmahon_guess(m, k);
  if (!(x > a && x < b)) x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const auto [j, j1] = bessel_pair(m, x);
    if (j == 0.0) return x;
    if ((j > 0.0) == (fa > 0.0)) {
      a = x;
      fa = j;
    } else {
      b = x;
    }
    const double deriv = (m / x) * j - j1;
    double next = x - j / deriv;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-15 * x || (b - a) <= 4e-16 * x) return x;
  }
  throw std::runtime_error("bessel_zero: refinement failed for m=" + std::to_string(m) +
                           ", k=" + std::to_string(k));
}

// Scans J_m with unit steps (zero spacing exceeds 2.4 for every m) and refines
// each sign change; stops after `count` zeros or once the scan passes `limit`.
std::vector<double> scan_zeros(int m, int count, double limit) {
  std::vector<double> zeros;
  double a = m == 0 ? 0.0 : static_cast<double>(m);  // J_m > 0 on (0, j_{m,1}) and j_{m,1} > m
  double fa = bessel_pair(m, a).first;
  constexpr double kStep = 1.0;
  while (static_cast<int>(zeros.size()) < count && a < limit) {
    const double b = std::min(a + kStep, kMaxBesselArg);
    if (b <= a) break;
    const double fb = bessel_pair(m, b).first;
    if (fb == 0.0) {
      zeros.push_back(b);
      a = b + 1e-9;
      fa = bessel_pair(m, a).first;
      continue;
    }
    if ((fa > 0.0) != (fb > 0.0))
      zeros.push_back(refine_zero(m, static_cast<int>(zeros.size()) + 1, a, b));
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace

double bessel_j(int m, double x) {
  check_bessel_range(m, x);
  return bessel_pair(m, x).first;
}

std::vector<double> bessel_zeros(int m, int count) {
  if (m < 0 || m > kMaxBesselOrder) throw std::domain_error("bessel_zero: order outside [0, 60]");
  if (count < 1 || count > 100) throw std::domain_error("bessel_zero: index outside [1, 100]");
  auto zeros = scan_zeros(m, count, kMaxBesselArg);
  if (static_cast<int>(zeros.size()) < count)
    throw std::runtime_error("bessel_zero: fewer zeros found than requested");
  return zeros;
}

double bessel_zero(int m, int k) { return bessel_zeros(m, k).back(); }

std::vector<double> bessel_zeros_below(int m, double limit) {
  if (m < 0 || m > kMaxBesselOrder) throw std::domain_error("bessel_zeros_below: order outside [0, 60]");
  if (limit > kMaxBesselArg) throw std::domain_error("bessel_zeros_below: limit above 500");
  auto zeros = scan_zeros(m, 1 << 20, limit);
  while (!zeros.empty() && zeros.back() >= limit) zeros.pop_back();
  return zeros;
}

double zernike_radial(int n, int m, double r) {
  if (m < 0 || n < m) throw std::invalid_argument("zernike_radial: need n >= m >= 0");
  if ((n - m) % 2 != 0) throw std::invalid_argument("zernike_radial: n - m must be even");
  if (n > 60) throw std::invalid_argument("zernike_radial: n limited to 60");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("zernike_radial: r outside [0, 1]");
  const int a = (n + m) / 2;
  const int b = (n - m) / 2;
  // c_0 = C(n, a); c_{s+1} = -c_s (a-s)(b-s) / ((s+1)(n-s)), all integers.
  double c = 1.0;
  for (int i = 1; i <= b; ++i) c = c * (n - b + i) / i;
  double sum = 0.0;
  for (int s = 0; s <= b; ++s) {
    sum += c * std::pow(r, n - 2 * s);
    c = -c * (a - s) * (b - s) / ((s + 1.0) * (n - s));
  }
  return sum;
}

double hermite_function(int n, double x) {
  if (n < 0 || n > 200) throw std::domain_error("hermite_function: n outside [0, 200]");
  if (!(std::abs(x) <= 30.0)) throw std::domain_error("hermite_function: |x| > 30");
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double normalized_legendre(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("normalized_legendre: need 0 <= m <= l");
  if (!(std::abs(x) <= 1.0)) throw std::invalid_argument("normalized_legendre: |x| > 1");
  double pmm = 1.0;
  if (m > 0) {
    const double omx2 = (1.0 - x) * (1.0 + x);
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= omx2 * fact / (fact + 1.0);
      fact += 2.0;
    }
  }
  pmm = std::sqrt((2.0 * m + 1.0) * pmm / (4.0 * std::numbers::pi));
  if (m & 1) pmm = -pmm;
  if (l == m) return pmm;
  double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pmmp1;
  double oldfact = std::sqrt(2.0 * m + 3.0);
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double fact = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(m) * m));
    pll = (x * pmmp1 - pmm / oldfact) * fact;
    oldfact = fact;
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

}  // namespace speclyap
