#include "speclyap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "speclyap/sym_matrix.hpp"

namespace speclyap {

namespace {

constexpr int kMaxNewton = 100;

void require_order(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": order must be >= 1");
}

// Orthonormal Hermite functions psi_{n-1}(x), psi_n(x).
std::pair<double, double> hermite_pair(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

double hermite_sum_squares(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    s += cur * cur;
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return s;
}

}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

QuadratureRule gauss_legendre_rule(int n) {
  require_order(n, "gauss_legendre_rule");
  QuadratureRule rule;
  rule.domain = QuadratureDomain::interval;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_legendre_rule: Newton iteration did not converge");
    // Recompute the derivative at the converged node for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = w;
    rule.weights[n - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule trapezoid_periodic_rule(int n) {
  require_order(n, "trapezoid_periodic_rule");
  QuadratureRule rule;
  rule.domain = QuadratureDomain::periodic;
  rule.nodes.resize(n);
  rule.weights.assign(n, 2.0 * std::numbers::pi / n);
  for (int j = 0; j < n; ++j) rule.nodes[j] = 2.0 * std::numbers::pi * j / n;
  return rule;
}

QuadratureRule gauss_hermite_rule(int n) {
  require_order(n, "gauss_hermite_rule");
  if (n > 500) throw std::invalid_argument("gauss_hermite_rule: order limited to 500");

  // Nodes: eigenvalues of the symmetric tridiagonal Jacobi matrix of the
  // Hermite recurrence (off-diagonal sqrt(k/2)).
  SymMatrix jac(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) jac.set(k - 1, k, std::sqrt(0.5 * k));
  std::vector<double> x = jacobi_eigen(jac).values;

  // Polish each node by Newton on psi_n, whose derivative at a zero is sqrt(2n) psi_{n-1}.
  for (double& z : x) {
    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      const auto [pm1, pn] = hermite_pair(n, z);
      const double dz = pn / (std::sqrt(2.0 * n) * pm1);
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_hermite_rule: Newton polish did not converge");
  }
  std::sort(x.begin(), x.end());
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (std::abs(x[i]) + std::abs(x[n - 1 - i]));
    x[i] = -a;
    x[n - 1 - i] = a;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  QuadratureRule rule;
  rule.domain = QuadratureDomain::gaussian_weight;
  rule.nodes = x;
  rule.weights.resize(n);
  // Christoffel form: w_i = exp(-x_i^2) / sum_k psi_k(x_i)^2.
  for (int i = 0; i < n; ++i) rule.weights[i] = std::exp(-x[i] * x[i]) / hermite_sum_squares(n, x[i]);
  return rule;
}

std::vector<double> gauss_hermite_compensated_weights(const QuadratureRule& rule) {
  if (rule.domain != QuadratureDomain::gaussian_weight)
    throw std::invalid_argument("gauss_hermite_compensated_weights: not a Gauss-Hermite rule");
  const int n = static_cast<int>(rule.size());
  std::vector<double> w(rule.size());
  for (int i = 0; i < n; ++i) w[i] = 1.0 / hermite_sum_squares(n, rule.nodes[i]);
  return w;
}

QuadratureRule map_to_radial(const QuadratureRule& rule) {
  if (rule.domain != QuadratureDomain::interval)
    throw std::invalid_argument("map_to_radial: input must be an interval rule on [-1, 1]");
  QuadratureRule out;
  out.domain = QuadratureDomain::radial;
  out.nodes.resize(rule.size());
  out.weights.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = 0.5 * (rule.nodes[i] + 1.0);
    out.nodes[i] = r;
    out.weights[i] = 0.5 * rule.weights[i] * r;
  }
  return out;
}

}  // namespace speclyap
