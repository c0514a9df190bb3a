#pragma once

#include <functional>
#include <vector>

namespace speclyap {

enum class QuadratureDomain {
  interval,         ///< [-1, 1], unit weight
  radial,           ///< [0, 1], weight r
  periodic,         ///< [0, 2 pi), unit weight
  gaussian_weight,  ///< real line, weight exp(-x^2)
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureDomain domain = QuadratureDomain::interval;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact through degree 2n-1.
QuadratureRule gauss_legendre_rule(int n);

/// Equispaced nodes 2 pi j / n with weights 2 pi / n.
QuadratureRule trapezoid_periodic_rule(int n);

/// n-point Gauss-Hermite rule for the weight exp(-x^2).
QuadratureRule gauss_hermite_rule(int n);

/// Weights of a Gauss-Hermite rule multiplied by exp(x_i^2), so the rule integrates
/// f(x) dx directly for f decaying like exp(-x^2). Computed without overflow.
std::vector<double> gauss_hermite_compensated_weights(const QuadratureRule& rule);

/// Maps an interval rule to [0, 1] and folds in the disk's r dr factor.
QuadratureRule map_to_radial(const QuadratureRule& rule);

}  // namespace speclyap
