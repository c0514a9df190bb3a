#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "speclyap/mode_index.hpp"
#include "speclyap/quadrature.hpp"
#include "speclyap/special_functions.hpp"
#include "speclyap/spectral_core.hpp"
#include "speclyap/sym_matrix.hpp"

namespace speclyap {

struct GeometryParams {
  double alpha = 1.0;  ///< diffusion coefficient
  double gamma = 0.5;  ///< uniform dissipation rate
  int d = 1;           ///< oscillator dimension

  /// Throws std::invalid_argument unless alpha > 0, gamma > 0 (and 1 <= d <= 3).
  void validate(Geometry g) const;
};

/// The `cutoff` slowest Dirichlet modes of -alpha^2 Laplacian - gamma on the unit disk.
/// Order: eigenvalue descending, then |m| ascending, cos before sin, k ascending.
DissipativeSpectrum disk_spectrum(const GeometryParams& params, int cutoff);

/// Damped oscillator modes, lambda = -(|n| + d/2) - gamma, enumerated by |n| then
/// lexicographically ascending multi-index.
DissipativeSpectrum oscillator_spectrum(const GeometryParams& params, int cutoff);

/// All (l, m) with l <= L, lambda = -alpha^2 l (l+1) - gamma, ordered by l then m.
DissipativeSpectrum sphere_spectrum(const GeometryParams& params, int L);

/// The `count` slowest modes of any geometry (sphere truncates inside the last l level).
DissipativeSpectrum make_spectrum(Geometry g, const GeometryParams& params, int count);

/// Orthonormal disk eigenfunction on the measure r dr dtheta.
double disk_eigenfunction(const DiskMode& mode, double r, double theta);

/// Real orthonormal spherical harmonic.
double sphere_eigenfunction(const SphereMode& mode, double theta, double phi);

/// Product of 1-D Hermite functions.
double oscillator_eigenfunction(const OscillatorMode& mode, std::span<const double> x);

struct QuadratureOrders {
  int radial = 64;
  int angular = 128;
  int hermite = 80;
  int polar = 64;
};

/// A point of a tensor quadrature grid. `x` holds ambient Cartesian coordinates
/// (disk: (r cos t, r sin t, 0); sphere: unit vector; oscillator: x_1..x_d, zero padded)
/// and `index` the flat node position (disk/sphere: radial or polar index outer,
/// angular inner; oscillator: first coordinate outer).
struct GridPoint {
  std::array<double, 3> x{};
  std::size_t index = 0;
};

struct NodeGrid {
  Geometry geometry = Geometry::disk;
  std::vector<GridPoint> points;
  std::vector<double> weights;  ///< integrates f dmu directly (Hermite weights compensated)
  std::vector<std::array<double, 2>> intrinsic;  ///< (r, theta) or (theta, phi); unused for oscillator
  std::size_t size() const { return points.size(); }
};

NodeGrid make_grid(Geometry g, int d, const QuadratureOrders& orders);

/// Evaluates the orthonormal eigenfunctions of a spectrum on grids.
/// Caches per-mode constants (Bessel zeros, radial normalizations).
class Basis {
 public:
  Basis(Geometry g, GeometryParams params, DissipativeSpectrum spectrum);

  Geometry geometry() const { return geometry_; }
  const GeometryParams& params() const { return params_; }
  const DissipativeSpectrum& spectrum() const { return spectrum_; }
  std::size_t size() const { return spectrum_.size(); }

  /// Row-major (nodes x modes) table of eigenfunction values.
  std::vector<double> evaluate(const NodeGrid& grid) const;
  double evaluate(std::size_t mode, const NodeGrid& grid, std::size_t node) const;

 private:
  Geometry geometry_;
  GeometryParams params_;
  DissipativeSpectrum spectrum_;
  std::vector<double> disk_zero_;
  std::vector<double> disk_norm_;
};

struct GramResult {
  SymMatrix gram;
  double defect = 0.0;  ///< max |G - I|
};

/// Quadrature inner products of the basis. The oscillator uses the exact
/// factorization of tensor-rule Gram entries into 1-D Hermite Gram entries.
GramResult gram_matrix(const Basis& basis, const QuadratureOrders& orders);

/// 1-D tables over Hermite degrees a, b <= max_degree, row-major (max_degree+1)^2:
/// plain Gram entries sum_x W_x psi_a psi_b, and kernel entries
/// sum_{x,y} W_x psi_a(x) K(x,y) W_y psi_b(y), with compensated Gauss-Hermite weights W.
std::vector<double> hermite_gram_table(int max_degree, int order);
std::vector<double> hermite_kernel_table(int max_degree, int order,
                                         const std::function<double(double, double)>& kernel);

}  // namespace speclyap
