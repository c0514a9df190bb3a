#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "speclyap/eigenbases.hpp"
#include "speclyap/sym_matrix.hpp"

namespace speclyap {

/// Q = sigma2 * I in the orthonormal eigenbasis.
struct WhiteNoise {
  double sigma2 = 1.0;
};

/// Diagonal Q. Explicit per-mode values when `values` is non-empty, otherwise the
/// decay law q_k = c (1 + |lambda_k|)^(-p).
struct DiagonalNoise {
  std::vector<double> values;
  double c = 1.0;
  double p = 1.0;
};

/// Pointwise kernel K(x, y) evaluated on quadrature nodes.
struct KernelNoise {
  std::function<double(const GridPoint&, const GridPoint&)> kernel;
};

/// Rotation-invariant kernel K(x, y) = profile(separation): Euclidean distance on the
/// disk and in R^d, geodesic angle on the sphere.
struct IsotropicNoise {
  std::function<double(double)> profile;
};

/// K(x, y) = exp(-|x - y|^2 / lengthscale^2) in ambient coordinates (chordal on the sphere).
struct GaussianNoise {
  double lengthscale = 0.5;
};

using NoiseSpec = std::variant<WhiteNoise, DiagonalNoise, KernelNoise, IsotropicNoise, GaussianNoise>;

struct ProjectionOptions {
  unsigned threads = 1;
  /// Replace negative eigenvalues of a projected kernel by zero.
  bool clip_negative = false;
  /// Kernel projections are quadratic in node count; refuse grids larger than this.
  std::size_t max_nodes = 20000;
};

struct NoiseProjection {
  SymMatrix Q;
  PsdCheck psd;
  std::vector<std::string> warnings;
};

/// (Q_N)_jk = <phi_j, Q phi_k>. Kernel cases use tensor quadrature on the basis
/// geometry and are symmetrized; a failed PSD check (tol 1e-8 ||Q||) is a warning.
NoiseProjection project_noise(const NoiseSpec& spec, const Basis& basis, const QuadratureOrders& orders,
                              const ProjectionOptions& options = {});

/// Kernel given as a dense table over flat grid node indices (see GridPoint::index).
KernelNoise table_kernel(std::vector<double> values, std::size_t node_count);

struct BlockReport {
  double coupling_abs_m = 0.0;   ///< max |entry| between different |m|
  double coupling_signed = 0.0;  ///< max |entry| between equal |m|, opposite cos/sin member
  double max_entry = 0.0;
  double threshold = 0.0;        ///< 1e-8 * max_entry
  bool block_diagonal = true;
  std::pair<std::size_t, std::size_t> worst{0, 0};
};

/// Azimuthal block structure of a disk or sphere matrix. Throws std::invalid_argument
/// for oscillator modes.
BlockReport block_structure_report(const SymMatrix& M, const std::vector<ModeIndex>& modes);

}  // namespace speclyap
