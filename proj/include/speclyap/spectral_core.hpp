#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "speclyap/mode_index.hpp"
#include "speclyap/sym_matrix.hpp"

namespace speclyap {

/// Ordered list of strictly negative eigenvalues of a self-adjoint dissipative
/// generator, paired with their mode indices. Eigenvalues are non-increasing, so
/// eigenvalues()[0] is the slowest mode and gamma_eff() = -eigenvalues()[0].
class DissipativeSpectrum {
 public:
  DissipativeSpectrum() = default;
  /// Throws std::invalid_argument on length mismatch, a non-negative eigenvalue,
  /// an ascending pair, or an empty list.
  DissipativeSpectrum(std::vector<ModeIndex> modes, std::vector<double> eigenvalues);
  /// Spectrum without geometric meaning (modes default to 1-D oscillator labels).
  static DissipativeSpectrum from_eigenvalues(std::vector<double> eigenvalues);

  std::size_t size() const { return eigenvalues_.size(); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t k) const { return eigenvalues_[k]; }
  double gamma_eff() const { return -eigenvalues_.front(); }

  /// The first n modes (nested truncation).
  DissipativeSpectrum truncated(std::size_t n) const;

 private:
  std::vector<ModeIndex> modes_;
  std::vector<double> eigenvalues_;
};

/// tol_psd: positivity tolerance relative to ||P||_op.
inline constexpr double kPsdRelTol = 1e-10;

struct LyapunovSolution {
  SymMatrix P;
  double residual_rel = 0.0;
  double min_eigenvalue = 0.0;
};

/// P_jk = Q_jk / (-(lambda_j + lambda_k)).
LyapunovSolution solve_spectral_lyapunov(const DissipativeSpectrum& spec, const SymMatrix& Q);

/// max_jk |lambda_j P_jk + P_jk lambda_k + Q_jk| / max(1, max|Q_jk|).
double lyapunov_residual(const DissipativeSpectrum& spec, const SymMatrix& Q, const SymMatrix& P);

/// Independent oracle: assembles the n^2 x n^2 Kronecker-sum system
/// (I (x) Lambda + Lambda (x) I) vec(P) = -vec(Q) and solves it with partial-pivot LU.
/// Limited to dim <= 64.
SymMatrix solve_dense_lyapunov(const DissipativeSpectrum& spec, const SymMatrix& Q);

/// Entrywise composite Simpson on [0, horizon] of exp((l_j+l_k) t) Q_jk, plus the
/// exact tail beyond the horizon. `steps` is rounded up to the next even number.
SymMatrix quadrature_oracle_covariance(const DissipativeSpectrum& spec, const SymMatrix& Q,
                                       double horizon, int steps);

struct TruncationBound {
  double coarse = 0.0;
  double improved = 0.0;
};

/// coarse = ||Q||/(2 gamma_eff); improved = ||Q||/(2 |lambda_{N+1}|), 1 <= N < size.
TruncationBound truncation_bound(const DissipativeSpectrum& full_spec, std::size_t n,
                                 double q_norm);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs <= rhs up to a few ulps of rhs.
  bool holds() const;
};

/// lhs = sum exp(2 l_k t) c_k^2, rhs = exp(2 l_1 t) sum c_k^2.
BoundCheck semigroup_decay_check(const DissipativeSpectrum& spec, std::span<const double> coeffs,
                                 double t);

/// lhs = |phi^T P psi|, rhs = |phi| |psi| ||Q||_op / (2 gamma_eff).
BoundCheck integral_bound_check(const DissipativeSpectrum& spec, const SymMatrix& Q,
                                std::span<const double> phi, std::span<const double> psi);

/// Same check with a precomputed P and ||Q||_op, for sweeps over many vectors.
BoundCheck integral_bound_check(const DissipativeSpectrum& spec, const SymMatrix& P,
                                double q_norm, std::span<const double> phi,
                                std::span<const double> psi);

}  // namespace speclyap
