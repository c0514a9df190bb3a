#include "speclyap/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace speclyap {

DissipativeSpectrum::DissipativeSpectrum(std::vector<ModeIndex> modes, std::vector<double> eigenvalues)
    : modes_(std::move(modes)), eigenvalues_(std::move(eigenvalues)) {
  if (modes_.size() != eigenvalues_.size())
    throw std::invalid_argument("DissipativeSpectrum: modes and eigenvalues differ in length");
  if (eigenvalues_.empty()) throw std::invalid_argument("DissipativeSpectrum: empty spectrum");
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
    if (!(eigenvalues_[k] < 0.0))
      throw std::invalid_argument("DissipativeSpectrum: eigenvalue " + std::to_string(k) +
                                  " is not strictly negative");
    if (k > 0 && eigenvalues_[k] > eigenvalues_[k - 1])
      throw std::invalid_argument("DissipativeSpectrum: eigenvalues not sorted descending at " +
                                  std::to_string(k));
  }
}

DissipativeSpectrum DissipativeSpectrum::from_eigenvalues(std::vector<double> eigenvalues) {
  std::vector<ModeIndex> modes;
  modes.reserve(eigenvalues.size());
  for (std::size_t k = 0; k < eigenvalues.size(); ++k)
    modes.emplace_back(OscillatorMode{{static_cast<int>(k)}});
  return DissipativeSpectrum(std::move(modes), std::move(eigenvalues));
}

DissipativeSpectrum DissipativeSpectrum::truncated(std::size_t n) const {
  if (n == 0 || n > size()) throw std::invalid_argument("DissipativeSpectrum::truncated: bad size");
  return DissipativeSpectrum({modes_.begin(), modes_.begin() + static_cast<std::ptrdiff_t>(n)},
                             {eigenvalues_.begin(), eigenvalues_.begin() + static_cast<std::ptrdiff_t>(n)});
}

namespace {
void require_dim(const DissipativeSpectrum& spec, const SymMatrix& m, const char* what) {
  if (m.dim() != spec.size())
    throw std::invalid_argument(std::string(what) + ": matrix dimension " + std::to_string(m.dim()) +
                                " does not match " + std::to_string(spec.size()) + " modes");
}
}  // namespace

LyapunovSolution solve_spectral_lyapunov(const DissipativeSpectrum& spec, const SymMatrix& Q) {
  require_dim(spec, Q, "solve_spectral_lyapunov");
  const auto& lam = spec.eigenvalues();
  const std::size_t n = spec.size();
  LyapunovSolution sol{SymMatrix(n)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) sol.P.set(j, k, Q(j, k) / (-(lam[j] + lam[k])));
  sol.residual_rel = lyapunov_residual(spec, Q, sol.P);
  sol.min_eigenvalue = psd_check(sol.P, 0.0).min_eigenvalue;
  return sol;
}

double lyapunov_residual(const DissipativeSpectrum& spec, const SymMatrix& Q, const SymMatrix& P) {
  require_dim(spec, Q, "lyapunov_residual");
  require_dim(spec, P, "lyapunov_residual");
  const auto& lam = spec.eigenvalues();
  double worst = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j)
    for (std::size_t k = 0; k < spec.size(); ++k)
      worst = std::max(worst, std::abs(lam[j] * P(j, k) + P(j, k) * lam[k] + Q(j, k)));
  return worst / std::max(1.0, Q.max_abs());
}

SymMatrix solve_dense_lyapunov(const DissipativeSpectrum& spec, const SymMatrix& Q) {
  require_dim(spec, Q, "solve_dense_lyapunov");
  const std::size_t n = spec.size();
  if (n > 64) throw std::invalid_argument("solve_dense_lyapunov: oracle limited to dim <= 64");
  const std::size_t N = n * n;
  const auto& lam = spec.eigenvalues();

  // vec() is column-major: index(i, j) = j*n + i.
  // (I (x) L)_{(i,j),(i',j')} = L_{ii'} d_{jj'},  (L (x) I)_{(i,j),(i',j')} = d_{ii'} L_{jj'}.
  std::vector<double> A(N * N, 0.0);
  std::vector<double> b(N);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = j * n + i;
      for (std::size_t jp = 0; jp < n; ++jp) {
        for (std::size_t ip = 0; ip < n; ++ip) {
          const std::size_t col = jp * n + ip;
          double v = 0.0;
          if (j == jp && i == ip) v += lam[i];
          if (i == ip && j == jp) v += lam[j];
          A[row * N + col] = v;
        }
      }
      b[row] = -Q(i, j);
    }
  }

  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    double best = std::abs(A[c * N + c]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double v = std::abs(A[r * N + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::logic_error("solve_dense_lyapunov: singular Kronecker system");
    if (piv != c) {
      for (std::size_t k = 0; k < N; ++k) std::swap(A[c * N + k], A[piv * N + k]);
      std::swap(b[c], b[piv]);
    }
    const double d = A[c * N + c];
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = A[r * N + c] / d;
      if (f == 0.0) continue;
      for (std::size_t k = c; k < N; ++k) A[r * N + k] -= f * A[c * N + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(N);
  for (std::size_t r = N; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < N; ++k) s -= A[r * N + k] * x[k];
    x[r] = s / A[r * N + r];
  }

  std::vector<double> rows(N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i * n + j] = x[j * n + i];
  return SymMatrix::from_row_major(n, rows);
}

SymMatrix quadrature_oracle_covariance(const DissipativeSpectrum& spec, const SymMatrix& Q,
                                       double horizon, int steps) {
  require_dim(spec, Q, "quadrature_oracle_covariance");
  if (!(horizon > 0.0)) throw std::invalid_argument("quadrature_oracle_covariance: horizon must be > 0");
  if (steps < 2) throw std::invalid_argument("quadrature_oracle_covariance: steps must be >= 2");
  if (steps % 2 != 0) ++steps;
  const double h = horizon / steps;
  const auto& lam = spec.eigenvalues();
  const std::size_t n = spec.size();
  SymMatrix out(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      const double q = Q(j, k);
      if (q == 0.0) continue;
      const double rate = lam[j] + lam[k];
      double s = 1.0 + std::exp(rate * horizon);
      for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * std::exp(rate * (i * h));
      const double body = s * h / 3.0;
      const double tail = std::exp(rate * horizon) / (-rate);
      out.set(j, k, q * (body + tail));
    }
  }
  return out;
}

TruncationBound truncation_bound(const DissipativeSpectrum& full_spec, std::size_t n, double q_norm) {
  if (n < 1 || n >= full_spec.size())
    throw std::invalid_argument("truncation_bound: N must satisfy 1 <= N < mode count");
  if (!(q_norm >= 0.0)) throw std::invalid_argument("truncation_bound: ||Q|| must be >= 0");
  return {q_norm / (2.0 * full_spec.gamma_eff()), q_norm / (2.0 * std::abs(full_spec.eigenvalue(n)))};
}

bool BoundCheck::holds() const {
  return lhs <= rhs * (1.0 + 64.0 * std::numeric_limits<double>::epsilon());
}

BoundCheck semigroup_decay_check(const DissipativeSpectrum& spec, std::span<const double> coeffs,
                                 double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup_decay_check: t must be >= 0");
  if (coeffs.size() != spec.size())
    throw std::invalid_argument("semigroup_decay_check: coefficient count does not match modes");
  double lhs = 0.0;
  double norm2 = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double c2 = coeffs[k] * coeffs[k];
    lhs += std::exp(2.0 * spec.eigenvalue(k) * t) * c2;
    norm2 += c2;
  }
  return {lhs, std::exp(2.0 * spec.eigenvalue(0) * t) * norm2};
}

BoundCheck integral_bound_check(const DissipativeSpectrum& spec, const SymMatrix& P, double q_norm,
                                std::span<const double> phi, std::span<const double> psi) {
  require_dim(spec, P, "integral_bound_check");
  if (phi.size() != spec.size() || psi.size() != spec.size())
    throw std::invalid_argument("integral_bound_check: vector length does not match modes");
  const std::size_t n = spec.size();
  double value = 0.0;
  double nphi = 0.0;
  double npsi = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < n; ++k) row += P(j, k) * psi[k];
    value += phi[j] * row;
    nphi += phi[j] * phi[j];
    npsi += psi[j] * psi[j];
  }
  return {std::abs(value), std::sqrt(nphi) * std::sqrt(npsi) * q_norm / (2.0 * spec.gamma_eff())};
}

BoundCheck integral_bound_check(const DissipativeSpectrum& spec, const SymMatrix& Q,
                                std::span<const double> phi, std::span<const double> psi) {
  const auto sol = solve_spectral_lyapunov(spec, Q);
  return integral_bound_check(spec, sol.P, operator_norm_sym(Q), phi, psi);
}

}  // namespace speclyap
