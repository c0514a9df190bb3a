#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speclyap/spectral_core.hpp"
#include "speclyap/sym_matrix.hpp"

namespace speclyap {

struct SimConfig {
  double dt = 0.1;
  long n_steps = 20000;  ///< total steps per path, burn-in included
  long burn_in = -1;     ///< negative: ceil(10 / (gamma_eff dt))
  int n_paths = 16;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  long resolved_burn_in(double gamma_eff) const;
};

/// S_jk = Q_jk (exp((l_j + l_k) dt) - 1) / (l_j + l_k): covariance of the noise
/// accumulated over one exact transition step.
SymMatrix exact_step_covariance(const DissipativeSpectrum& spec, const SymMatrix& Q, double dt);

/// Lower Cholesky factor (row-major) of a PSD matrix. Adds jitter 1e-15 trace,
/// growing x10, for at most 4 attempts; the zero matrix factors to zero.
/// Throws std::runtime_error when every attempt fails.
std::vector<double> cholesky_with_jitter(const SymMatrix& S, double* jitter_used = nullptr);

/// Seed of path `path` derived from the master seed by a SplitMix64 counter split.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t path);

struct SimResult {
  SymMatrix P_hat;
  SymMatrix std_error;
  long burn_in = 0;
  long samples_per_path = 0;
  double jitter = 0.0;
  std::vector<std::string> warnings;
};

/// Exact transition X <- exp(Lambda dt) X + eta, eta ~ N(0, S), from X = 0.
/// P_hat averages X X^T over paths and post-burn-in steps; the standard error
/// comes from 16 batch means per path. Bitwise reproducible for a given
/// (seed, n_paths, n_steps) whatever the thread count.
SimResult simulate(const DissipativeSpectrum& spec, const SymMatrix& Q, const SimConfig& cfg);

struct CompareReport {
  double max_z = 0.0;
  std::pair<std::size_t, std::size_t> worst{0, 0};
  double fraction_within = 1.0;  ///< entries (upper triangle) with z <= z_limit
  double max_diag_rel_error = 0.0;
  std::size_t entries = 0;
  bool pass = true;
};

/// z_jk = |P_hat - P_ref| / stderr (stderr == 0 requires exact equality).
/// Pass iff at least 99% of entries have z <= 4.
CompareReport compare_covariance(const SymMatrix& P_hat, const SymMatrix& std_error, const SymMatrix& P_ref,
                                 double z_limit = 4.0, double min_fraction = 0.99);

}  // namespace speclyap
