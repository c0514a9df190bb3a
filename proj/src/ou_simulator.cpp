#include "speclyap/ou_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "speclyap/parallel.hpp"

namespace speclyap {

namespace {

constexpr int kBatchesPerPath = 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool try_cholesky(const SymMatrix& S, double jitter, std::vector<double>& L) {
  const std::size_t n = S.dim();
  L.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = S(i, j) + (i == j ? jitter : 0.0);
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  return true;
}

}  // namespace

long SimConfig::resolved_burn_in(double gamma_eff) const {
  if (burn_in >= 0) return burn_in;
  return static_cast<long>(std::ceil(10.0 / (gamma_eff * dt)));
}

SymMatrix exact_step_covariance(const DissipativeSpectrum& spec, const SymMatrix& Q, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("exact_step_covariance: dt must be > 0");
  if (Q.dim() != spec.size()) throw std::invalid_argument("exact_step_covariance: dimension mismatch");
  const auto& lam = spec.eigenvalues();
  SymMatrix S(spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j)
    for (std::size_t k = j; k < spec.size(); ++k) {
      const double rate = lam[j] + lam[k];
      S.set(j, k, Q(j, k) * std::expm1(rate * dt) / rate);
    }
  return S;
}

std::vector<double> cholesky_with_jitter(const SymMatrix& S, double* jitter_used) {
  std::vector<double> L;
  if (jitter_used) *jitter_used = 0.0;
  if (S.max_abs() == 0.0) {
    L.assign(S.dim() * S.dim(), 0.0);
    return L;
  }
  if (try_cholesky(S, 0.0, L)) return L;
  const double trace = S.trace();
  if (!(trace > 0.0)) throw std::runtime_error("cholesky_with_jitter: step covariance has non-positive trace");
  double jitter = 1e-15 * trace;
  for (int attempt = 0; attempt < 4; ++attempt, jitter *= 10.0) {
    if (try_cholesky(S, jitter, L)) {
      if (jitter_used) *jitter_used = jitter;
      return L;
    }
  }
  throw std::runtime_error("cholesky_with_jitter: step covariance is not positive semidefinite "
                           "(badly conditioned Q)");
}

std::uint64_t path_seed(std::uint64_t master, std::uint64_t path) {
  return splitmix64(splitmix64(master) ^ splitmix64(path + 0x632BE59BD9B4E019ull));
}

SimResult simulate(const DissipativeSpectrum& spec, const SymMatrix& Q, const SimConfig& cfg) {
  if (Q.dim() != spec.size()) throw std::invalid_argument("simulate: dimension mismatch");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be > 0");
  if (cfg.n_steps < 1) throw std::invalid_argument("simulate: n_steps must be >= 1");
  if (cfg.n_paths < 1) throw std::invalid_argument("simulate: n_paths must be >= 1");
  const long burn = cfg.resolved_burn_in(spec.gamma_eff());
  if (burn >= cfg.n_steps) throw std::invalid_argument("simulate: burn_in must be < n_steps");
  const long recorded = cfg.n_steps - burn;
  if (recorded < kBatchesPerPath)
    throw std::invalid_argument("simulate: need at least 16 recorded steps per path for batch means");

  SimResult res;
  res.burn_in = burn;
  res.samples_per_path = recorded;
  if (cfg.dt * spec.gamma_eff() > 10.0)
    res.warnings.emplace_back("dt * gamma_eff > 10: a single step already equilibrates every mode");

  const std::size_t n = spec.size();
  const std::size_t tri = n * (n + 1) / 2;
  const SymMatrix S = exact_step_covariance(spec, Q, cfg.dt);
  const std::vector<double> L = cholesky_with_jitter(S, &res.jitter);
  std::vector<double> decay(n);
  for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(spec.eigenvalue(i) * cfg.dt);

  // Batch b of a path covers recorded steps [b*recorded/16, (b+1)*recorded/16).
  std::vector<long> batch_start(kBatchesPerPath + 1);
  for (int b = 0; b <= kBatchesPerPath; ++b) batch_start[b] = b * recorded / kBatchesPerPath;

  // sums[path][batch][tri]
  std::vector<double> sums(static_cast<std::size_t>(cfg.n_paths) * kBatchesPerPath * tri, 0.0);
  parallel_for(static_cast<std::size_t>(cfg.n_paths), cfg.threads, [&](std::size_t p) {
    std::mt19937_64 engine(path_seed(cfg.seed, p));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(n, 0.0), z(n), next(n);
    double* base = &sums[p * kBatchesPerPath * tri];
    int batch = 0;
    for (long step = 0; step < cfg.n_steps; ++step) {
      for (std::size_t i = 0; i < n; ++i) z[i] = normal(engine);
      for (std::size_t i = 0; i < n; ++i) {
        double s = decay[i] * x[i];
        for (std::size_t j = 0; j <= i; ++j) s += L[i * n + j] * z[j];
        next[i] = s;
      }
      x.swap(next);
      if (step < burn) continue;
      const long r = step - burn;
      while (r >= batch_start[batch + 1]) ++batch;
      double* acc = base + static_cast<std::size_t>(batch) * tri;
      std::size_t t = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) acc[t++] += x[i] * x[j];
    }
  });

  const std::size_t nbatches = static_cast<std::size_t>(cfg.n_paths) * kBatchesPerPath;
  std::vector<double> total(tri, 0.0);
  for (std::size_t b = 0; b < nbatches; ++b)
    for (std::size_t t = 0; t < tri; ++t) total[t] += sums[b * tri + t];
  const double count = static_cast<double>(cfg.n_paths) * static_cast<double>(recorded);

  std::vector<double> mean_of_means(tri, 0.0);
  std::vector<double> var(tri, 0.0);
  auto batch_len = [&](std::size_t b) {
    const int local = static_cast<int>(b % kBatchesPerPath);
    return static_cast<double>(batch_start[local + 1] - batch_start[local]);
  };
  for (std::size_t b = 0; b < nbatches; ++b)
    for (std::size_t t = 0; t < tri; ++t) mean_of_means[t] += sums[b * tri + t] / batch_len(b);
  for (double& v : mean_of_means) v /= static_cast<double>(nbatches);
  for (std::size_t b = 0; b < nbatches; ++b)
    for (std::size_t t = 0; t < tri; ++t) {
      const double d = sums[b * tri + t] / batch_len(b) - mean_of_means[t];
      var[t] += d * d;
    }

  res.P_hat = SymMatrix(n);
  res.std_error = SymMatrix(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++t) {
      res.P_hat.set(i, j, total[t] / count);
      const double sd = nbatches > 1 ? std::sqrt(var[t] / static_cast<double>(nbatches - 1)) : 0.0;
      res.std_error.set(i, j, sd / std::sqrt(static_cast<double>(nbatches)));
    }
  return res;
}

CompareReport compare_covariance(const SymMatrix& P_hat, const SymMatrix& std_error, const SymMatrix& P_ref,
                                 double z_limit, double min_fraction) {
  if (P_hat.dim() != P_ref.dim() || std_error.dim() != P_ref.dim())
    throw std::invalid_argument("compare_covariance: dimension mismatch");
  CompareReport r;
  const std::size_t n = P_ref.dim();
  std::size_t within = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double diff = std::abs(P_hat(i, j) - P_ref(i, j));
      double z;
      if (std_error(i, j) > 0.0)
        z = diff / std_error(i, j);
      else
        z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      if (r.entries == 0 || z > r.max_z) {
        r.max_z = z;
        r.worst = {i, j};
      }
      if (z <= z_limit) ++within;
      ++r.entries;
      if (i == j) {
        const double ref = std::abs(P_ref(i, i));
        const double rel = ref > 0.0 ? diff / ref : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        r.max_diag_rel_error = std::max(r.max_diag_rel_error, rel);
      }
    }
  r.fraction_within = r.entries ? static_cast<double>(within) / static_cast<double>(r.entries) : 1.0;
  r.pass = r.fraction_within >= min_fraction;
  return r;
}

}  // namespace speclyap
