#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "speclyap/eigenbases.hpp"
#include "speclyap/ou_simulator.hpp"

using namespace speclyap;

namespace {
DissipativeSpectrum spec_of(std::vector<double> l) { return DissipativeSpectrum::from_eigenvalues(std::move(l)); }
}  // namespace

TEST_CASE("exact step covariance limits") {
  const auto s = spec_of({-1.0});
  const auto Q = SymMatrix::from_rows({{2.0}});
  CHECK(exact_step_covariance(s, Q, 60.0)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  // First-order regime: |lambda_j + lambda_k| dt / 2 stays below 1e-6.
  std::mt19937_64 rng(5);
  const auto inst = oracle::random_instance(rng, 5, -0.9, -0.1);
  const auto S = exact_step_covariance(inst.spec, inst.Q, 1e-6);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(std::abs(S(j, k) - inst.Q(j, k) * 1e-6) <= 1e-6 * std::abs(inst.Q(j, k) * 1e-6) + 1e-300);
  CHECK_THROWS_AS(exact_step_covariance(s, Q, 0.0), std::invalid_argument);
}

TEST_CASE("exact step covariance matches Simpson on [0, dt]") {
  std::mt19937_64 rng(17);
  const auto inst = oracle::random_instance(rng, 6);
  const double dt = 0.3;
  const auto S = exact_step_covariance(inst.spec, inst.Q, dt);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t k = 0; k < 6; ++k) {
      const double r = inst.spec.eigenvalue(j) + inst.spec.eigenvalue(k);
      const double ref = inst.Q(j, k) * oracle::simpson([r](double t) { return std::exp(r * t); }, 0.0, dt, 2000);
      CHECK(std::abs(S(j, k) - ref) <= 1e-8 * std::max(1e-3, std::abs(ref)));
    }
}

TEST_CASE("cholesky with jitter") {
  double jitter = -1;
  auto L = cholesky_with_jitter(SymMatrix(3), &jitter);
  CHECK(L == std::vector<double>(9, 0.0));
  CHECK(jitter == 0.0);
  const auto A = SymMatrix::from_rows({{4, 2}, {2, 3}});
  L = cholesky_with_jitter(A, &jitter);
  CHECK(L[0] == 2.0);
  CHECK(L[1] == 0.0);
  CHECK(L[2] == 1.0);
  CHECK(L[3] == doctest::Approx(std::sqrt(2.0)));
  CHECK(jitter == 0.0);
  // Rank-deficient PSD matrix succeeds with jitter far below 1e-12 trace.
  const auto R = SymMatrix::from_rows({{1, 1}, {1, 1}});
  L = cholesky_with_jitter(R, &jitter);
  CHECK(jitter <= 1e-12 * R.trace());
  CHECK_THROWS_AS(cholesky_with_jitter(SymMatrix::from_rows({{1, 2}, {2, 1}})), std::runtime_error);
}

TEST_CASE("path seeds are distinct and reproducible") {
  CHECK(path_seed(1, 0) == path_seed(1, 0));
  CHECK(path_seed(1, 0) != path_seed(1, 1));
  CHECK(path_seed(1, 0) != path_seed(2, 0));
}

TEST_CASE("zero noise gives zero covariance") {
  SimConfig cfg;
  cfg.n_steps = 500;
  const auto r = simulate(spec_of({-1.0, -2.0}), SymMatrix(2), cfg);
  CHECK(r.P_hat == SymMatrix(2));
  CHECK(compare_covariance(r.P_hat, r.std_error, SymMatrix(2)).pass);
}

TEST_CASE("scalar OU matches the closed form") {
  SimConfig cfg;
  cfg.dt = 0.5;
  cfg.n_paths = 10;
  cfg.n_steps = 10100;
  cfg.burn_in = 100;
  cfg.seed = 42;
  const auto r = simulate(spec_of({-1.0}), SymMatrix::from_rows({{2.0}}), cfg);
  CHECK(r.samples_per_path == 10000);
  CHECK(std::abs(r.P_hat(0, 0) - 1.0) <= 3.0 * r.std_error(0, 0));
}

TEST_CASE("8-mode disk diagonal within 3 standard errors") {
  const GeometryParams p{1.0, 0.5, 1};
  const auto spec = disk_spectrum(p, 8);
  SimConfig cfg;
  cfg.seed = 3;
  cfg.n_paths = 16;
  cfg.n_steps = 20000;
  const auto r = simulate(spec, SymMatrix::identity(8), cfg);
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(std::abs(r.P_hat(k, k) - 1.0 / (2 * std::abs(spec.eigenvalue(k)))) <= 3.0 * r.std_error(k, k));
}

TEST_CASE("simulation is independent of thread count") {
  std::mt19937_64 rng(8);
  const auto inst = oracle::random_instance(rng, 5, -3.0, -0.5);
  SimConfig cfg;
  cfg.n_steps = 2000;
  cfg.n_paths = 7;
  cfg.seed = 123;
  const auto a = simulate(inst.spec, inst.Q, cfg);
  cfg.threads = 4;
  const auto b = simulate(inst.spec, inst.Q, cfg);
  CHECK(a.P_hat == b.P_hat);
  CHECK(a.std_error == b.std_error);
  cfg.seed = 124;
  CHECK_FALSE(simulate(inst.spec, inst.Q, cfg).P_hat == a.P_hat);
}

TEST_CASE("simulate argument checks") {
  SimConfig cfg;
  const auto s = spec_of({-1.0});
  const auto Q = SymMatrix::identity(1);
  cfg.n_steps = 10;
  cfg.burn_in = 0;
  CHECK_THROWS_AS(simulate(s, Q, cfg), std::invalid_argument);
  cfg.n_steps = 100;
  cfg.burn_in = 100;
  CHECK_THROWS_AS(simulate(s, Q, cfg), std::invalid_argument);
  cfg.burn_in = -1;
  CHECK(cfg.resolved_burn_in(1.0) == 100);
  CHECK_THROWS_AS(simulate(s, SymMatrix::identity(2), cfg), std::invalid_argument);
}

TEST_CASE("compare_covariance") {
  const auto P = SymMatrix::from_rows({{1.0, 0.2}, {0.2, 0.5}});
  const auto se = SymMatrix::from_rows({{0.01, 0.01}, {0.01, 0.01}});
  auto c = compare_covariance(P, se, P);
  CHECK(c.pass);
  CHECK(c.max_z == 0.0);
  CHECK(c.entries == 3);
  auto off = P;
  off.set(0, 1, 0.2 + 10 * 0.01);
  c = compare_covariance(off, se, P);
  CHECK_FALSE(c.pass);
  CHECK(c.worst == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(c.max_z == doctest::Approx(10.0));
  c = compare_covariance(off, SymMatrix(2), P);
  CHECK_FALSE(c.pass);
}
