#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "speclyap/eigenbases.hpp"
#include "speclyap/spectral_core.hpp"

using namespace speclyap;

namespace {
DissipativeSpectrum spec_of(std::vector<double> l) { return DissipativeSpectrum::from_eigenvalues(std::move(l)); }
}  // namespace

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(spec_of({}), std::invalid_argument);
  CHECK_THROWS_AS(spec_of({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(spec_of({-2.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DissipativeSpectrum({DiskMode{}}, {-1.0, -2.0}), std::invalid_argument);
  const auto s = spec_of({-1.0, -1.0, -3.0});
  CHECK(s.gamma_eff() == 1.0);
  CHECK(s.truncated(2).size() == 2);
  CHECK_THROWS_AS(s.truncated(0), std::invalid_argument);
}

TEST_CASE("spectral solve examples") {
  auto sol = solve_spectral_lyapunov(spec_of({-1.0}), SymMatrix::from_rows({{2.0}}));
  CHECK(sol.P(0, 0) == 1.0);
  sol = solve_spectral_lyapunov(spec_of({-1.0, -2.0}), SymMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(sol.P(0, 0) == 0.5);
  CHECK(sol.P(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sol.P(1, 1) == 0.25);
  CHECK(sol.residual_rel <= 1e-14);
  CHECK_THROWS_AS(solve_spectral_lyapunov(spec_of({-1.0}), SymMatrix(2)), std::invalid_argument);
}

TEST_CASE("spectral solve matches dense oracle on random 4x4") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = oracle::random_instance(rng, 4);
    const auto P = solve_spectral_lyapunov(inst.spec, inst.Q).P;
    CHECK(relative_frobenius(P, solve_dense_lyapunov(inst.spec, inst.Q)) <= 1e-10);
  }
}

TEST_CASE("lyapunov_residual examples") {
  const auto s = spec_of({-1.0, -1.0});
  CHECK(lyapunov_residual(s, SymMatrix(2), SymMatrix(2)) == 0.0);
  const auto Q = SymMatrix::identity(2, 0.5);
  auto P = solve_spectral_lyapunov(s, Q).P;
  const double eps = 1e-6;
  P.set(0, 1, P(0, 1) + eps);
  CHECK(lyapunov_residual(s, Q, P) == doctest::Approx(2 * eps).epsilon(1e-9));
}

TEST_CASE("dense oracle examples") {
  CHECK(solve_dense_lyapunov(spec_of({-1.0}), SymMatrix::from_rows({{2.0}}))(0, 0) == doctest::Approx(1.0));
  const auto P = solve_dense_lyapunov(spec_of({-3.0, -5.0}), SymMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(P(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(std::abs(P(0, 0)) <= 1e-16);
  CHECK(std::abs(P(1, 1)) <= 1e-16);
  CHECK_THROWS_AS(solve_dense_lyapunov(DissipativeSpectrum::from_eigenvalues(std::vector<double>(65, -1.0)),
                                       SymMatrix(65)),
                  std::invalid_argument);
}

TEST_CASE("quadrature oracle examples") {
  const auto P = quadrature_oracle_covariance(spec_of({-1.0}), SymMatrix::from_rows({{2.0}}), 20.0, 2000);
  CHECK(std::abs(P(0, 0) - 1.0) <= 1e-8);
  const auto Z = quadrature_oracle_covariance(spec_of({-1.0, -2.0}), SymMatrix(2), 5.0, 10);
  CHECK(Z == SymMatrix(2));
  CHECK_THROWS_AS(quadrature_oracle_covariance(spec_of({-1.0}), SymMatrix(1), 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_oracle_covariance(spec_of({-1.0}), SymMatrix(1), 1.0, 1), std::invalid_argument);

  std::mt19937_64 rng(99);
  const auto inst = oracle::random_instance(rng, 4);
  const auto Pq = quadrature_oracle_covariance(inst.spec, inst.Q, 10.0 / inst.spec.gamma_eff(), 10000);
  CHECK(relative_frobenius(solve_spectral_lyapunov(inst.spec, inst.Q).P, Pq) <= 1e-6);
}

TEST_CASE("truncation bound examples") {
  auto b = truncation_bound(spec_of({-1.0, -10.0}), 1, 2.0);
  CHECK(b.coarse == 1.0);
  CHECK(b.improved == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(truncation_bound(spec_of({-1.0, -10.0}), 2, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(truncation_bound(spec_of({-1.0, -10.0}), 0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(truncation_bound(spec_of({-1.0, -10.0}), 1, -1.0), std::invalid_argument);

  const auto full = disk_spectrum(GeometryParams{1.0, 0.5, 1}, 200);
  const auto Q = SymMatrix::identity(200);
  const auto P = solve_spectral_lyapunov(full, Q).P;
  const auto PN = solve_spectral_lyapunov(full.truncated(20), Q.leading(20)).P;
  const double err = operator_norm_sym(P - PN.padded(200));
  b = truncation_bound(full, 20, 1.0);
  CHECK(err <= b.improved);
  CHECK(b.improved <= b.coarse);
}

TEST_CASE("semigroup check examples") {
  const auto s = spec_of({-1.0, -2.0, -4.0});
  const std::vector<double> c{1.0, -2.0, 0.5};
  auto r = semigroup_decay_check(s, c, 0.0);
  CHECK(r.lhs == doctest::Approx(5.25));
  CHECK(r.rhs == doctest::Approx(5.25));
  CHECK(r.holds());
  const std::vector<double> single{0.0, 3.0, 0.0};
  r = semigroup_decay_check(s, single, 0.7);
  CHECK(r.lhs == std::exp(2 * -2.0 * 0.7) * 9.0);
  CHECK_THROWS_AS(semigroup_decay_check(s, c, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(semigroup_decay_check(s, std::vector<double>{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("integral bound examples") {
  const std::vector<double> e1{1.0};
  auto r = integral_bound_check(spec_of({-1.0}), SymMatrix::from_rows({{2.0}}), e1, e1);
  CHECK(r.lhs == 1.0);
  CHECK(r.rhs == 1.0);
  CHECK(r.holds());
  const std::vector<double> phi{1.0, 0.0}, psi{0.0, 1.0};
  r = integral_bound_check(spec_of({-1.0, -2.0}), SymMatrix::identity(2, 3.0), phi, psi);
  CHECK(r.lhs == 0.0);
  CHECK(r.holds());
  CHECK_THROWS_AS(integral_bound_check(spec_of({-1.0, -2.0}), SymMatrix::identity(2), e1, psi),
                  std::invalid_argument);
}
