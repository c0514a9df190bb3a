// Acceptance gate: one line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "speclyap/commands.hpp"
#include "speclyap/eigenbases.hpp"
#include "speclyap/noise.hpp"
#include "speclyap/ou_simulator.hpp"
#include "speclyap/spectral_core.hpp"

using namespace speclyap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = time_limit <= 0 || secs < time_limit;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %d %-22s %s  %s  [%.2fs%s]\n", id, name, ok ? "PASS" : "FAIL", o.detail.c_str(), secs,
              in_time ? "" : " over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome lyapunov_balance() {
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = oracle::random_instance(rng, 1 + i % 32);
    worst = std::max(worst, solve_spectral_lyapunov(inst.spec, inst.Q).residual_rel);
  }
  return {worst <= 1e-12, fmt("max residual_rel %.3g over 100 instances", worst)};
}

Outcome oracle_triangle() {
  std::mt19937_64 rng(2);
  double dense = 0, quad = 0;
  for (int i = 0; i < 60; ++i) {
    const auto inst = oracle::random_instance(rng, 1 + i % 32);
    const auto P = solve_spectral_lyapunov(inst.spec, inst.Q).P;
    dense = std::max(dense, relative_frobenius(P, solve_dense_lyapunov(inst.spec, inst.Q)));
    quad = std::max(quad, relative_frobenius(
                              P, quadrature_oracle_covariance(inst.spec, inst.Q, 10.0 / inst.spec.gamma_eff(), 10000)));
  }
  return {dense <= 1e-10 && quad <= 1e-6, fmt("dense %.3g", dense) + fmt(", quadrature %.3g (60 instances)", quad)};
}

Outcome diagonal_law() {
  const GeometryParams p{1.0, 0.5, 2};
  double worst = 0;
  bool off_zero = true;
  for (Geometry g : {Geometry::disk, Geometry::oscillator, Geometry::sphere}) {
    const auto spec = make_spectrum(g, p, 25);
    const Basis b(g, p, spec);
    for (const NoiseSpec& ns : {NoiseSpec{WhiteNoise{1.0}}, NoiseSpec{DiagonalNoise{{}, 1.0, 1.0}}}) {
      const auto Q = project_noise(ns, b, QuadratureOrders{}).Q;
      const auto P = solve_spectral_lyapunov(spec, Q).P;
      off_zero = off_zero && P.is_diagonal();
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double ref = Q(k, k) / (2 * std::abs(spec.eigenvalue(k)));
        worst = std::max(worst, std::abs(P(k, k) - ref) / ref);
      }
    }
  }
  return {worst <= 1e-14 && off_zero,
          fmt("max diagonal rel error %.3g", worst) + (off_zero ? ", off-diagonals exactly 0" : ", nonzero off-diagonal")};
}

Outcome block_structure() {
  const GeometryParams p;
  const auto spec = disk_spectrum(p, 20);
  const Basis b(Geometry::disk, p, spec);
  const auto Q = project_noise(GaussianNoise{0.5}, b, QuadratureOrders{}).Q;
  const auto P = solve_spectral_lyapunov(spec, Q).P;
  const auto rq = block_structure_report(Q, spec.modes());
  const auto rp = block_structure_report(P, spec.modes());
  const double cq = rq.coupling_abs_m / rq.max_entry;
  const double cp = rp.coupling_abs_m / rp.max_entry;
  return {cq <= 1e-8 && cp <= 1e-8, fmt("|m| coupling / max: Q %.3g", cq) + fmt(", P %.3g", cp)};
}

Outcome truncation_bounds() {
  const GeometryParams p;
  const auto ref = disk_spectrum(p, 200);
  const auto Q = SymMatrix::identity(200);
  const auto P = solve_spectral_lyapunov(ref, Q).P;
  const double qn = operator_norm_sym(Q);
  bool ok = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::ostringstream os;
  for (std::size_t n : {10u, 20u, 40u, 80u}) {
    const auto PN = solve_spectral_lyapunov(ref.truncated(n), Q.leading(n)).P;
    const double err = operator_norm_sym(P - PN.padded(200));
    const auto b = truncation_bound(ref, n, qn);
    ok = ok && BoundCheck{err, b.improved}.holds() && BoundCheck{b.improved, b.coarse}.holds();
    const double x = std::log(std::abs(ref.eigenvalue(n))), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    os << "N=" << n << " err/improved=" << fmt("%.4f", err / b.improved) << " ";
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  ok = ok && slope <= -1.0 + 0.15;
  return {ok, os.str() + fmt("slope %.4f", slope)};
}

Outcome monte_carlo() {
  const GeometryParams p;
  const auto spec = disk_spectrum(p, 8);
  const auto Q = SymMatrix::identity(8);
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.n_paths = 64;
  cfg.seed = 20240601;
  cfg.burn_in = cfg.resolved_burn_in(spec.gamma_eff());
  cfg.n_steps = cfg.burn_in + 50000;
  cfg.threads = 0;
  const auto r = simulate(spec, Q, cfg);
  const auto c = compare_covariance(r.P_hat, r.std_error, solve_spectral_lyapunov(spec, Q).P);
  const bool ok = c.fraction_within >= 0.99 && c.max_diag_rel_error <= 0.05;
  return {ok, fmt("within 4 se %.4f", c.fraction_within) + fmt(", max |z| %.3f", c.max_z) +
                  fmt(", max diag rel error %.4f", c.max_diag_rel_error)};
}

Outcome special_functions() {
  double zero_err = 0;
  for (int m = 0; m <= 10; ++m) {
    const auto z = bessel_zeros(m, 20);
    for (int k = 1; k <= 20; ++k) zero_err = std::max(zero_err, std::abs(z[k - 1] - oracle::bessel_zero(m, k)));
  }
  const QuadratureOrders q;
  const GeometryParams p{1.0, 0.5, 2};
  const double gd = gram_matrix(Basis(Geometry::disk, p, disk_spectrum(p, 30)), q).defect;
  const double go = gram_matrix(Basis(Geometry::oscillator, p, oscillator_spectrum(p, 21)), q).defect;
  const double gs = gram_matrix(Basis(Geometry::sphere, p, sphere_spectrum(p, 6)), q).defect;
  const bool ok = zero_err <= 1e-12 && gd <= 1e-8 && go <= 1e-8 && gs <= 1e-8;
  return {ok, fmt("zeros %.3g", zero_err) + fmt("; gram defect disk %.3g", gd) + fmt(", oscillator %.3g", go) +
                  fmt(", sphere %.3g", gs)};
}

Outcome semigroup_integral() {
  const GeometryParams p;
  const auto spec = disk_spectrum(p, 50);
  std::mt19937_64 rng(8);
  const auto inst = oracle::random_instance(rng, 50);
  const auto P = solve_spectral_lyapunov(spec, inst.Q).P;
  const double qn = operator_norm_sym(inst.Q);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> t(0.0, 5.0);
  std::vector<double> a(50), b(50);
  int semi = 0, integ = 0;
  for (int s = 0; s < 1000; ++s) {
    for (auto& x : a) x = g(rng);
    if (!semigroup_decay_check(spec, a, t(rng)).holds()) ++semi;
  }
  for (int s = 0; s < 1000; ++s) {
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    if (!integral_bound_check(spec, P, qn, a, b).holds()) ++integ;
  }
  return {semi == 0 && integ == 0,
          "violations: semigroup " + std::to_string(semi) + "/1000, integral " + std::to_string(integ) + "/1000"};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> runs{
      {"solve", "--set", "noise.kind=kernel-gaussian", "--set", "cutoff=12", "--set", "quad.radial=32", "--set",
       "quad.angular=48", "--seed", "7"},
      {"simulate", "--set", "cutoff=6", "--set", "sim.paths=12", "--set", "sim.steps=5000", "--seed", "7"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& args : runs) {
    std::string ref;
    bool same = true;
    for (const char* threads : {"1", "8", "1", "8"}) {
      auto a = args;
      a.push_back("--threads");
      a.push_back(threads);
      std::string text;
      const int code = run_cli(a, &text);
      if (code != 0) same = false;
      if (ref.empty())
        ref = text;
      else if (text != ref)
        same = false;
    }
    ok = ok && same && !ref.empty();
    detail += args[0] + (same ? " identical " : " DIFFERS ");
  }
  return {ok, detail + "across threads 1/8, two reruns each"};
}

}  // namespace

int main() {
  run(1, "lyapunov-balance", 5, lyapunov_balance);
  run(2, "oracle-triangle", 30, oracle_triangle);
  run(3, "diagonal-law", 0, diagonal_law);
  run(4, "block-structure", 0, block_structure);
  run(5, "truncation-bounds", 60, truncation_bounds);
  run(6, "monte-carlo", 60, monte_carlo);
  run(7, "special-functions", 0, special_functions);
  run(8, "semigroup-integral", 0, semigroup_integral);
  run(9, "determinism", 0, determinism);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
