#include "speclyap/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <variant>

namespace speclyap {

namespace {

out::Value mode_json(const ModeIndex& mode, double eigenvalue) {
  auto indices = out::Value::object();
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DiskMode>) {
          indices["m"] = m.m;
          indices["k"] = m.k;
          indices["parity"] = m.parity == Parity::cos ? "cos" : "sin";
        } else if constexpr (std::is_same_v<T, OscillatorMode>) {
          auto n = out::Value::array();
          for (int v : m.n) n.push_back(v);
          indices["n"] = n;
        } else {
          indices["l"] = m.l;
          indices["m"] = m.m;
        }
      },
      mode);
  auto v = out::Value::object();
  v["geometry"] = geometry_name(geometry_of(mode));
  v["indices"] = indices;
  v["eigenvalue"] = eigenvalue;
  return v;
}

out::Value modes_json(const DissipativeSpectrum& spec) {
  auto a = out::Value::array();
  for (std::size_t k = 0; k < spec.size(); ++k) a.push_back(mode_json(spec.modes()[k], spec.eigenvalue(k)));
  return a;
}

out::Value strings_json(const std::vector<std::string>& s) {
  auto a = out::Value::array();
  for (const auto& x : s) a.push_back(x);
  return a;
}

const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::white:
      return "white";
    case NoiseKind::diagonal:
      return "diagonal";
    case NoiseKind::kernel_gaussian:
      return "kernel-gaussian";
    case NoiseKind::kernel_custom_table:
      return "kernel-custom-table";
    case NoiseKind::none:
      return "none";
  }
  return "?";
}

bool is_kernel(NoiseKind k) { return k == NoiseKind::kernel_gaussian || k == NoiseKind::kernel_custom_table; }

NoiseProjection project(const RunConfig& cfg, const Basis& basis) {
  if (cfg.noise.kind == NoiseKind::none) {
    NoiseProjection np;
    np.Q = SymMatrix(basis.size());
    np.psd = PsdCheck{true, 0.0};
    return np;
  }
  ProjectionOptions opt;
  opt.threads = cfg.threads;
  opt.clip_negative = cfg.noise.clip;
  return project_noise(make_noise_spec(cfg), basis, cfg.quad, opt);
}

out::Value block_json(const BlockReport& r) {
  auto v = out::Value::object();
  v["block_diagonal"] = r.block_diagonal;
  v["coupling_abs_m"] = r.coupling_abs_m;
  v["coupling_signed"] = r.coupling_signed;
  v["max_entry"] = r.max_entry;
  v["threshold"] = r.threshold;
  auto worst = out::Value::array();
  worst.push_back(r.worst.first);
  worst.push_back(r.worst.second);
  v["worst"] = worst;
  return v;
}

void append(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : std::nan("");
}

}  // namespace

CommandResult cmd_spectrum(const RunConfig& cfg) {
  const auto spec = make_spectrum(cfg.geometry, cfg.params, cfg.cutoff);
  CommandResult res;
  res.warnings = cfg.warnings;
  auto doc = out::Value::object();
  doc["command"] = "spectrum";
  doc["geometry"] = geometry_name(cfg.geometry);
  doc["modes"] = modes_json(spec);
  doc["eigenvalues"] = out::vector(spec.eigenvalues());
  doc["gamma_eff"] = spec.gamma_eff();
  doc["warnings"] = strings_json(res.warnings);
  res.doc = doc;
  return res;
}

CommandResult cmd_solve(const RunConfig& cfg) {
  const auto spec = make_spectrum(cfg.geometry, cfg.params, cfg.cutoff);
  const Basis basis(cfg.geometry, cfg.params, spec);
  CommandResult res;
  res.warnings = cfg.warnings;

  const auto proj = project(cfg, basis);
  append(res.warnings, proj.warnings);
  const auto sol = solve_spectral_lyapunov(spec, proj.Q);
  const double q_norm = operator_norm_sym(proj.Q);
  const auto bound = truncation_bound(make_spectrum(cfg.geometry, cfg.params, cfg.cutoff + 1), spec.size(), q_norm);

  auto doc = out::Value::object();
  doc["command"] = "solve";
  doc["geometry"] = geometry_name(cfg.geometry);
  doc["modes"] = modes_json(spec);
  doc["eigenvalues"] = out::vector(spec.eigenvalues());
  doc["Q"] = out::matrix(proj.Q);
  doc["P"] = out::matrix(sol.P);
  doc["residual_rel"] = sol.residual_rel;
  doc["min_eig_P"] = sol.min_eigenvalue;
  auto b = out::Value::object();
  b["coarse"] = bound.coarse;
  b["improved"] = bound.improved;
  b["q_norm"] = q_norm;
  doc["bounds"] = b;
  auto noise = out::Value::object();
  noise["kind"] = noise_kind_name(cfg.noise.kind);
  noise["psd"] = proj.psd.ok;
  noise["min_eig_Q"] = proj.psd.min_eigenvalue;
  if (is_kernel(cfg.noise.kind)) noise["gram_defect"] = gram_matrix(basis, cfg.quad).defect;
  doc["noise"] = noise;
  if (cfg.geometry != Geometry::oscillator) {
    auto blocks = out::Value::object();
    blocks["Q"] = block_json(block_structure_report(proj.Q, spec.modes()));
    blocks["P"] = block_json(block_structure_report(sol.P, spec.modes()));
    doc["block_structure"] = blocks;
  }
  doc["warnings"] = strings_json(res.warnings);
  res.doc = doc;
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  if (cfg.verify.n_ref <= cfg.cutoff)
    throw ConfigError("verify.n_ref: reference cutoff " + std::to_string(cfg.verify.n_ref) +
                      " must exceed cutoff " + std::to_string(cfg.cutoff));
  for (int n : cfg.verify.sweep)
    if (n >= cfg.verify.n_ref)
      throw ConfigError("verify.sweep: entry " + std::to_string(n) + " must be below verify.n_ref");

  CommandResult res;
  res.warnings = cfg.warnings;
  bool all_pass = true;

  const auto ref_spec = make_spectrum(cfg.geometry, cfg.params, cfg.verify.n_ref);
  const Basis ref_basis(cfg.geometry, cfg.params, ref_spec);
  const auto ref_proj = project(cfg, ref_basis);
  append(res.warnings, ref_proj.warnings);
  const auto ref_sol = solve_spectral_lyapunov(ref_spec, ref_proj.Q);
  const double q_norm = operator_norm_sym(ref_proj.Q);

  // Truncation sweep; Q_N and P_N are leading blocks of the reference problem.
  auto sweep = out::Value::array();
  std::vector<double> rates, errors;
  bool sweep_pass = true;
  for (int n : cfg.verify.sweep) {
    const auto n_sz = static_cast<std::size_t>(n);
    const auto sub = ref_spec.truncated(n_sz);
    const auto sol_n = solve_spectral_lyapunov(sub, ref_proj.Q.leading(n_sz));
    const bool nested = sol_n.P == ref_sol.P.leading(n_sz);
    const double err = operator_norm_sym(ref_sol.P - sol_n.P.padded(ref_spec.size()));
    const auto bound = truncation_bound(ref_spec, n_sz, q_norm);
    const bool ok = nested && BoundCheck{err, bound.improved}.holds() &&
                    BoundCheck{bound.improved, bound.coarse}.holds();
    sweep_pass = sweep_pass && ok;
    if (err > 0) {
      rates.push_back(std::abs(ref_spec.eigenvalue(n_sz)));
      errors.push_back(err);
    }
    auto row = out::Value::object();
    row["N"] = n;
    row["lambda_next"] = ref_spec.eigenvalue(n_sz);
    row["measured"] = err;
    row["improved"] = bound.improved;
    row["coarse"] = bound.coarse;
    row["nested"] = nested;
    row["pass"] = ok;
    sweep.push_back(row);
  }
  auto trunc = out::Value::object();
  trunc["n_ref"] = cfg.verify.n_ref;
  trunc["q_norm"] = q_norm;
  trunc["sweep"] = sweep;
  if (rates.size() >= 2) {
    const double slope = loglog_slope(rates, errors);
    const bool slope_ok = slope <= -1.0 + 0.15;
    trunc["slope"] = slope;
    trunc["slope_pass"] = slope_ok;
    sweep_pass = sweep_pass && slope_ok;
  }
  trunc["pass"] = sweep_pass;
  all_pass = all_pass && sweep_pass;

  // Spot checks on the working truncation.
  const auto n_sz = static_cast<std::size_t>(cfg.cutoff);
  const auto spec = ref_spec.truncated(n_sz);
  const SymMatrix Q = ref_proj.Q.leading(n_sz);
  const auto sol = solve_spectral_lyapunov(spec, Q);
  const double qn = operator_norm_sym(Q);
  std::mt19937_64 rng(path_seed(cfg.seed, 0xC0FFEE));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 5.0);
  int semi_viol = 0, integ_viol = 0;
  double semi_ratio = 0, integ_ratio = 0;
  std::vector<double> a(n_sz), b(n_sz);
  for (int s = 0; s < cfg.verify.samples; ++s) {
    for (auto& x : a) x = normal(rng);
    const double t = unif(rng);
    const auto chk = semigroup_decay_check(spec, a, t);
    if (!chk.holds()) ++semi_viol;
    if (chk.rhs > 0) semi_ratio = std::max(semi_ratio, chk.lhs / chk.rhs);
  }
  for (int s = 0; s < cfg.verify.samples; ++s) {
    for (auto& x : a) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    const auto chk = integral_bound_check(spec, sol.P, qn, a, b);
    if (!chk.holds()) ++integ_viol;
    if (chk.rhs > 0) integ_ratio = std::max(integ_ratio, chk.lhs / chk.rhs);
  }
  auto spots = out::Value::object();
  spots["samples"] = cfg.verify.samples;
  spots["semigroup_violations"] = semi_viol;
  spots["semigroup_max_ratio"] = semi_ratio;
  spots["integral_violations"] = integ_viol;
  spots["integral_max_ratio"] = integ_ratio;
  const bool spots_pass = semi_viol == 0 && integ_viol == 0;
  spots["pass"] = spots_pass;
  all_pass = all_pass && spots_pass;

  // Oracle triangle on the slowest modes.
  const std::size_t n_or = std::min<std::size_t>(n_sz, 16);
  const auto spec_or = spec.truncated(n_or);
  const SymMatrix Q_or = Q.leading(n_or);
  const SymMatrix P_or = sol.P.leading(n_or);
  const double dense_err = relative_frobenius(P_or, solve_dense_lyapunov(spec_or, Q_or));
  const double quad_err =
      relative_frobenius(P_or, quadrature_oracle_covariance(spec_or, Q_or, 10.0 / spec_or.gamma_eff(), 10000));
  const double tol_abs = kPsdRelTol * std::max(operator_norm_sym(sol.P), 1e-300);
  const bool psd_ok = sol.min_eigenvalue >= -tol_abs;
  const bool oracle_pass = dense_err <= 1e-10 && quad_err <= 1e-6 && sol.residual_rel <= 1e-12 && psd_ok;
  auto oracles = out::Value::object();
  oracles["modes"] = static_cast<int>(n_or);
  oracles["dense_rel_frobenius"] = dense_err;
  oracles["quadrature_rel_frobenius"] = quad_err;
  oracles["residual_rel"] = sol.residual_rel;
  oracles["min_eig_P"] = sol.min_eigenvalue;
  oracles["psd"] = psd_ok;
  oracles["pass"] = oracle_pass;
  all_pass = all_pass && oracle_pass;

  auto doc = out::Value::object();
  doc["command"] = "verify";
  doc["geometry"] = geometry_name(cfg.geometry);
  doc["cutoff"] = cfg.cutoff;
  doc["noise"] = noise_kind_name(cfg.noise.kind);
  doc["truncation"] = trunc;
  doc["spot_checks"] = spots;
  doc["oracles"] = oracles;
  doc["pass"] = all_pass;
  doc["warnings"] = strings_json(res.warnings);
  res.doc = doc;
  res.exit_code = all_pass ? kExitOk : kExitVerification;
  return res;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  const auto spec = make_spectrum(cfg.geometry, cfg.params, cfg.cutoff);
  const Basis basis(cfg.geometry, cfg.params, spec);
  CommandResult res;
  res.warnings = cfg.warnings;
  const auto proj = project(cfg, basis);
  append(res.warnings, proj.warnings);
  const auto sol = solve_spectral_lyapunov(spec, proj.Q);

  SimConfig sim = cfg.sim;
  sim.seed = cfg.seed;
  sim.threads = cfg.threads;
  const auto r = simulate(spec, proj.Q, sim);
  append(res.warnings, r.warnings);
  const auto cmp = compare_covariance(r.P_hat, r.std_error, sol.P);

  auto doc = out::Value::object();
  doc["command"] = "simulate";
  doc["geometry"] = geometry_name(cfg.geometry);
  doc["modes"] = modes_json(spec);
  doc["dt"] = sim.dt;
  doc["steps"] = sim.n_steps;
  doc["burn_in"] = r.burn_in;
  doc["paths"] = sim.n_paths;
  doc["seed"] = static_cast<unsigned long long>(sim.seed);
  doc["jitter"] = r.jitter;
  doc["P_hat"] = out::matrix(r.P_hat);
  doc["stderr"] = out::matrix(r.std_error);
  doc["P"] = out::matrix(sol.P);
  auto c = out::Value::object();
  c["max_z"] = cmp.max_z;
  auto worst = out::Value::array();
  worst.push_back(cmp.worst.first);
  worst.push_back(cmp.worst.second);
  c["worst"] = worst;
  c["fraction_within_4se"] = cmp.fraction_within;
  c["max_diag_rel_error"] = cmp.max_diag_rel_error;
  c["entries"] = cmp.entries;
  doc["comparison"] = c;
  doc["pass"] = cmp.pass;
  doc["warnings"] = strings_json(res.warnings);
  res.doc = doc;
  res.exit_code = cmp.pass ? kExitOk : kExitVerification;
  return res;
}

}  // namespace speclyap
