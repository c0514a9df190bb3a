#include "speclyap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace speclyap {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "geometry",     "alpha",        "gamma",       "d",            "cutoff",          "L",
      "quad.radial",  "quad.angular", "quad.hermite", "quad.polar",  "noise.kind",      "noise.sigma2",
      "noise.c",      "noise.p",      "noise.values", "noise.lengthscale", "noise.table", "noise.clip",
      "sim.dt",       "sim.steps",    "sim.burn_in", "sim.paths",    "seed",            "threads",
      "verify.n_ref", "verify.sweep", "verify.samples", "output.path", "output.format"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw ConfigError("config field '" + key + "': " + msg);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(key, "expected a finite number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, "expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, "expected an unsigned 64-bit integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(key, "expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> keys;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!keys.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return keys;
}

void apply_overrides(std::map<std::string, std::string>& keys, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("--set '" + o + "': expected KEY=VALUE");
    const std::string key = trim(o.substr(0, eq));
    if (key.empty()) throw ConfigError("--set '" + o + "': empty key");
    keys[key] = trim(o.substr(eq + 1));
  }
}

RunConfig build_run_config(const std::map<std::string, std::string>& keys) {
  for (const auto& [k, v] : keys)
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

  RunConfig cfg;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = keys.find(k);
    return it == keys.end() ? nullptr : &it->second;
  };
  auto get_double = [&](const std::string& k, double& dst) {
    if (const auto* v = get(k)) dst = parse_double(k, *v);
  };
  auto get_int = [&](const std::string& k, int& dst) {
    if (const auto* v = get(k)) {
      const long long x = parse_int(k, *v);
      if (x < -2147483647LL || x > 2147483647LL) fail(k, "integer out of range");
      dst = static_cast<int>(x);
    }
  };

  if (const auto* g = get("geometry")) {
    if (*g == "disk")
      cfg.geometry = Geometry::disk;
    else if (*g == "oscillator")
      cfg.geometry = Geometry::oscillator;
    else if (*g == "sphere")
      cfg.geometry = Geometry::sphere;
    else
      fail("geometry", "expected disk, oscillator or sphere, got '" + *g + "'");
  }
  get_double("alpha", cfg.params.alpha);
  get_double("gamma", cfg.params.gamma);
  get_int("d", cfg.params.d);
  if (!(cfg.params.alpha > 0.0)) fail("alpha", "must be > 0");
  if (!(cfg.params.gamma > 0.0)) fail("gamma", "must be > 0");
  if (cfg.geometry == Geometry::oscillator) {
    if (cfg.params.d < 1 || cfg.params.d > 3) fail("d", "oscillator dimension must be 1, 2 or 3");
    if (cfg.params.gamma <= 0.5 * cfg.params.d)
      cfg.warnings.push_back("gamma <= d/2 for the oscillator; eigenvalues stay negative by the damped formula");
  }

  const bool cutoff_given = get("cutoff") != nullptr;
  get_int("cutoff", cfg.cutoff);
  get_int("L", cfg.L);
  if (cfg.geometry == Geometry::sphere) {
    if (!get("L")) {
      if (cutoff_given) {
        const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(std::max(cfg.cutoff, 0)))));
        if (root * root != cfg.cutoff || root < 1) fail("L", "required for the sphere (cutoff must equal (L+1)^2)");
        cfg.L = root - 1;
      } else {
        cfg.L = 2;
      }
    }
    if (cfg.L < 0) fail("L", "must be >= 0");
    if (cfg.L > 60) fail("L", "must be <= 60");
    const int implied = (cfg.L + 1) * (cfg.L + 1);
    if (cutoff_given && cfg.cutoff != implied)
      fail("cutoff", "sphere cutoff must equal (L+1)^2 = " + std::to_string(implied));
    cfg.cutoff = implied;
  } else if (get("L")) {
    fail("L", "only valid for the sphere geometry");
  }
  if (cfg.cutoff < 1) fail("cutoff", "must be >= 1");

  get_int("quad.radial", cfg.quad.radial);
  get_int("quad.angular", cfg.quad.angular);
  get_int("quad.hermite", cfg.quad.hermite);
  get_int("quad.polar", cfg.quad.polar);
  if (cfg.quad.radial < 1) fail("quad.radial", "must be >= 1");
  if (cfg.quad.angular < 1) fail("quad.angular", "must be >= 1");
  if (cfg.quad.hermite < 1 || cfg.quad.hermite > 200) fail("quad.hermite", "must be in [1, 200]");
  if (cfg.quad.polar < 1) fail("quad.polar", "must be >= 1");

  if (const auto* k = get("noise.kind")) {
    if (*k == "white")
      cfg.noise.kind = NoiseKind::white;
    else if (*k == "diagonal")
      cfg.noise.kind = NoiseKind::diagonal;
    else if (*k == "kernel-gaussian")
      cfg.noise.kind = NoiseKind::kernel_gaussian;
    else if (*k == "kernel-custom-table")
      cfg.noise.kind = NoiseKind::kernel_custom_table;
    else if (*k == "none")
      cfg.noise.kind = NoiseKind::none;
    else
      fail("noise.kind", "expected white, diagonal, kernel-gaussian, kernel-custom-table or none, got '" + *k + "'");
  }
  get_double("noise.sigma2", cfg.noise.sigma2);
  get_double("noise.c", cfg.noise.c);
  get_double("noise.p", cfg.noise.p);
  get_double("noise.lengthscale", cfg.noise.lengthscale);
  if (const auto* v = get("noise.values"))
    for (const auto& part : split_list(*v)) cfg.noise.values.push_back(parse_double("noise.values", part));
  if (const auto* v = get("noise.table")) cfg.noise.table = *v;
  if (const auto* v = get("noise.clip")) cfg.noise.clip = parse_bool("noise.clip", *v);
  if (!(cfg.noise.sigma2 > 0.0)) fail("noise.sigma2", "must be > 0");
  if (!(cfg.noise.c > 0.0)) fail("noise.c", "must be > 0");
  if (!(cfg.noise.p >= 0.0)) fail("noise.p", "must be >= 0");
  if (!(cfg.noise.lengthscale > 0.0)) fail("noise.lengthscale", "must be > 0");
  for (double q : cfg.noise.values)
    if (!(q > 0.0)) fail("noise.values", "entries must be > 0");
  if (cfg.noise.kind == NoiseKind::diagonal && !cfg.noise.values.empty() &&
      static_cast<int>(cfg.noise.values.size()) != cfg.cutoff)
    fail("noise.values", std::to_string(cfg.noise.values.size()) + " values for " + std::to_string(cfg.cutoff) +
                             " modes");
  if (cfg.noise.kind == NoiseKind::kernel_custom_table && cfg.noise.table.empty())
    fail("noise.table", "required for kernel-custom-table noise");

  get_double("sim.dt", cfg.sim.dt);
  if (const auto* v = get("sim.steps")) cfg.sim.n_steps = static_cast<long>(parse_int("sim.steps", *v));
  if (const auto* v = get("sim.burn_in")) {
    cfg.sim.burn_in = static_cast<long>(parse_int("sim.burn_in", *v));
    if (cfg.sim.burn_in < 0) fail("sim.burn_in", "must be >= 0");
  }
  get_int("sim.paths", cfg.sim.n_paths);
  if (!(cfg.sim.dt > 0.0)) fail("sim.dt", "must be > 0");
  if (cfg.sim.n_steps < 1) fail("sim.steps", "must be >= 1");
  if (cfg.sim.n_paths < 1) fail("sim.paths", "must be >= 1");

  if (const auto* v = get("seed")) cfg.seed = parse_u64("seed", *v);
  if (const auto* v = get("threads")) {
    const long long t = parse_int("threads", *v);
    if (t < 1 || t > 1024) fail("threads", "must be in [1, 1024]");
    cfg.threads = static_cast<unsigned>(t);
  }

  get_int("verify.n_ref", cfg.verify.n_ref);
  get_int("verify.samples", cfg.verify.samples);
  if (const auto* v = get("verify.sweep")) {
    cfg.verify.sweep.clear();
    for (const auto& part : split_list(*v)) {
      const long long n = parse_int("verify.sweep", part);
      if (n < 1 || n > 100000) fail("verify.sweep", "entries must be positive mode counts");
      cfg.verify.sweep.push_back(static_cast<int>(n));
    }
  }
  if (cfg.verify.n_ref < 2) fail("verify.n_ref", "must be >= 2");
  if (cfg.verify.samples < 1) fail("verify.samples", "must be >= 1");

  if (const auto* v = get("output.path")) cfg.output_path = *v;
  if (const auto* v = get("output.format")) {
    if (*v == "json")
      cfg.output_format = OutputFormat::json;
    else if (*v == "csv")
      cfg.output_format = OutputFormat::csv;
    else
      fail("output.format", "expected json or csv");
  }

  // Spectrum-dependent checks: the slowest mode fixes the default burn-in.
  double gamma_eff = 0.0;
  try {
    gamma_eff = make_spectrum(cfg.geometry, cfg.params, 1).gamma_eff();
    make_spectrum(cfg.geometry, cfg.params, cfg.cutoff);
  } catch (const std::exception& e) {
    fail("cutoff", e.what());
  }
  const long burn = cfg.sim.resolved_burn_in(gamma_eff);
  if (burn >= cfg.sim.n_steps)
    fail("sim.burn_in", "burn-in of " + std::to_string(burn) + " steps must be < sim.steps");
  if (cfg.sim.n_steps - burn < 16) fail("sim.steps", "need at least 16 recorded steps after burn-in");
  if (cfg.sim.dt * gamma_eff > 10.0)
    cfg.warnings.push_back("sim.dt * gamma_eff > 10: a single step already equilibrates every mode");
  return cfg;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> keys;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    keys = parse_config_text(ss.str());
  }
  apply_overrides(keys, overrides);
  return build_run_config(keys);
}

NoiseSpec make_noise_spec(const RunConfig& cfg) {
  switch (cfg.noise.kind) {
    case NoiseKind::white:
      return WhiteNoise{cfg.noise.sigma2};
    case NoiseKind::diagonal:
      return DiagonalNoise{cfg.noise.values, cfg.noise.c, cfg.noise.p};
    case NoiseKind::kernel_gaussian:
      return GaussianNoise{cfg.noise.lengthscale};
    case NoiseKind::kernel_custom_table: {
      const std::size_t nodes = make_grid(cfg.geometry, cfg.params.d, cfg.quad).size();
      if (nodes > ProjectionOptions{}.max_nodes)
        fail("noise.table", "quadrature grid has " + std::to_string(nodes) + " nodes; lower the quad.* orders");
      std::ifstream in(cfg.noise.table);
      if (!in) fail("noise.table", "cannot read '" + cfg.noise.table + "'");
      std::vector<double> values(nodes * nodes, 0.0);
      std::vector<bool> seen(nodes * nodes, false);
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto parts = split_list(line);
        const std::string where = "noise.table line " + std::to_string(lineno);
        if (parts.size() != 3) fail(where, "expected 'row,col,value'");
        if (lineno == 1 && parts[0] == "row") continue;  // header
        const long long r = parse_int(where, parts[0]);
        const long long c = parse_int(where, parts[1]);
        const double v = parse_double(where, parts[2]);
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= nodes || static_cast<std::size_t>(c) >= nodes)
          fail(where, "node index outside [0, " + std::to_string(nodes) + ")");
        const std::size_t a = static_cast<std::size_t>(r) * nodes + static_cast<std::size_t>(c);
        const std::size_t b = static_cast<std::size_t>(c) * nodes + static_cast<std::size_t>(r);
        if ((seen[a] && values[a] != v) || (seen[b] && values[b] != v))
          fail(where, "conflicting value for node pair");
        values[a] = values[b] = v;
        seen[a] = seen[b] = true;
      }
      return table_kernel(std::move(values), nodes);
    }
    case NoiseKind::none:
      break;
  }
  throw std::logic_error("make_noise_spec: kind 'none' has no noise spec");
}

}  // namespace speclyap
