#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "speclyap/commands.hpp"

namespace speclyap {

namespace {

int emit(const CommandResult& res, const RunConfig& cfg, std::string* stdout_text) {
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  const std::string text = cfg.output_format == OutputFormat::csv ? out::to_csv(res.doc) : out::dump(res.doc);
  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
      return kExitComputation;
    }
    f << text;
  } else if (stdout_text) {
    *stdout_text += text;
  } else {
    std::cout << text << std::flush;
  }
  return res.exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::string* stdout_text) {
  CLI::App app{"Steady-state covariance of dissipative linear SDEs in spectral coordinates"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  unsigned threads = 0;
  std::string seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (key = value lines)");
    sub->add_option("--set", overrides, "Override a config key, KEY=VALUE (repeatable)");
    sub->add_option("--output", output, "Output path (default stdout)");
    sub->add_option("--threads", threads, "Worker threads; results do not depend on it");
    sub->add_option("--seed", seed, "Master seed (unsigned 64-bit)");
  };
  auto* spectrum = app.add_subcommand("spectrum", "Ordered modes and eigenvalues");
  auto* solve = app.add_subcommand("solve", "Project the noise and solve the spectral Lyapunov equation");
  auto* verify = app.add_subcommand("verify", "Truncation, semigroup and oracle checks");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check against the spectral covariance");
  for (auto* sub : {spectrum, solve, verify, simulate}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (threads > 0) overrides.push_back("threads=" + std::to_string(threads));
    if (!seed.empty()) overrides.push_back("seed=" + seed);
    if (!output.empty()) overrides.push_back("output.path=" + output);
    const RunConfig cfg = load_run_config(config_path, overrides);
    CommandResult res;
    if (spectrum->parsed())
      res = cmd_spectrum(cfg);
    else if (solve->parsed())
      res = cmd_solve(cfg);
    else if (verify->parsed())
      res = cmd_verify(cfg);
    else
      res = cmd_simulate(cfg);
    return emit(res, cfg, stdout_text);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace speclyap
