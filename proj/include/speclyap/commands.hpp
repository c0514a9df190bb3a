#pragma once

#include <string>
#include <vector>

#include "speclyap/config.hpp"
#include "speclyap/json_out.hpp"

namespace speclyap {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitComputation = 3,
  kExitVerification = 4,
};

struct CommandResult {
  out::Value doc;
  int exit_code = kExitOk;
  std::vector<std::string> warnings;
};

/// Ordered modes and eigenvalues.
CommandResult cmd_spectrum(const RunConfig& cfg);
/// Q, P, residual, min eigenvalue of P, truncation bounds, block structure.
CommandResult cmd_solve(const RunConfig& cfg);
/// Truncation-bound sweep against a reference cutoff, semigroup and integral
/// bound spot checks, oracle agreement. exit_code 4 if any check fails.
CommandResult cmd_verify(const RunConfig& cfg);
/// Exact-transition Monte Carlo against the spectral P. exit_code 4 on failure.
CommandResult cmd_simulate(const RunConfig& cfg);

/// Full command-line entry point (argv[0] excluded). Writes the document to
/// --output / output.path or `stdout_text`, diagnostics to stderr.
int run_cli(const std::vector<std::string>& args, std::string* stdout_text = nullptr);

}  // namespace speclyap
