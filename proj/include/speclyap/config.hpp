#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclyap/eigenbases.hpp"
#include "speclyap/noise.hpp"
#include "speclyap/ou_simulator.hpp"

namespace speclyap {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NoiseKind { white, diagonal, kernel_gaussian, kernel_custom_table, none };
enum class OutputFormat { json, csv };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::white;
  double sigma2 = 1.0;
  double c = 1.0;
  double p = 1.0;
  std::vector<double> values;
  double lengthscale = 0.5;
  std::string table;  ///< CSV of "row,col,value" node-pair entries
  bool clip = false;
};

struct VerifyConfig {
  int n_ref = 200;
  std::vector<int> sweep{10, 20, 40, 80};
  int samples = 1000;
};

struct RunConfig {
  Geometry geometry = Geometry::disk;
  GeometryParams params;
  int cutoff = 8;  ///< mode count; sphere: (L+1)^2
  int L = -1;      ///< sphere only
  QuadratureOrders quad;
  NoiseConfig noise;
  SimConfig sim;
  VerifyConfig verify;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_path;
  OutputFormat output_format = OutputFormat::json;
  std::vector<std::string> warnings;
};

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys are errors.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies "KEY=VALUE" overrides on top of parsed keys.
void apply_overrides(std::map<std::string, std::string>& keys, const std::vector<std::string>& overrides);

/// Validates every key and builds the run configuration. Unknown keys are errors.
RunConfig build_run_config(const std::map<std::string, std::string>& keys);

/// Reads the config file (if any), applies overrides, and builds the configuration.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides);

/// Resolves the noise description into a NoiseSpec for the given grid orders
/// (reads the custom kernel table when needed). `none` has no spec and yields Q = 0.
NoiseSpec make_noise_spec(const RunConfig& cfg);

}  // namespace speclyap
