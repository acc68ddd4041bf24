#pragma once

// Run configuration shared by every subcommand: a flat JSON object whose keys
// double as command-line flags. Unknown keys are rejected; the fully resolved
// object (defaults filled in) is embedded in every report.

#include "dcl/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dcl::cli {

enum class KeyType { Int, Real, Bool, String, IntList, Seed };

struct KeyInfo {
  const char* name;
  KeyType type;
  const char* help;
};

/// All recognised keys in a fixed order (this is also the order of the resolved config).
const std::vector<KeyInfo>& config_keys();

struct RunConfig {
  int j = 2;
  double lambda = 1.0;
  double s = -0.25;
  double b = 0.5;
  double epsilon = 0.0;              ///< 0: half the admissible limit for j
  std::optional<double> kmax;        ///< truncation K (default 256 / lambda); resonance Kmax (default 64)
  double dt = 1e-4;
  double T = 1.0;
  bool dealias = true;
  std::optional<double> tau_step;   ///< default 1/4 (illposed: 1/8)
  std::vector<int> N_list;
  std::optional<std::uint64_t> seed;
  std::string output_dir = ".";

  bool kdv = false;
  int stride = 1;
  double amplitude = 0.01;
  int mode = 1;
  std::string initial_spectrum;
  std::string target;
  std::string form = "dxdx_smoothed";
  int pairs = 100;
  int probe_modes = 32;
  double mu = 2.0;
  int iterations = 8;
  double time_step = 1.0 / 512;
  double scan_bound = 512;
  double sigma_bound = 1e6;
  bool force_window = false;
  double tolerance = 1e-6;

  /// Params for the spatial lattice (K from kmax or 256 / lambda).
  ModelParams params() const;
  double resolved_epsilon() const;
};

/// Converts a flag string into the JSON value for `key`; throws ValidationError.
json parse_flag_value(const std::string& key, const std::string& text);

/// Schema check and conversion. Unknown keys or ill-typed values throw.
RunConfig from_json(const json& doc);

/// Resolved config: every key with the value actually used.
json to_json(const RunConfig& cfg);

}  // namespace dcl::cli
