#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chrate/coefficients.hpp"

namespace chrate {

// Flat experiment description. A config plus a seed fully determines every
// run; CSV output is byte-identical across repeats and thread counts.
struct ExperimentConfig {
  std::string b = "cubic";      // cubic | zero
  std::string sigma = "one";    // one | shifted_sine | tanh_clamp
  double sigma_c = 2.0;
  std::string u0 = "cos";       // constant | cos | polynomial
  double u0_c = 1.0;
  int u0_k = 1;
  std::vector<double> u0_poly;

  int n = 8;
  std::vector<int> n_list;
  int m = 64;
  double T = 0.5;
  double eps = 0.1;
  std::vector<double> eps_list;
  double xbar = 1.5707963267948966;
  double y = 1.0;
  std::vector<double> y_list;
  long long samples = 10000;
  std::uint64_t seed = 12345;
  int threads = 0;  // 0 = logical cores
  std::string output_dir;

  bool importance_sampling = true;
  int green_modes = 512;
  bool endpoint_only = false;
  bool dump_minimizer = false;

  // Canonical key=value listing (fixed order, full precision); the FNV-1a
  // hash of it goes into every provenance line.
  std::string canonical() const;
  std::uint64_t hash() const;

  Coefficients coefficients() const;

  // Range checks; returns human-readable problems, empty when valid.
  std::vector<std::string> validate() const;
};

// Minimal flat TOML reader: `key = value` lines with strings, numbers,
// booleans and one-line arrays, plus # comments. Unknown keys and [sections]
// are rejected. Throws std::runtime_error with a line-numbered message.
ExperimentConfig load_config(const std::string& path);

// Applies one key=value assignment (shared by the file reader and CLI
// overrides).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& raw_value);

}  // namespace chrate
