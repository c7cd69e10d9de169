#pragma once

#include "alcove/kernels.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Run configuration shared by the CLI and the config file.  Zero / empty
// values mean "use the per-experiment default", so a file can pin only what
// it cares about and flags can override the rest.

namespace alcove {

struct RunConfig {
  std::string model = "su2";
  std::vector<std::string> experiments;  // empty -> every experiment the model supports
  std::vector<double> gamma;             // simple-root values; empty -> defaults
  long n = 0;                            // Monte Carlo replicas; 0 -> default
  double ds = 0.0;                       // SDE step; 0 -> default
  std::uint64_t seed = 7;
  int threads = 0;                       // 0 -> ALCOVE_THREADS or 1
  std::string out_dir = "reports";
  bool dump_samples = false;
  KernelConfig kernel;
};

// Merge TOML text into cfg.  Supported subset: `key = value` lines, one
// optional `[kernel]` table, strings, numbers, booleans, flat arrays and
// `#` comments.  Unknown keys or sections and malformed values throw
// std::invalid_argument naming the offending line.
void apply_config_text(RunConfig& cfg, const std::string& text);

// Read and merge a config file; an unreadable path throws
// std::invalid_argument.
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace alcove
