#pragma once

#include <string>
#include <vector>

#include "latlab/config.hpp"

namespace latlab {

inline constexpr const char* kVersion = "0.1.0";

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 program error, 2 acceptance-rule failure
  bool pass = true;
  std::size_t rows = 0;
  std::vector<std::string> outputs;
};

// Executes the configured experiment and writes its CSV, a summary.json
// with {experiment, pass, rows, seed, wall_seconds}, and a manifest.json
// echoing the config.  CSV bytes depend only on the config (seed included),
// never on the thread count or wall clock.
RunResult run(const ExperimentConfig& config);

}  // namespace latlab
