#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace flexscat::app {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kNotConverged = 3,
  kThresholdFailed = 4,
};

struct Options {
  std::filesystem::path output = "out";
  int jobs = 1;
  bool verbose = false;
};

const char* version_string();

// Single scatter: mu.grid, phi.grid, dz_phi.grid, phi_scat.grid, residuals.csv,
// probes.csv (with probes configured), meta.json.
int run(const RunConfig& cfg, const Options& opt);

// kind may be empty, in which case harness.kind from the config is used.
int harness(const std::string& kind, const RunConfig& cfg, const Options& opt);

}  // namespace flexscat::app
