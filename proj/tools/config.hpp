#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "flexscat/postprocess.hpp"

namespace flexscat::app {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FrequencyMode { omega, hertz, match_k };

struct HarnessSpec {
  std::string kind;
  std::vector<double> hs_m;
  // quadrature_convergence
  std::optional<PhysicalParams> params;
  double density_sigma_m = 0.5;
  Point2 density_center_m = {0.3, -0.2};
  std::vector<int> kernels;
  // sweep
  std::vector<double> k_values_per_m;
  double k_min_per_m = 0.0, k_max_per_m = 1e300;
  struct Expect {
    double k = 0.0;
    std::string dominant;  // "reflected" | "transmitted"
  };
  std::vector<Expect> expect;
  // thresholds
  std::optional<double> min_slope;
  std::optional<double> max_final_rel_linf;
  bool require_decreasing = true;
};

struct RunConfig {
  std::string description;
  IcePreset ice;
  FrequencyMode frequency_mode = FrequencyMode::match_k;
  double frequency_value = 0.0;  // rad/s or Hz, unused for match_k
  ThicknessProfile profile = ConstantProfile{};
  bool ridges_default = false;
  double grid_h = 0.5, grid_half_width = 10.0;
  Point2 grid_center = {0.0, 0.0};
  Incident incident;
  SolveConfig solver;
  int order = 6;
  bool write_fields = true;
  bool pde_check = false;
  int refine_factor = 1;
  std::vector<Point2> residual_samples;  // empty: default sample set
  std::optional<Point2> probe_upstream, probe_downstream;
  HarnessSpec harness;
};

// Parses a config document or a meta.json written by a previous run.
RunConfig parse_config(const json& doc);
json to_json(const RunConfig& cfg);

// Applies "key=value" to a raw document. Keys are dotted paths, or one of the
// aliases k, h, omega, hz, seed, tol. Values are parsed as JSON, else taken as strings.
void apply_override(json& doc, const std::string& assignment);

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// The scattering problem described by cfg, with omega resolved.
ScatterProblem make_problem(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg, double h);

}  // namespace flexscat::app
