#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "minext/minimality.hpp"

namespace minext {

using Json = nlohmann::ordered_json;

/// One scenario: domain, representation, base vector, integration backend,
/// which suites to run, and output options. Defaults reproduce the built-in
/// elliptic scenario.
struct ScenarioConfig {
  DomainSpec spec = DomainSpec::upper_half_plane();
  std::string representation = "standard_sl2";

  bool standard_base = true;
  std::vector<Complex> base_coeffs;  // in the canonical smallest-piece basis

  int radial_nodes = 64;
  int angular_nodes = 128;
  std::int64_t mc_samples = 1000000;
  std::uint64_t seed = 42;

  int max_degree = -1;  // -1: 6 for the disk rule, 3 for Monte Carlo
  int competitor_trials = 100;
  std::int64_t competitor_samples = 200000;  // Monte Carlo only
  double perturb = 0.0;
  int parallel = 1;

  struct Suites {
    bool structure = true;
    bool holomorphy = true;
    bool s1 = true;
    bool orthogonality = true;
    bool competitor = true;
    bool constant = true;
  } suites;

  std::string out_path;

  /// Evaluation grid for cmd_extend, one coordinate vector per point (length
  /// bounded_dim each); empty means a built-in seeded grid.
  std::vector<std::vector<Complex>> grid;

  /// Scenarios for the constant table (cmd_constant); empty means the
  /// built-in list.
  std::vector<std::string> constant_scenarios;
};

ScenarioConfig parse_config(const Json& j);
ScenarioConfig load_config_file(const std::string& path);
Json config_to_json(const ScenarioConfig& config);

Representation representation_from_config(const ScenarioConfig& config);
Integrator integrator_from_config(const ScenarioConfig& config);
int effective_max_degree(const ScenarioConfig& config);

struct RunResult {
  Json report;
  int exit_code = 0;      // 0 all pass, 1 any fail, 2 config error
  std::string csv;        // only for the constant command
};

/// Builds the section and reports its polynomial coefficients in the bounded
/// coordinates plus values and fiber-membership residuals on a point grid.
RunResult cmd_extend(const ScenarioConfig& config);

/// The full verification suite; exit code 0 iff every check passes.
RunResult cmd_verify(const ScenarioConfig& config);

/// Tabulates (C, mu(D), C / mu(D)) across scenarios; emits JSON and CSV.
RunResult cmd_constant(const ScenarioConfig& config);

/// Serializes a report deterministically; `strip_timing` removes the timing
/// subtree (the only part allowed to differ between identical runs).
std::string report_to_string(const Json& report, bool strip_timing = false);

void write_report_files(const ScenarioConfig& config, const RunResult& result);

}  // namespace minext
