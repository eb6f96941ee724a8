// Command-line front end: builds the group-theoretic extension of a Hodge
// vector over the built-in domains and verifies the minimality properties.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "minext/harness.hpp"

namespace {

using minext::Json;
using minext::RunResult;
using minext::ScenarioConfig;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  std::int64_t mc_samples = -1;
  int max_degree = -1;
  double perturb = -1.0;
  int parallel = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Scenario config file (JSON)");
  cmd->add_option("--out", flags.out_path, "Write the JSON report here");
  cmd->add_option("--seed", flags.seed, "Override the RNG seed");
  cmd->add_option("--mc-samples", flags.mc_samples, "Override Monte Carlo sample count");
  cmd->add_option("--max-degree", flags.max_degree, "Override the monomial degree cap");
  cmd->add_option("--perturb", flags.perturb,
                  "Debug: perturb the section by eps * z1 * e1 (negative control)");
  cmd->add_option("--parallel", flags.parallel, "Worker threads for integration");
}

ScenarioConfig resolve_config(const CommonFlags& flags) {
  ScenarioConfig config;
  if (!flags.config_path.empty())
    config = minext::load_config_file(flags.config_path);
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.mc_samples > 0) config.mc_samples = flags.mc_samples;
  if (flags.max_degree > 0) config.max_degree = flags.max_degree;
  if (flags.perturb >= 0.0) config.perturb = flags.perturb;
  if (flags.parallel > 0) config.parallel = flags.parallel;
  if (!flags.out_path.empty()) config.out_path = flags.out_path;
  return config;
}

void print_summary(const RunResult& result) {
  const Json& r = result.report;
  std::printf("minext %s — %s\n", r["library_version"].get<std::string>().c_str(),
              r["command"].get<std::string>().c_str());
  std::printf("  representation: %s on %s (seed %llu)\n",
              r["config"]["representation"].get<std::string>().c_str(),
              r["config"]["domain"]["kind"].get<std::string>().c_str(),
              static_cast<unsigned long long>(r["rng"]["seed"].get<std::uint64_t>()));

  if (r.contains("suites")) {
    const Json& suites = r["suites"];
    if (suites.contains("structure")) {
      int ok = 0;
      double worst = 0.0;
      for (const auto& c : suites["structure"]) {
        if (c["pass"].get<bool>()) ++ok;
        worst = std::max(worst, c["value"].get<double>());
      }
      std::printf("  structure: %d/%zu checks pass\n", ok, suites["structure"].size());
    }
    if (suites.contains("holomorphy"))
      std::printf("  holomorphy: residual %.3e (%s)\n",
                  suites["holomorphy"]["heldout"]["value"].get<double>(),
                  suites["holomorphy"]["heldout"]["pass"].get<bool>() ? "pass" : "FAIL");
    if (suites.contains("s1_invariance"))
      std::printf("  s1 invariance: orbit deviation %.3e (%s)\n",
                  suites["s1_invariance"]["orbit_max_deviation"]["value"].get<double>(),
                  suites["s1_invariance"]["orbit_max_deviation"]["pass"].get<bool>()
                      ? "pass" : "FAIL");
    if (suites.contains("orthogonality"))
      std::printf("  orthogonality: max |(f e_j, sigma)| = %.3e over %zu cells (%s)\n",
                  suites["orthogonality"]["max_magnitude"].get<double>(),
                  suites["orthogonality"]["cells"].size(),
                  suites["orthogonality"]["pass"].get<bool>() ? "pass" : "FAIL");
    if (suites.contains("competitor"))
      std::printf("  competitor: min gap %.3e over %d trials (%s)\n",
                  suites["competitor"]["min_norm_gap"].get<double>(),
                  suites["competitor"]["trials"].get<int>(),
                  suites["competitor"]["pass"].get<bool>() ? "pass" : "FAIL");
    if (suites.contains("constant")) {
      const Json& c = suites["constant"];
      std::printf("  constant: C = %.12f, mu(D) = %.12f, ratio = %.6f (%s)\n",
                  c["constant"]["value"][0].get<double>(),
                  c["volume"]["value"][0].get<double>(), c["ratio"].get<double>(),
                  c["ot_strict"].get<bool>() ? "C < mu(D)" : "VIOLATION");
    }
  }
  if (r.contains("section") && r["section"].contains("polynomial_coefficients"))
    std::printf("  section: %zu polynomial coefficients, degree <= %d\n",
                r["section"]["polynomial_coefficients"].size(),
                r["section"]["degree_bound"].get<int>());
  if (r.contains("table"))
    for (const auto& row : r["table"])
      std::printf("  %-14s C = %.9f  mu = %.9f  ratio = %.6f\n",
                  row["scenario"].get<std::string>().c_str(),
                  row["result"]["constant"]["value"][0].get<double>(),
                  row["result"]["volume"]["value"][0].get<double>(),
                  row["result"]["ratio"].get<double>());
  std::printf("overall: %s\n", r["overall_pass"].get<bool>() ? "PASS" : "FAIL");
}

int run(int argc, char** argv) {
  CLI::App app{"L2-minimal holomorphic extensions over bounded symmetric domains"};
  app.require_subcommand(1);

  CommonFlags extend_flags, verify_flags, constant_flags;
  CLI::App* extend = app.add_subcommand("extend", "Build the section and report it");
  add_common(extend, extend_flags);
  CLI::App* verify = app.add_subcommand("verify", "Run the full verification suite");
  add_common(verify, verify_flags);
  CLI::App* constant = app.add_subcommand("constant", "Tabulate extension constants");
  add_common(constant, constant_flags);

  CLI11_PARSE(app, argc, argv);

  RunResult result;
  ScenarioConfig config;
  if (extend->parsed()) {
    config = resolve_config(extend_flags);
    result = minext::cmd_extend(config);
  } else if (verify->parsed()) {
    config = resolve_config(verify_flags);
    result = minext::cmd_verify(config);
  } else {
    config = resolve_config(constant_flags);
    result = minext::cmd_constant(config);
  }

  minext::write_report_files(config, result);
  print_summary(result);
  if (!result.csv.empty() && config.out_path.empty()) std::fputs(result.csv.c_str(), stdout);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const minext::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
