#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minext/harness.hpp"

using namespace minext;

TEST_CASE("config parsing and validation") {
  SUBCASE("defaults") {
    const ScenarioConfig c = parse_config(Json::object());
    CHECK(c.spec == DomainSpec::upper_half_plane());
    CHECK(c.representation == "standard_sl2");
    CHECK(c.seed == 42);
    CHECK(effective_max_degree(c) == 6);
  }
  SUBCASE("siegel scenario") {
    const Json j = Json::parse(R"({
      "domain": {"kind": "siegel", "genus": 2},
      "representation": "standard_sp4",
      "integrator": {"mc_samples": 50000, "seed": 7}
    })");
    const ScenarioConfig c = parse_config(j);
    CHECK(c.spec.genus == 2);
    CHECK(c.seed == 7);
    CHECK(effective_max_degree(c) == 3);
  }
  SUBCASE("unknown representation") {
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"representation": "spin7"})")),
                    ConfigError);
  }
  SUBCASE("representation must match the domain") {
    const Json j = Json::parse(R"({
      "domain": {"kind": "siegel", "genus": 2},
      "representation": "standard_sl2"
    })");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("monte carlo sample floor") {
    const Json j = Json::parse(R"({
      "domain": {"kind": "siegel", "genus": 2},
      "representation": "standard_sp4",
      "integrator": {"mc_samples": 500}
    })");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("round trip through json") {
    ScenarioConfig c;
    c.seed = 99;
    c.perturb = 0.25;
    const ScenarioConfig back = parse_config(config_to_json(c));
    CHECK(back.seed == 99);
    CHECK(back.perturb == 0.25);
  }
}

TEST_CASE("cmd_extend reports the modular coefficients") {
  ScenarioConfig config;
  const RunResult result = cmd_extend(config);
  CHECK(result.exit_code == 0);
  const Json& coeffs = result.report["section"]["polynomial_coefficients"];
  REQUIRE(coeffs.size() == 2);
  // Constant coefficient (i, 1), linear coefficient (i, -1).
  CHECK(coeffs[0]["components"][0][1].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeffs[0]["components"][1][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeffs[1]["components"][0][1].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coeffs[1]["components"][1][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(result.report["section"]["degree_bound"].get<int>() == 1);
}

TEST_CASE("cmd_extend evaluates a user grid") {
  ScenarioConfig config;
  config.grid = {{Complex(0.0, 0.0)}, {Complex(0.5, 0.0)}};
  const RunResult result = cmd_extend(config);
  REQUIRE(result.exit_code == 0);
  const Json& grid = result.report["section"]["grid"];
  REQUIRE(grid.size() == 2);
  // sigma(0) = (i, 1) and sigma(1/2) = (3i/2, 1/2).
  CHECK(grid[0]["value"][0][1].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(grid[1]["value"][0][1].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(grid[1]["value"][1][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  // Grid points must match the bounded dimension.
  Json bad = config_to_json(config);
  bad["grid"] = Json::array({Json::array({Json::array({0.1, 0.0}),
                                          Json::array({0.2, 0.0})})});
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("cmd_extend accepts a zero base vector") {
  ScenarioConfig config;
  config.standard_base = false;
  config.base_coeffs = {Complex(0.0, 0.0)};
  const RunResult result = cmd_extend(config);
  CHECK(result.exit_code == 0);
}

TEST_CASE("cmd_extend on the symplectic scenario") {
  ScenarioConfig config;
  config.spec = DomainSpec::siegel(2);
  config.representation = "standard_sp4";
  config.mc_samples = 50000;
  const RunResult result = cmd_extend(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report["section"]["degree_bound"].get<int>() <= 2);
  CHECK(result.report["section"]["fiber_membership"]["pass"].get<bool>());
}

TEST_CASE("cmd_verify passes on the default scenario") {
  ScenarioConfig config;
  const auto start = std::chrono::steady_clock::now();
  const RunResult result = cmd_verify(config);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(result.exit_code == 0);
  CHECK(result.report["overall_pass"].get<bool>());
  const double c = result.report["suites"]["constant"]["constant"]["value"][0].get<double>();
  CHECK(std::abs(c - M_PI / 2.0) < 1e-10);
  CHECK(elapsed < 5.0);
}

TEST_CASE("cmd_verify fails under the debug perturbation") {
  ScenarioConfig config;
  config.perturb = 0.1;
  const RunResult result = cmd_verify(config);
  CHECK(result.exit_code == 1);
  CHECK_FALSE(result.report["suites"]["orthogonality"]["pass"].get<bool>());
  // At least one magnitude exceeds ten times its tolerance.
  bool loud = false;
  for (const auto& cell : result.report["suites"]["orthogonality"]["cells"])
    if (cell["magnitude"].get<double>() > 10.0 * cell["tolerance"].get<double>())
      loud = true;
  CHECK(loud);
}

TEST_CASE("reports are byte-identical for identical config and seed") {
  ScenarioConfig config;
  const RunResult a = cmd_verify(config);
  const RunResult b = cmd_verify(config);
  CHECK(report_to_string(a.report, true) == report_to_string(b.report, true));
  // Different seeds produce different sampled checks but still pass.
  ScenarioConfig other = config;
  other.seed = 43;
  const RunResult c = cmd_verify(other);
  CHECK(c.exit_code == 0);
}

TEST_CASE("cmd_constant emits the table and csv") {
  ScenarioConfig config;
  config.constant_scenarios = {"standard_sl2", "sym2_sl2"};
  const RunResult result = cmd_constant(config);
  CHECK(result.exit_code == 0);
  const Json& rows = result.report["table"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["result"]["constant"]["value"][0].get<double>() ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(rows[0]["result"]["ratio"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows[1]["result"]["constant"]["value"][0].get<double>() ==
        doctest::Approx(M_PI / 3.0).epsilon(1e-12));
  CHECK(result.csv.find("scenario,constant") == 0);
  CHECK(result.csv.find("standard_sl2") != std::string::npos);
}

TEST_CASE("cmd_constant agrees across seeds within noise") {
  ScenarioConfig a, b;
  a.constant_scenarios = {"standard_sp4"};
  a.mc_samples = 100000;
  b = a;
  b.seed = 1234;
  const Json ra = cmd_constant(a).report["table"][0]["result"];
  const Json rb = cmd_constant(b).report["table"][0]["result"];
  const double ca = ra["constant"]["value"][0].get<double>();
  const double cb = rb["constant"]["value"][0].get<double>();
  const double se =
      std::hypot(ra["constant"]["std_error"].get<double>(),
                 rb["constant"]["std_error"].get<double>());
  CHECK(std::abs(ca - cb) < 3.0 * se);
}
