#include "minext/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace minext {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json estimate_to_json(const IntegralEstimate& e) {
  Json j;
  j["value"] = complex_to_json(e.value);
  j["std_error"] = e.std_error;
  j["n_points"] = e.n_points;
  return j;
}

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Json check_to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  return j;
}

Check residual_check(std::string name, double value, double tol) {
  return Check{std::move(name), value, tol, value <= tol};
}

Representation parse_representation(const std::string& name) {
  try {
    if (name == "standard_sl2") return Representation::standard_sl2();
    if (name.rfind("sym", 0) == 0 && name.rfind("_sl2") != std::string::npos) {
      const int k = std::stoi(name.substr(3, name.size() - 7));
      return Representation::sym_sl2(k);
    }
    if (name.rfind("standard_sp", 0) == 0) {
      const int n = std::stoi(name.substr(11));
      if (n % 2 != 0) throw ConfigError("bad symplectic representation: " + name);
      return Representation::standard_sp(n / 2);
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw ConfigError("unknown representation: " + name);
}

}  // namespace

ScenarioConfig parse_config(const Json& j) {
  ScenarioConfig config;
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    const std::string kind = d.value("kind", "upper_half_plane");
    if (kind == "upper_half_plane") {
      config.spec = DomainSpec::upper_half_plane();
    } else if (kind == "siegel") {
      config.spec = DomainSpec::siegel(d.value("genus", 1));
    } else {
      throw ConfigError("unknown domain kind: " + kind);
    }
  }
  config.representation = j.value("representation", config.representation);
  if (j.contains("base_vector")) {
    const auto& b = j.at("base_vector");
    if (b.is_string()) {
      if (b.get<std::string>() != "standard")
        throw ConfigError("base_vector must be \"standard\" or a coefficient list");
      config.standard_base = true;
    } else {
      config.standard_base = false;
      for (const auto& entry : b) {
        if (!entry.is_array() || entry.size() != 2)
          throw ConfigError("base_vector coefficients must be [re, im] pairs");
        config.base_coeffs.emplace_back(entry.at(0).get<double>(),
                                        entry.at(1).get<double>());
      }
    }
  }
  if (j.contains("integrator")) {
    const auto& it = j.at("integrator");
    config.radial_nodes = it.value("radial_nodes", config.radial_nodes);
    config.angular_nodes = it.value("angular_nodes", config.angular_nodes);
    config.mc_samples = it.value("mc_samples", config.mc_samples);
    config.seed = it.value("seed", config.seed);
  }
  config.max_degree = j.value("max_degree", config.max_degree);
  config.competitor_trials = j.value("competitor_trials", config.competitor_trials);
  config.competitor_samples = j.value("competitor_samples", config.competitor_samples);
  config.perturb = j.value("perturb", config.perturb);
  config.parallel = j.value("parallel", config.parallel);
  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    config.suites.structure = s.value("structure", true);
    config.suites.holomorphy = s.value("holomorphy", true);
    config.suites.s1 = s.value("s1", true);
    config.suites.orthogonality = s.value("orthogonality", true);
    config.suites.competitor = s.value("competitor", true);
    config.suites.constant = s.value("constant", true);
  }
  config.out_path = j.value("output", config.out_path);
  if (j.contains("grid")) {
    for (const auto& pt : j.at("grid")) {
      std::vector<Complex> coords;
      for (const auto& entry : pt) {
        if (!entry.is_array() || entry.size() != 2)
          throw ConfigError("grid coordinates must be [re, im] pairs");
        coords.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
      if (static_cast<int>(coords.size()) != config.spec.bounded_dim())
        throw ConfigError("grid points need one coordinate per bounded dimension");
      config.grid.push_back(std::move(coords));
    }
  }
  if (j.contains("constant_scenarios"))
    for (const auto& s : j.at("constant_scenarios"))
      config.constant_scenarios.push_back(s.get<std::string>());

  // Validation.
  if (parse_representation(config.representation).domain() != config.spec)
    throw ConfigError("representation does not match the domain");
  const bool mc = config.spec.bounded_dim() > 1;
  if (mc && config.mc_samples < 10000)
    throw ConfigError("mc_samples must be at least 10^4 for Monte Carlo suites");
  if (config.parallel < 1) throw ConfigError("parallel must be >= 1");
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

Json config_to_json(const ScenarioConfig& config) {
  Json j;
  j["domain"]["kind"] = config.spec.kind == DomainKind::UpperHalfPlane
                            ? "upper_half_plane"
                            : "siegel";
  j["domain"]["genus"] = config.spec.genus;
  j["representation"] = config.representation;
  if (config.standard_base) {
    j["base_vector"] = "standard";
  } else {
    Json coeffs = Json::array();
    for (Complex c : config.base_coeffs) coeffs.push_back(complex_to_json(c));
    j["base_vector"] = coeffs;
  }
  j["integrator"]["radial_nodes"] = config.radial_nodes;
  j["integrator"]["angular_nodes"] = config.angular_nodes;
  j["integrator"]["mc_samples"] = config.mc_samples;
  j["integrator"]["seed"] = config.seed;
  j["max_degree"] = effective_max_degree(config);
  j["competitor_trials"] = config.competitor_trials;
  j["competitor_samples"] = config.competitor_samples;
  j["perturb"] = config.perturb;
  j["parallel"] = config.parallel;
  j["suites"]["structure"] = config.suites.structure;
  j["suites"]["holomorphy"] = config.suites.holomorphy;
  j["suites"]["s1"] = config.suites.s1;
  j["suites"]["orthogonality"] = config.suites.orthogonality;
  j["suites"]["competitor"] = config.suites.competitor;
  j["suites"]["constant"] = config.suites.constant;
  if (!config.grid.empty()) {
    Json grid = Json::array();
    for (const auto& pt : config.grid) {
      Json coords = Json::array();
      for (Complex c : pt) coords.push_back(complex_to_json(c));
      grid.push_back(coords);
    }
    j["grid"] = grid;
  }
  if (!config.constant_scenarios.empty()) {
    Json list = Json::array();
    for (const auto& s : config.constant_scenarios) list.push_back(s);
    j["constant_scenarios"] = list;
  }
  return j;
}

Representation representation_from_config(const ScenarioConfig& config) {
  return parse_representation(config.representation);
}

Integrator integrator_from_config(const ScenarioConfig& config) {
  if (config.spec.bounded_dim() == 1)
    return Integrator::disk(
        QuadratureRule::disk(config.radial_nodes, config.angular_nodes),
        config.parallel);
  MCSampler sampler{config.seed, config.spec};
  return Integrator::monte_carlo(sampler, config.mc_samples, config.parallel);
}

int effective_max_degree(const ScenarioConfig& config) {
  if (config.max_degree > 0) return config.max_degree;
  return config.spec.bounded_dim() == 1 ? 6 : 3;
}

namespace {

Json report_skeleton(const ScenarioConfig& config, const std::string& command) {
  Json report;
  report["schema_version"] = 1;
  report["library_version"] = kLibraryVersion;
  report["command"] = command;
  report["config"] = config_to_json(config);
  report["rng"]["algorithm"] = kRngAlgorithm;
  report["rng"]["seed"] = config.seed;
  return report;
}

CVector base_vector_from_config(const ScenarioConfig& config,
                                const Representation& rep) {
  const CMatrix basis = rep.smallest_piece_basis();
  if (config.standard_base) return basis.col(0);
  if (static_cast<Eigen::Index>(config.base_coeffs.size()) != basis.cols())
    throw ConfigError("base_vector needs one coefficient per smallest-piece basis vector");
  CVector v = CVector::Zero(rep.dim());
  for (Eigen::Index j = 0; j < basis.cols(); ++j)
    v += config.base_coeffs[static_cast<std::size_t>(j)] * basis.col(j);
  return v;
}

// ---------------------------------------------------------------------------
// verification suites
// ---------------------------------------------------------------------------

std::vector<Check> structure_checks(const ScenarioConfig& config,
                                    const Representation& rep,
                                    const HodgeFrame& frame,
                                    const PolarizationForm& pol,
                                    const HolomorphicSection& sigma) {
  const DomainSpec spec = config.spec;
  std::vector<Check> checks;

  {  // Abelian brackets of the off-diagonal pieces.
    double worst = 0.0;
    for (const auto& basis : {frame.g_m11, frame.g_1m1})
      for (const auto& x : basis)
        for (const auto& y : basis)
          worst = std::max(worst, bracket(x, y).cwiseAbs().maxCoeff());
    checks.push_back(residual_check("bracket_abelian", worst, 1e-14));
  }
  {  // [g00, g_pm] stays in g_pm.
    double worst = 0.0;
    const CMatrix span_p = basis_matrix(frame.g_m11);
    const CMatrix span_m = basis_matrix(frame.g_1m1);
    for (const auto& x : frame.g00) {
      for (const auto& y : frame.g_m11)
        worst = std::max(worst, projection_residual(vec(bracket(x, y)), span_p));
      for (const auto& y : frame.g_1m1)
        worst = std::max(worst, projection_residual(vec(bracket(x, y)), span_m));
    }
    checks.push_back(residual_check("bracket_stability", worst, 1e-12));
  }
  {  // Ad eigenvalues at sampled angles.
    double worst = 0.0;
    for (int s = 0; s < 8; ++s) {
      const double theta = 2.0 * M_PI * (s + 0.5) / 8.0;
      const CMatrix h = frame.circle(theta);
      const CMatrix hinv = frame.circle(-theta);
      const Complex lp = std::exp(Complex(0.0, 2.0 * theta));
      for (const auto& x : frame.g00)
        worst = std::max(worst, (h * x * hinv - x).cwiseAbs().maxCoeff());
      for (const auto& x : frame.g_m11)
        worst = std::max(worst, (h * x * hinv - lp * x).cwiseAbs().maxCoeff());
      for (const auto& x : frame.g_1m1)
        worst = std::max(
            worst, (h * x * hinv - std::conj(lp) * x).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("ad_eigenvalue", worst, 1e-12));
  }
  {  // exp(X) exp(-X) = I on the abelian piece.
    CounterRng rng(config.seed, 11);
    double worst = 0.0;
    const int n = spec.ambient_size();
    for (int s = 0; s < 10; ++s) {
      CMatrix x = CMatrix::Zero(n, n);
      for (const auto& b : frame.g_m11) x += rng.next_gaussian() * b;
      const CMatrix prod = nilpotent_exp(x) * nilpotent_exp(CMatrix(-x));
      worst = std::max(worst,
                       (prod - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("exp_inverse", worst, 1e-12));
  }
  {  // Cayley transform round trips.
    CounterRng rng(config.seed, 12);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const UnboundedPoint p = random_unbounded_point(spec, rng);
      const BoundedPoint b = hc_embed(p);
      if (!contains(b)) throw InternalConsistencyError("hc_embed left the model");
      const UnboundedPoint back = hc_inverse(b);
      worst = std::max(worst, (back.omega - p.omega).cwiseAbs().maxCoeff());
      const BoundedPoint b2 = hc_embed(back);
      worst = std::max(worst, (b2.z - b.z).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("hc_roundtrip", worst, 1e-12));
  }
  {  // zeta-coordinate path agrees with the Cayley transform.
    CounterRng rng(config.seed, 13);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const UnboundedPoint p = random_unbounded_point(spec, rng);
      worst = std::max(
          worst, (zeta_coordinate(p, frame).z - hc_embed(p).z).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("hc_path_equality", worst, 1e-10));
  }
  {  // Factorization reconstructs, and the factor logs live where they must.
    CounterRng rng(config.seed, 14);
    double worst_recon = 0.0;
    double worst_member = 0.0;
    const CMatrix span_p = basis_matrix(frame.g_m11);
    const CMatrix span_m = basis_matrix(frame.g_1m1);
    for (int s = 0; s < 50; ++s) {
      const CMatrix g = point_to_group(random_unbounded_point(spec, rng)) *
                        random_compact_element(spec, rng);
      const HCFactorization f = factorize_pkp(g, frame);
      worst_recon = std::max(
          worst_recon,
          (f.p_plus * f.k_c * f.p_minus - g).cwiseAbs().maxCoeff());
      worst_member = std::max(
          worst_member, projection_residual(vec(nilpotent_log(f.p_plus)), span_p));
      worst_member = std::max(
          worst_member, projection_residual(vec(nilpotent_log(f.p_minus)), span_m));
    }
    checks.push_back(residual_check("pkp_reconstruction", worst_recon, 1e-12));
    checks.push_back(residual_check("pkp_membership", worst_member, 1e-10));
  }
  {  // zeta(k g k^{-1}) = k zeta(g) k^{-1}.
    CounterRng rng(config.seed, 15);
    double worst = 0.0;
    for (int s = 0; s < 25; ++s) {
      const CMatrix g = point_to_group(random_unbounded_point(spec, rng));
      const CMatrix k = spec.genus == 1
                            ? circle_action(spec, 2.0 * M_PI * rng.next_unit())
                            : random_compact_element(spec, rng);
      const CMatrix lhs = factorize_pkp(k * g * k.partialPivLu().inverse(), frame).p_plus;
      const CMatrix rhs = k * factorize_pkp(g, frame).p_plus * k.partialPivLu().inverse();
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("zeta_equivariance", worst, 1e-12));
  }
  {  // Representation axioms.
    CounterRng rng(config.seed, 16);
    double worst_hom = 0.0;
    for (int s = 0; s < 20; ++s) {
      const CMatrix g1 = point_to_group(random_unbounded_point(spec, rng)) *
                         random_compact_element(spec, rng);
      const CMatrix g2 = point_to_group(random_unbounded_point(spec, rng));
      worst_hom = std::max(
          worst_hom,
          (rep.rho(g1 * g2) - rep.rho(g1) * rep.rho(g2)).cwiseAbs().maxCoeff());
    }
    checks.push_back(residual_check("rep_homomorphism", worst_hom, 1e-11));

    double worst_alg = 0.0;
    const auto ambient = algebra_basis(spec);
    for (int s = 0; s < 20; ++s) {
      const int n = spec.ambient_size();
      CMatrix x = CMatrix::Zero(n, n), y = CMatrix::Zero(n, n);
      for (const auto& b : ambient) {
        x += rng.next_gaussian() * b;
        y += rng.next_gaussian() * b;
      }
      const CMatrix lhs = rep.drho(bracket(x, y));
      const CMatrix rhs = bracket(rep.drho(x), rep.drho(y));
      worst_alg = std::max(worst_alg,
                           (lhs - rhs).cwiseAbs().maxCoeff() /
                               std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
    checks.push_back(residual_check("rep_algebra_homomorphism", worst_alg, 1e-11));

    double worst_exp = 0.0;
    for (const auto& basis : {frame.g_m11, frame.g_1m1})
      for (const auto& x : basis) {
        const CMatrix lhs = rep.rho(nilpotent_exp(x));
        const CMatrix rhs = nilpotent_exp(rep.drho(x));
        worst_exp = std::max(worst_exp, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    checks.push_back(residual_check("rep_exp_compatibility", worst_exp, 1e-12));
  }
  {
    checks.push_back(
        residual_check("shifting", check_shifting(rep, frame).max_residual(), 1e-12));
  }
  {  // sigma extends the base vector and both evaluation paths agree.
    const UnboundedPoint o = UnboundedPoint::reference(spec);
    const double ext =
        (eval_section(sigma, o) - sigma.base_vector).cwiseAbs().maxCoeff();
    checks.push_back(residual_check("section_extension", ext, 1e-13));

    CounterRng rng(config.seed, 17);
    double worst_paths = 0.0;
    double worst_member = 0.0;
    const HodgeFiberDecomposition ref = fiber_decompose(rep, o);
    for (int s = 0; s < 100; ++s) {
      const UnboundedPoint p = random_unbounded_point(spec, rng);
      const CVector a = eval_section(sigma, p);
      const CVector b = eval_section_factorized(sigma, p);
      worst_paths =
          std::max(worst_paths, (a - b).norm() / std::max(1.0, a.norm()));
      const HodgeFiberDecomposition decomp = push_decomposition(ref, rep, p);
      worst_member = std::max(
          worst_member,
          projection_residual(a, decomp.filtration_basis(sigma.p_level)));
    }
    checks.push_back(residual_check("two_path_evaluation", worst_paths, 1e-10));
    checks.push_back(residual_check("fiber_membership", worst_member, 1e-10));
  }
  {  // Weight decomposition does not depend on the defining point.
    CounterRng rng(config.seed, 18);
    const CMatrix base = weight_component(rep, rep.weight());
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const CMatrix g = rep.rho(point_to_group(random_unbounded_point(spec, rng)));
      const CMatrix moved = g * base;
      worst = std::max(worst, subspace_angle(base, moved));
    }
    checks.push_back(residual_check("weight_independence", worst, 1e-10));
  }
  {  // K-invariance of the Hermitian form.
    CounterRng rng(config.seed, 19);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const CMatrix k = (s % 2 == 0 || spec.genus == 1)
                            ? circle_action(spec, 2.0 * M_PI * rng.next_unit())
                            : random_compact_element(spec, rng);
      const CMatrix rk = rep.rho(k);
      CVector v(rep.dim()), w(rep.dim());
      for (int i = 0; i < rep.dim(); ++i) {
        v(i) = rng.next_gaussian();
        w(i) = rng.next_gaussian();
      }
      const Complex lhs = s_hermitian(pol, rk * v, rk * w);
      const Complex rhs = s_hermitian(pol, v, w);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    checks.push_back(residual_check("k_invariance_sh", worst, 1e-11));
  }
  {  // Definiteness of the Hodge gram matrices at the reference point.
    const HodgeFiberDecomposition decomp =
        fiber_decompose(rep, UnboundedPoint::reference(spec));
    double min_eig = std::numeric_limits<double>::infinity();
    const Complex phase = std::pow(kImag, -pol.weight);
    for (const auto& comp : decomp.components) {
      CMatrix gram(comp.basis.cols(), comp.basis.cols());
      for (Eigen::Index a = 0; a < comp.basis.cols(); ++a)
        for (Eigen::Index b = 0; b < comp.basis.cols(); ++b)
          gram(a, b) = std::pow(-1.0, comp.p) * phase *
                       (comp.basis.col(a).transpose() * pol.s.cast<Complex>() *
                        comp.basis.col(b).conjugate())(0);
      min_eig = std::min(min_eig, lambda_min_hermitian(CMatrix(0.5 * (gram + gram.adjoint()))));
    }
    Check c;
    c.name = "hodge_gram_min_eigenvalue";
    c.value = min_eig;
    c.tolerance = 1e-10;
    c.pass = min_eig > 1e-10;
    checks.push_back(c);
  }
  return checks;
}

Json run_s1_suite(const ScenarioConfig& config, const Representation& rep,
                  const HodgeFrame& frame, const PolarizationForm& pol,
                  const HolomorphicSection& sigma,
                  const std::vector<HolomorphicSection>& sections,
                  const Integrator& integrator, bool& pass) {
  const double orbit_tol = config.spec.bounded_dim() == 1 ? 1e-10 : 1e-9;
  CounterRng rng(config.seed, 21);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const UnboundedPoint p = random_unbounded_point(config.spec, rng);
    worst = std::max(worst, s1_orbit_check(sections[0], sigma, pol, p, 16));
    worst = std::max(worst, s1_orbit_check(sigma, sigma, pol, p, 16));
  }

  std::vector<int> alpha(static_cast<std::size_t>(config.spec.bounded_dim()), 0);
  alpha[0] = 1;
  const double theta = config.spec.bounded_dim() == 1 ? M_PI / 2.0 : M_PI / 4.0;
  const AveragingDemo demo =
      s1_averaging_demo(sigma, rep, frame, pol, alpha, integrator, theta);

  Json j;
  j["orbit_max_deviation"] = check_to_json(residual_check("s1_orbit", worst, orbit_tol));
  Json avg;
  avg["alpha"] = alpha;
  avg["theta"] = theta;
  avg["integral"] = complex_to_json(demo.integral);
  avg["rotated"] = complex_to_json(demo.rotated);
  avg["twist"] = complex_to_json(demo.twist);
  avg["twist_residual"] =
      check_to_json(residual_check("s1_averaging_twist", demo.twist_residual, demo.tolerance));
  avg["invariance_residual"] = check_to_json(
      residual_check("s1_averaging_invariance", demo.invariance_residual, demo.tolerance));
  j["averaging"] = avg;

  pass = worst <= orbit_tol && demo.twist_residual <= demo.tolerance &&
         demo.invariance_residual <= demo.tolerance;
  return j;
}

Json orthogonality_to_json(const OrthogonalityReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["max_magnitude"] = report.max_magnitude;
  j["sigma_norm"] = report.sigma_norm;
  Json cells = Json::array();
  for (const auto& cell : report.cells) {
    Json c;
    c["alpha"] = cell.alpha;
    c["section"] = cell.section_index;
    c["value"] = complex_to_json(cell.value);
    c["std_error"] = cell.std_error;
    c["magnitude"] = cell.magnitude;
    c["tolerance"] = cell.tolerance;
    c["pass"] = cell.pass;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j;
}

Json competitor_to_json(const CompetitorReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["trials"] = report.trials;
  j["max_degree"] = report.max_degree;
  j["min_norm_gap"] = report.min_norm_gap;
  j["norm_gap_tolerance"] = report.norm_gap_tolerance;
  j["max_pythagoras_residual"] = report.max_pythagoras_residual;
  j["pythagoras_tolerance"] = report.pythagoras_tolerance;
  return j;
}

Json constant_to_json(const ConstantReport& report) {
  Json j;
  j["constant"] = estimate_to_json(report.constant);
  j["volume"] = estimate_to_json(report.volume);
  j["gap"] = estimate_to_json(report.gap);
  j["base_norm"] = report.base_norm;
  j["ratio"] = report.ratio;
  j["ot_strict"] = report.strict;
  return j;
}

}  // namespace

RunResult cmd_extend(const ScenarioConfig& config) {
  const auto start = Clock::now();
  const Representation rep = representation_from_config(config);
  const HodgeFrame frame = hodge_decompose_algebra(config.spec);
  const PolarizationForm pol = builtin_polarization(rep);
  const CVector v = base_vector_from_config(config, rep);
  const HolomorphicSection sigma = build_section(v, rep.smallest_p(), rep, frame);

  Json report = report_skeleton(config, "extend");
  bool pass = true;

  const PolynomialForm poly = section_polynomial(sigma);
  Json coefficients = Json::array();
  for (std::size_t m = 0; m < poly.exponents.size(); ++m) {
    Json entry;
    entry["alpha"] = poly.exponents[m];
    Json comps = Json::array();
    for (Eigen::Index i = 0; i < poly.coefficients.rows(); ++i) {
      Complex c = poly.coefficients(i, static_cast<Eigen::Index>(m));
      if (std::abs(c.real()) < 1e-14) c.real(0.0);
      if (std::abs(c.imag()) < 1e-14) c.imag(0.0);
      comps.push_back(complex_to_json(c));
    }
    entry["components"] = comps;
    coefficients.push_back(entry);
  }
  report["section"]["polynomial_coefficients"] = coefficients;

  const HolomorphyReport holo = holomorphy_check(sigma);
  report["section"]["degree_bound"] = holo.degree_bound;
  report["section"]["holomorphy"] =
      check_to_json(residual_check("holomorphy", holo.max_heldout_residual, 1e-10));
  pass = pass && holo.max_heldout_residual <= 1e-10;

  // Grid evaluation with fiber-membership residuals. The grid comes from the
  // config when given, otherwise a seeded default set.
  const HodgeFiberDecomposition ref =
      fiber_decompose(rep, UnboundedPoint::reference(config.spec));
  CounterRng rng(config.seed, 31);
  std::vector<CMatrix> grid_points;
  if (!config.grid.empty()) {
    for (const auto& coords : config.grid) {
      CMatrix z = CMatrix::Zero(config.spec.genus, config.spec.genus);
      int idx = 0;
      for (int a = 0; a < config.spec.genus; ++a)
        for (int b = a; b < config.spec.genus; ++b) {
          z(a, b) = coords[static_cast<std::size_t>(idx)];
          z(b, a) = z(a, b);
          ++idx;
        }
      grid_points.push_back(z);
    }
  } else {
    for (int s = 0; s < 9; ++s) {
      CMatrix z = CMatrix::Zero(config.spec.genus, config.spec.genus);
      if (s > 0) {
        for (int a = 0; a < config.spec.genus; ++a)
          for (int b = a; b < config.spec.genus; ++b) {
            const Complex val = 0.55 * rng.next_box();
            z(a, b) = val;
            z(b, a) = val;
          }
      }
      grid_points.push_back(z);
    }
  }
  Json grid = Json::array();
  double worst_member = 0.0;
  for (const CMatrix& z : grid_points) {
    if (!contains(config.spec, z, Model::Bounded)) continue;
    const BoundedPoint bp{config.spec, z};
    const CVector value = eval_section_bounded(sigma, bp);
    const UnboundedPoint p = hc_inverse(bp);
    const double member = projection_residual(
        value, push_decomposition(ref, rep, p).filtration_basis(sigma.p_level));
    worst_member = std::max(worst_member, member);
    Json entry;
    Json zj = Json::array();
    for (int a = 0; a < config.spec.genus; ++a)
      for (int b = a; b < config.spec.genus; ++b) zj.push_back(complex_to_json(z(a, b)));
    entry["coordinates"] = zj;
    Json valj = Json::array();
    for (Eigen::Index i = 0; i < value.size(); ++i)
      valj.push_back(complex_to_json(value(i)));
    entry["value"] = valj;
    entry["fiber_residual"] = member;
    grid.push_back(entry);
  }
  report["section"]["grid"] = grid;
  report["section"]["fiber_membership"] =
      check_to_json(residual_check("fiber_membership", worst_member, 1e-10));
  pass = pass && worst_member <= 1e-10;

  report["overall_pass"] = pass;
  report["timing"]["total_seconds"] = seconds_since(start);
  return RunResult{report, pass ? 0 : 1, ""};
}

RunResult cmd_verify(const ScenarioConfig& config) {
  const auto start = Clock::now();
  const Representation rep = representation_from_config(config);
  const HodgeFrame frame = hodge_decompose_algebra(config.spec);
  const PolarizationForm pol = builtin_polarization(rep);
  const CVector v = base_vector_from_config(config, rep);
  const HolomorphicSection sigma = build_section(v, rep.smallest_p(), rep, frame);
  const std::vector<HolomorphicSection> sections = frame_sections(rep, frame, pol);
  const Integrator integrator = integrator_from_config(config);
  const bool mc = integrator.kind == Integrator::Kind::MonteCarlo;

  Json report = report_skeleton(config, "verify");
  Json timing;
  bool pass = true;

  if (config.suites.structure) {
    const auto t0 = Clock::now();
    const auto checks = structure_checks(config, rep, frame, pol, sigma);
    Json list = Json::array();
    for (const auto& c : checks) {
      list.push_back(check_to_json(c));
      pass = pass && c.pass;
    }
    report["suites"]["structure"] = list;
    timing["structure_seconds"] = seconds_since(t0);
  }

  if (config.suites.holomorphy) {
    const auto t0 = Clock::now();
    const HolomorphyReport holo = holomorphy_check(sigma);
    Json j;
    j["degree_bound"] = holo.degree_bound;
    j["heldout"] =
        check_to_json(residual_check("holomorphy", holo.max_heldout_residual, 1e-10));
    report["suites"]["holomorphy"] = j;
    pass = pass && holo.max_heldout_residual <= 1e-10;
    timing["holomorphy_seconds"] = seconds_since(t0);
  }

  if (config.suites.s1) {
    const auto t0 = Clock::now();
    bool s1_pass = true;
    report["suites"]["s1_invariance"] =
        run_s1_suite(config, rep, frame, pol, sigma, sections, integrator, s1_pass);
    pass = pass && s1_pass;
    timing["s1_seconds"] = seconds_since(t0);
  }

  if (config.suites.orthogonality) {
    const auto t0 = Clock::now();
    const OrthogonalityReport orth =
        orthogonality_suite(sigma, rep, frame, pol, effective_max_degree(config),
                            integrator, config.perturb);
    report["suites"]["orthogonality"] = orthogonality_to_json(orth);
    pass = pass && orth.pass;
    timing["orthogonality_seconds"] = seconds_since(t0);
  }

  if (config.suites.competitor) {
    const auto t0 = Clock::now();
    Integrator comp_integrator = integrator;
    if (mc) comp_integrator.mc_candidates = config.competitor_samples;
    const int degree = std::min(effective_max_degree(config), mc ? 3 : 4);
    const CompetitorReport comp =
        competitor_test(sigma, rep, frame, pol, comp_integrator,
                        config.competitor_trials, config.seed, degree);
    report["suites"]["competitor"] = competitor_to_json(comp);
    pass = pass && comp.pass;
    timing["competitor_seconds"] = seconds_since(t0);
  }

  if (config.suites.constant) {
    const auto t0 = Clock::now();
    const ConstantReport constant = extension_constant(sigma, rep, pol, integrator);
    report["suites"]["constant"] = constant_to_json(constant);
    pass = pass && constant.strict;
    timing["constant_seconds"] = seconds_since(t0);
  }

  report["overall_pass"] = pass;
  timing["total_seconds"] = seconds_since(start);
  report["timing"] = timing;
  return RunResult{report, pass ? 0 : 1, ""};
}

RunResult cmd_constant(const ScenarioConfig& config) {
  const auto start = Clock::now();
  std::vector<std::string> scenarios = config.constant_scenarios;
  if (scenarios.empty())
    scenarios = {"standard_sl2", "sym2_sl2", "sym3_sl2", "standard_sp4",
                 "standard_sp6"};

  Json report = report_skeleton(config, "constant");
  Json rows = Json::array();
  std::string csv = "scenario,constant,constant_std_error,volume,volume_std_error,ratio\n";
  bool pass = true;

  for (const auto& name : scenarios) {
    const Representation rep = parse_representation(name);
    const DomainSpec spec = rep.domain();
    const HodgeFrame frame = hodge_decompose_algebra(spec);
    const PolarizationForm pol = builtin_polarization(rep);
    const HolomorphicSection sigma =
        build_section(rep.smallest_piece_basis().col(0), rep.smallest_p(), rep, frame);

    Integrator integrator;
    if (spec.bounded_dim() == 1) {
      integrator = Integrator::disk(
          QuadratureRule::disk(config.radial_nodes, config.angular_nodes),
          config.parallel);
    } else {
      integrator = Integrator::monte_carlo(MCSampler{config.seed, spec},
                                           config.mc_samples, config.parallel);
    }
    const ConstantReport c = extension_constant(sigma, rep, pol, integrator);
    pass = pass && c.strict;

    Json row;
    row["scenario"] = name;
    row["domain"] = spec.name();
    row["result"] = constant_to_json(c);
    rows.push_back(row);

    char line[256];
    std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  name.c_str(), c.constant.value.real(), c.constant.std_error,
                  c.volume.value.real(), c.volume.std_error, c.ratio);
    csv += line;
  }

  report["table"] = rows;
  report["overall_pass"] = pass;
  report["timing"]["total_seconds"] = seconds_since(start);
  return RunResult{report, pass ? 0 : 1, csv};
}

std::string report_to_string(const Json& report, bool strip_timing) {
  if (!strip_timing) return report.dump(2) + "\n";
  Json copy = report;
  copy.erase("timing");
  return copy.dump(2) + "\n";
}

void write_report_files(const ScenarioConfig& config, const RunResult& result) {
  if (config.out_path.empty()) return;
  std::ofstream out(config.out_path);
  if (!out) throw ConfigError("cannot write report to " + config.out_path);
  out << report_to_string(result.report);
  if (!result.csv.empty()) {
    const std::string csv_path = config.out_path + ".csv";
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot write CSV to " + csv_path);
    csv << result.csv;
  }
}

}  // namespace minext
