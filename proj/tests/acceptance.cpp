// Acceptance suite: one line per criterion, exit code 0 only if all pass.
//
//   1. elliptic extension constant pi/2 (disk rule, < 1 s)
//   2. pointwise norm ratio 1 - |t|^2
//   3. closed-form section values through both evaluation paths
//   4. orthogonality of the minimal section against monomial competitors
//   5. negative control: a perturbed section must fail the suite
//   6. competitor norms and the Pythagorean identity
//   7. strict Ohsawa-Takegoshi inequality C < mu(D)
//   8. structure suite (algebra, factorization, fibers, invariance)
//   9. reproducibility and total runtime

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "minext/harness.hpp"

using namespace minext;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double now_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

CVector cvec2(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

bool check_named(const Json& structure, const std::string& name, double tol) {
  for (const auto& c : structure)
    if (c["name"].get<std::string>() == name)
      return c["pass"].get<bool>() && c["tolerance"].get<double>() <= tol;
  return false;
}

}  // namespace

int main() {
  const auto t_total = std::chrono::steady_clock::now();

  // Shared elliptic objects.
  const Representation rep = Representation::standard_sl2();
  const HodgeFrame frame = hodge_decompose_algebra(rep.domain());
  const PolarizationForm pol = builtin_polarization(rep);
  const HolomorphicSection sigma = build_section(cvec2(kImag, 1), 1, rep, frame);
  const Integrator disk = Integrator::disk();

  // Criterion 1: C = pi/2 to 1e-10 with the default disk rule in under 1 s.
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ConstantReport c = extension_constant(sigma, rep, pol, disk);
    const double elapsed = now_seconds(t0);
    const double err = std::abs(c.constant.value - Complex(M_PI / 2.0));
    report(1, err < 1e-10 && elapsed < 1.0,
           fmt("|C - pi/2| = %.3e (tol 1e-10), runtime %.3f s (tol 1 s)", err,
               elapsed));
  }

  // Criterion 2: h_E(sigma, sigma)(tau) / h_E(v, v) = 1 - |t|^2 at 100 points.
  {
    CounterRng rng(2026, 1);
    const Complex hv = polarization_function(sigma, sigma, pol,
                                             UnboundedPoint::from_tau(kImag));
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const Complex tau = random_unbounded_point(rep.domain(), rng).tau();
      const Complex t = (tau - kImag) / (tau + kImag);
      const Complex ratio =
          polarization_function(sigma, sigma, pol, UnboundedPoint::from_tau(tau)) / hv;
      worst = std::max(worst, std::abs(ratio - (1.0 - std::norm(t))));
    }
    report(2, worst < 1e-10,
           fmt("max |ratio - (1 - |t|^2)| = %.3e over 100 points (tol 1e-10)", worst));
  }

  // Criterion 3: sigma(tau) = 2i/(tau + i) (tau, 1)^T on both paths to 1e-12,
  // and the two paths agree to 1e-10.
  {
    CounterRng rng(2026, 2);
    double worst_formula = 0.0;
    double worst_paths = 0.0;
    for (int s = 0; s < 100; ++s) {
      const Complex tau = random_unbounded_point(rep.domain(), rng).tau();
      const UnboundedPoint p = UnboundedPoint::from_tau(tau);
      const CVector expected = (2.0 * kImag / (tau + kImag)) * cvec2(tau, 1.0);
      const CVector a = eval_section(sigma, p);
      const CVector b = eval_section_factorized(sigma, p);
      worst_formula = std::max(worst_formula, (a - expected).cwiseAbs().maxCoeff());
      worst_formula = std::max(worst_formula, (b - expected).cwiseAbs().maxCoeff());
      worst_paths = std::max(worst_paths, (a - b).cwiseAbs().maxCoeff());
    }
    report(3, worst_formula < 1e-12 && worst_paths < 1e-10,
           fmt("max formula residual %.3e (tol 1e-12), path gap %.3e (tol 1e-10)",
               worst_formula, worst_paths));
  }

  // Full default verify runs: elliptic twice (for reproducibility) and the
  // genus-2 scenario with 10^6 Monte Carlo samples.
  ScenarioConfig elliptic;
  const RunResult elliptic_a = cmd_verify(elliptic);
  const RunResult elliptic_b = cmd_verify(elliptic);

  ScenarioConfig sp4;
  sp4.spec = DomainSpec::siegel(2);
  sp4.representation = "standard_sp4";
  sp4.mc_samples = 1000000;
  const RunResult sp4_run = cmd_verify(sp4);

  const Json& orth_disk = elliptic_a.report["suites"]["orthogonality"];
  const Json& orth_mc = sp4_run.report["suites"]["orthogonality"];

  // Criterion 4: orthogonality cells vanish (degrees 1..6 on the disk at
  // 1e-10, degrees 1..3 on the Siegel disk within 3 sigma of 0).
  {
    const bool disk_ok = orth_disk["pass"].get<bool>() &&
                         orth_disk["max_magnitude"].get<double>() < 1e-10 &&
                         orth_disk["cells"].size() == 6;
    const bool mc_ok = orth_mc["pass"].get<bool>() && orth_mc["cells"].size() == 38;
    report(4, disk_ok && mc_ok,
           fmt("disk max %.3e over 6 cells (tol 1e-10); Siegel max %.3e over 38 "
               "cells within 3 sigma",
               orth_disk["max_magnitude"].get<double>(),
               orth_mc["max_magnitude"].get<double>()));
  }

  // Criterion 5: with the 0.1 perturbation at least one magnitude exceeds ten
  // times its tolerance.
  {
    const OrthogonalityReport bad =
        orthogonality_suite(sigma, rep, frame, pol, 6, disk, 0.1);
    double loudest = 0.0;
    for (const auto& cell : bad.cells)
      if (cell.tolerance > 0.0)
        loudest = std::max(loudest, cell.magnitude / cell.tolerance);
    report(5, !bad.pass && loudest > 10.0,
           fmt("perturbed suite fails with max magnitude/tolerance = %.3e (> 10)",
               loudest));
  }

  // Criterion 6: competitor checks from both default verify runs.
  {
    const Json& comp_disk = elliptic_a.report["suites"]["competitor"];
    const Json& comp_mc = sp4_run.report["suites"]["competitor"];
    const bool disk_ok = comp_disk["pass"].get<bool>() &&
                         comp_disk["trials"].get<int>() == 100 &&
                         comp_disk["min_norm_gap"].get<double>() >= -1e-10 &&
                         comp_disk["max_pythagoras_residual"].get<double>() <= 1e-10;
    const bool mc_ok =
        comp_mc["pass"].get<bool>() && comp_mc["trials"].get<int>() == 100;
    report(6, disk_ok && mc_ok,
           fmt("disk min gap %.3e, Pythagoras %.3e (tol 1e-10); Siegel pass within "
               "3 sigma",
               comp_disk["min_norm_gap"].get<double>(),
               comp_disk["max_pythagoras_residual"].get<double>()));
  }

  // Criterion 7: C < mu(D), exactly for the disk and by 3 sigma on D_2.
  {
    const Json& c_disk = elliptic_a.report["suites"]["constant"];
    const Json& c_mc = sp4_run.report["suites"]["constant"];
    const double gap_mc = c_mc["gap"]["value"][0].get<double>();
    const double se_mc = c_mc["gap"]["std_error"].get<double>();
    const bool ok = c_disk["ot_strict"].get<bool>() &&
                    c_mc["ot_strict"].get<bool>() && gap_mc > 3.0 * se_mc;
    report(7, ok,
           fmt("disk: pi/2 < pi; Siegel gap %.4f = %.1f sigma (needs > 3)", gap_mc,
               se_mc > 0 ? gap_mc / se_mc : 0.0));
  }

  // Criterion 8: structure suite at the published tolerances, both scenarios.
  {
    const Json& sd = elliptic_a.report["suites"]["structure"];
    const Json& sm = sp4_run.report["suites"]["structure"];
    bool ok = true;
    for (const Json* s : {&sd, &sm}) {
      ok = ok && check_named(*s, "bracket_abelian", 1e-14);
      ok = ok && check_named(*s, "shifting", 1e-12);
      ok = ok && check_named(*s, "pkp_reconstruction", 1e-12);
      ok = ok && check_named(*s, "zeta_equivariance", 1e-12);
      ok = ok && check_named(*s, "fiber_membership", 1e-10);
      ok = ok && check_named(*s, "k_invariance_sh", 1e-11);
      for (const auto& c : *s) ok = ok && c["pass"].get<bool>();
    }
    const bool s1_disk =
        elliptic_a.report["suites"]["s1_invariance"]["orbit_max_deviation"]["pass"]
            .get<bool>() &&
        elliptic_a.report["suites"]["s1_invariance"]["orbit_max_deviation"]
                ["tolerance"].get<double>() <= 1e-10;
    const bool s1_mc =
        sp4_run.report["suites"]["s1_invariance"]["orbit_max_deviation"]["pass"]
            .get<bool>() &&
        sp4_run.report["suites"]["s1_invariance"]["orbit_max_deviation"]
                ["tolerance"].get<double>() <= 1e-9;
    ok = ok && s1_disk && s1_mc;
    report(8, ok,
           std::string("all structure checks pass at their tolerances on both "
                       "scenarios (") +
               std::to_string(sd.size()) + " + " + std::to_string(sm.size()) +
               " checks)");
  }

  // Criterion 9: identical config + seed gives byte-identical reports, and
  // the default suites finish within the runtime budget.
  {
    const std::string a = report_to_string(elliptic_a.report, true);
    const std::string b = report_to_string(elliptic_b.report, true);
    const double elapsed = now_seconds(t_total);
    const bool ok = (a == b) && elliptic_a.exit_code == 0 &&
                    sp4_run.exit_code == 0 && elapsed < 180.0;
    report(9, ok,
           fmt("reports byte-identical (less timing); total runtime %.1f s "
               "(tol 180 s)",
               elapsed));
  }

  std::printf("%s: %d of 9 criteria pass\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
              9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
