#pragma once

#include "minext/quadrature.hpp"

namespace minext {

/// A monomial in the bounded coordinates paired with a frame-section index.
struct MonomialCompetitor {
  std::vector<int> alpha;  // exponents, total degree >= 1
  int section_index = 0;
};

/// The frame sections e_1..e_r extending the canonical basis of the smallest
/// piece at the reference point. Construction checks that the sections stay
/// pointwise linearly independent at a few sampled points.
std::vector<HolomorphicSection> frame_sections(const Representation& rep,
                                               const HodgeFrame& frame,
                                               const PolarizationForm& pol);

struct OrthogonalityCell {
  std::vector<int> alpha;
  int section_index = 0;
  Complex value{0.0, 0.0};
  double std_error = 0.0;
  double magnitude = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct OrthogonalityReport {
  std::vector<OrthogonalityCell> cells;
  double max_magnitude = 0.0;
  double sigma_norm = 0.0;  // for context in reports
  bool pass = false;
};

/// Inner products (f^alpha e_j, sigma) for all monomials of total degree
/// 1..max_degree. For the minimal section these all vanish; the optional
/// perturbation eps replaces sigma by sigma + eps * z_1 * e_1 as a negative
/// control. Deterministic rules use an absolute tolerance of 1e-10, Monte
/// Carlo uses three standard errors.
OrthogonalityReport orthogonality_suite(const HolomorphicSection& sec,
                                        const Representation& rep,
                                        const HodgeFrame& frame,
                                        const PolarizationForm& pol,
                                        int max_degree,
                                        const Integrator& integrator,
                                        double perturb_eps = 0.0);

/// The change-of-variables mechanism behind the vanishing: the integral of
/// f^alpha h_E(e_1, sigma) picks up the factor e^{2 i |alpha| theta} when the
/// coordinates rotate, yet is invariant, so it must vanish.
struct AveragingDemo {
  Complex integral{0.0, 0.0};
  Complex rotated{0.0, 0.0};
  Complex twist{1.0, 0.0};
  double twist_residual = 0.0;       // |rotated - twist * integral|
  double invariance_residual = 0.0;  // |rotated - integral|
  double tolerance = 0.0;
};

AveragingDemo s1_averaging_demo(const HolomorphicSection& sec,
                                const Representation& rep,
                                const HodgeFrame& frame,
                                const PolarizationForm& pol,
                                const std::vector<int>& alpha,
                                const Integrator& integrator, double theta);

struct CompetitorReport {
  int trials = 0;
  int max_degree = 0;
  double min_norm_gap = 0.0;          // min over trials of |zeta|^2 - |sigma|^2
  double max_pythagoras_residual = 0.0;
  double norm_gap_tolerance = 0.0;
  double pythagoras_tolerance = 0.0;
  bool pass = false;
};

/// Seeded random competitors zeta = sigma + sum c_{alpha,j} f^alpha e_j with
/// complex Gaussian coefficients. Checks |zeta|^2 >= |sigma|^2 - tol and the
/// Pythagorean identity |zeta|^2 = |zeta - sigma|^2 + |sigma|^2.
CompetitorReport competitor_test(const HolomorphicSection& sec,
                                 const Representation& rep,
                                 const HodgeFrame& frame,
                                 const PolarizationForm& pol,
                                 const Integrator& integrator, int trials,
                                 std::uint64_t seed, int max_degree = 4,
                                 double coefficient_scale = 1.0);

struct ConstantReport {
  IntegralEstimate constant;   // C = |sigma|^2 / h_E(v, v)
  IntegralEstimate volume;     // mu(D)
  IntegralEstimate gap;        // mu(D) - C, paired samples
  double base_norm = 0.0;      // h_E(v, v) at the reference point
  double ratio = 0.0;          // C / mu(D)
  bool strict = false;         // C < mu(D), by 3 sigma for Monte Carlo
};

ConstantReport extension_constant(const HolomorphicSection& sec,
                                  const Representation& rep,
                                  const PolarizationForm& pol,
                                  const Integrator& integrator);

struct MinimalityReport {
  OrthogonalityReport orthogonality;
  CompetitorReport competitor;
  ConstantReport constant;
  std::vector<AveragingDemo> averaging;
  bool pass = false;
};

}  // namespace minext
