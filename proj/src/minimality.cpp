#include "minext/minimality.hpp"

#include <cmath>

namespace minext {

namespace {

// Shared per-point machinery: all frame sections and sigma evaluate through
// one exponential, and all Hodge pairings share one fiber factorization.
struct SuiteContext {
  const Representation& rep;
  const HodgeFrame& frame;
  const PolarizationForm& pol;
  HodgeFiberDecomposition ref;
  std::vector<CVector> frame_vectors;  // base vectors of e_1..e_r
  CVector sigma_vector;

  SuiteContext(const HolomorphicSection& sec, const Representation& rep_,
               const HodgeFrame& frame_, const PolarizationForm& pol_)
      : rep(rep_), frame(frame_), pol(pol_) {
    ref = fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
    const CMatrix basis = rep.smallest_piece_basis();
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
      frame_vectors.push_back(basis.col(j));
    sigma_vector = sec.base_vector;
  }

  int rank() const { return static_cast<int>(frame_vectors.size()); }

  struct PointData {
    CVector he_frame_sigma;  // h_E(e_j, sigma)
    CMatrix he_frame_frame;  // h_E(e_j, e_l)
    Complex he_sigma_sigma{0.0, 0.0};
  };

  PointData eval(const BoundedPoint& z) const {
    const int r = rank();
    const CMatrix mover = nilpotent_exp(rep.drho(gm11_element(frame, z.z)));
    const UnboundedPoint p = hc_inverse(z);
    const FiberMetric metric(pol, push_decomposition(ref, rep, p));

    std::vector<std::vector<CVector>> frame_pieces;
    frame_pieces.reserve(static_cast<std::size_t>(r));
    for (const CVector& v : frame_vectors)
      frame_pieces.push_back(metric.split(mover * v));
    const std::vector<CVector> sigma_pieces = metric.split(mover * sigma_vector);

    PointData out;
    out.he_frame_sigma.resize(r);
    out.he_frame_frame.resize(r, r);
    for (int j = 0; j < r; ++j) {
      out.he_frame_sigma(j) =
          metric.pair(frame_pieces[static_cast<std::size_t>(j)], sigma_pieces);
      for (int l = 0; l < r; ++l)
        out.he_frame_frame(j, l) =
            metric.pair(frame_pieces[static_cast<std::size_t>(j)],
                        frame_pieces[static_cast<std::size_t>(l)]);
    }
    out.he_sigma_sigma = metric.pair(sigma_pieces, sigma_pieces);
    return out;
  }

  double base_norm() const {
    const FiberMetric metric(pol, ref);
    return metric(sigma_vector, sigma_vector).real();
  }
};

std::vector<Complex> monomial_values(const std::vector<std::vector<int>>& alphas,
                                     const BoundedPoint& z) {
  std::vector<Complex> out;
  out.reserve(alphas.size());
  for (const auto& a : alphas) out.push_back(monomial_value(a, z));
  return out;
}

bool is_monte_carlo(const Integrator& it) {
  return it.kind == Integrator::Kind::MonteCarlo;
}

}  // namespace

std::vector<HolomorphicSection> frame_sections(const Representation& rep,
                                               const HodgeFrame& frame,
                                               const PolarizationForm& pol) {
  const CMatrix basis = rep.smallest_piece_basis();
  std::vector<HolomorphicSection> sections;
  for (Eigen::Index j = 0; j < basis.cols(); ++j)
    sections.push_back(build_section(basis.col(j), rep.smallest_p(), rep, frame));

  // Pointwise independence spot check via the Gram determinant.
  const HodgeFiberDecomposition ref =
      fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
  CounterRng rng(0xF7A3E5ULL);
  for (int s = 0; s < 5; ++s) {
    const UnboundedPoint p = random_unbounded_point(rep.domain(), rng);
    const FiberMetric metric(pol, push_decomposition(ref, rep, p));
    const Eigen::Index r = basis.cols();
    CMatrix gram(r, r);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index l = 0; l < r; ++l)
        gram(j, l) = metric(eval_section(sections[static_cast<std::size_t>(j)], p),
                            eval_section(sections[static_cast<std::size_t>(l)], p));
    if (std::abs(gram.determinant()) < 1e-10)
      throw InternalConsistencyError("frame_sections: sections degenerate at a point");
  }
  return sections;
}

OrthogonalityReport orthogonality_suite(const HolomorphicSection& sec,
                                        const Representation& rep,
                                        const HodgeFrame& frame,
                                        const PolarizationForm& pol,
                                        int max_degree,
                                        const Integrator& integrator,
                                        double perturb_eps) {
  const SuiteContext ctx(sec, rep, frame, pol);
  const int r = ctx.rank();
  const auto alphas = monomial_exponents(rep.domain().bounded_dim(), 1, max_degree);
  const int n_cells = static_cast<int>(alphas.size()) * r;

  // Cells first, then |sigma_eff|^2 for context.
  auto f = [&](const BoundedPoint& z, std::span<Complex> out) {
    const SuiteContext::PointData data = ctx.eval(z);
    const std::vector<Complex> mono = monomial_values(alphas, z);
    CVector he_sigma_eff = data.he_frame_sigma;
    Complex norm_eff = data.he_sigma_sigma;
    if (perturb_eps != 0.0) {
      // sigma -> sigma + eps * z_1 * e_1 (conjugate-linear in the metric).
      const Complex coeff = perturb_eps * z.z(0, 0);
      he_sigma_eff += std::conj(coeff) * data.he_frame_frame.col(0);
      const Complex cross = coeff * data.he_frame_sigma(0);
      norm_eff += 2.0 * cross.real() + std::norm(coeff) * data.he_frame_frame(0, 0).real();
    }
    int at = 0;
    for (std::size_t a = 0; a < alphas.size(); ++a)
      for (int j = 0; j < r; ++j) out[at++] = mono[a] * he_sigma_eff(j);
    out[at] = norm_eff;
  };

  const auto estimates =
      integrate_batch(integrator, rep.domain(), f, n_cells + 1);

  OrthogonalityReport report;
  report.sigma_norm = estimates[static_cast<std::size_t>(n_cells)].value.real();
  const bool mc = is_monte_carlo(integrator);
  int at = 0;
  bool all_pass = true;
  for (const auto& alpha : alphas)
    for (int j = 0; j < r; ++j) {
      const IntegralEstimate& e = estimates[static_cast<std::size_t>(at++)];
      OrthogonalityCell cell;
      cell.alpha = alpha;
      cell.section_index = j;
      cell.value = e.value;
      cell.std_error = e.std_error;
      cell.magnitude = std::abs(e.value);
      cell.tolerance = mc ? 3.0 * e.std_error : 1e-10;
      cell.pass = cell.magnitude <= cell.tolerance;
      all_pass = all_pass && cell.pass;
      report.max_magnitude = std::max(report.max_magnitude, cell.magnitude);
      report.cells.push_back(std::move(cell));
    }
  report.pass = all_pass;
  return report;
}

AveragingDemo s1_averaging_demo(const HolomorphicSection& sec,
                                const Representation& rep,
                                const HodgeFrame& frame,
                                const PolarizationForm& pol,
                                const std::vector<int>& alpha,
                                const Integrator& integrator, double theta) {
  const SuiteContext ctx(sec, rep, frame, pol);
  int degree = 0;
  for (int e : alpha) degree += e;
  if (degree < 1) throw ConfigError("s1_averaging_demo: degree must be >= 1");

  const Complex rot = std::exp(Complex(0.0, 2.0 * theta));
  auto f = [&](const BoundedPoint& z, std::span<Complex> out) {
    const Complex plain =
        monomial_value(alpha, z) * ctx.eval(z).he_frame_sigma(0);
    BoundedPoint moved = z;
    moved.z *= rot;
    const Complex rotated =
        monomial_value(alpha, moved) * ctx.eval(moved).he_frame_sigma(0);
    out[0] = plain;
    out[1] = rotated;
  };
  const auto estimates = integrate_batch(integrator, rep.domain(), f, 2);

  AveragingDemo demo;
  demo.integral = estimates[0].value;
  demo.rotated = estimates[1].value;
  demo.twist = std::pow(rot, degree);
  demo.twist_residual = std::abs(demo.rotated - demo.twist * demo.integral);
  demo.invariance_residual = std::abs(demo.rotated - demo.integral);
  demo.tolerance = is_monte_carlo(integrator)
                       ? 3.0 * (estimates[0].std_error + estimates[1].std_error)
                       : 1e-10;
  return demo;
}

CompetitorReport competitor_test(const HolomorphicSection& sec,
                                 const Representation& rep,
                                 const HodgeFrame& frame,
                                 const PolarizationForm& pol,
                                 const Integrator& integrator, int trials,
                                 std::uint64_t seed, int max_degree,
                                 double coefficient_scale) {
  if (trials < 1) throw ConfigError("competitor_test: trials must be >= 1");
  const SuiteContext ctx(sec, rep, frame, pol);
  const int r = ctx.rank();
  const auto alphas = monomial_exponents(rep.domain().bounded_dim(), 1, max_degree);
  const int dim = static_cast<int>(alphas.size()) * r;

  // Moments shared by every trial: |sigma|^2, the cross cells
  // (f^a e_j, sigma), and the Gram moments (f^a e_j, f^b e_l).
  auto f = [&](const BoundedPoint& z, std::span<Complex> out) {
    const SuiteContext::PointData data = ctx.eval(z);
    const std::vector<Complex> mono = monomial_values(alphas, z);
    out[0] = data.he_sigma_sigma;
    int at = 1;
    for (std::size_t a = 0; a < alphas.size(); ++a)
      for (int j = 0; j < r; ++j) out[at++] = mono[a] * data.he_frame_sigma(j);
    for (std::size_t a = 0; a < alphas.size(); ++a)
      for (int j = 0; j < r; ++j)
        for (std::size_t b = 0; b < alphas.size(); ++b)
          for (int l = 0; l < r; ++l)
            out[at++] =
                mono[a] * std::conj(mono[b]) * data.he_frame_frame(j, l);
  };
  const auto estimates =
      integrate_batch(integrator, rep.domain(), f, 1 + dim + dim * dim);

  const IntegralEstimate sigma_sq = estimates[0];
  auto cross = [&](int a) { return estimates[static_cast<std::size_t>(1 + a)]; };
  auto gram = [&](int a, int b) {
    return estimates[static_cast<std::size_t>(1 + dim + a * dim + b)];
  };

  const bool mc = is_monte_carlo(integrator);
  CompetitorReport report;
  report.trials = trials;
  report.max_degree = max_degree;
  report.min_norm_gap = std::numeric_limits<double>::infinity();
  report.norm_gap_tolerance = mc ? 0.0 : 1e-10;
  report.pythagoras_tolerance = mc ? 0.0 : 1e-10;

  bool all_pass = true;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial) + 1);
    CVector c(dim);
    for (int a = 0; a < dim; ++a)
      c(a) = coefficient_scale * rng.next_gaussian();

    // |zeta|^2 - |sigma|^2 = |zeta - sigma|^2 + 2 Re (zeta - sigma, sigma).
    Complex quad = 0.0;
    double quad_err = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        quad += c(a) * std::conj(c(b)) * gram(a, b).value;
        quad_err += std::abs(c(a)) * std::abs(c(b)) * gram(a, b).std_error;
      }
    Complex cross_term = 0.0;
    double cross_err = 0.0;
    for (int a = 0; a < dim; ++a) {
      cross_term += c(a) * cross(a).value;
      cross_err += std::abs(c(a)) * cross(a).std_error;
    }

    const double gap = quad.real() + 2.0 * cross_term.real();
    const double pyth_residual = std::abs(2.0 * cross_term.real());
    const double gap_tol = mc ? 3.0 * (quad_err + 2.0 * cross_err) : 1e-10;
    const double pyth_tol = mc ? 3.0 * (2.0 * cross_err) : 1e-10;

    report.min_norm_gap = std::min(report.min_norm_gap, gap);
    report.max_pythagoras_residual =
        std::max(report.max_pythagoras_residual, pyth_residual);
    report.norm_gap_tolerance = std::max(report.norm_gap_tolerance, gap_tol);
    report.pythagoras_tolerance = std::max(report.pythagoras_tolerance, pyth_tol);
    all_pass = all_pass && gap >= -gap_tol && pyth_residual <= pyth_tol;
  }
  (void)sigma_sq;
  report.pass = all_pass;
  return report;
}

ConstantReport extension_constant(const HolomorphicSection& sec,
                                  const Representation& rep,
                                  const PolarizationForm& pol,
                                  const Integrator& integrator) {
  const SuiteContext ctx(sec, rep, sec.frame, pol);
  const double hv = ctx.base_norm();
  if (hv <= 0.0)
    throw InvalidBaseVectorError("extension_constant: base vector has zero norm");

  auto f = [&](const BoundedPoint& z, std::span<Complex> out) {
    const Complex density = ctx.eval(z).he_sigma_sigma / hv;
    out[0] = density;
    out[1] = 1.0;
    out[2] = 1.0 - density;  // paired difference mu(D) - C
  };
  const auto estimates = integrate_batch(integrator, rep.domain(), f, 3);

  ConstantReport report;
  report.constant = estimates[0];
  report.volume = estimates[1];
  report.gap = estimates[2];
  report.base_norm = hv;
  report.ratio = report.constant.value.real() / report.volume.value.real();
  if (is_monte_carlo(integrator))
    report.strict = report.gap.value.real() > 3.0 * report.gap.std_error;
  else
    report.strict = report.gap.value.real() > 0.0;
  return report;
}

}  // namespace minext
