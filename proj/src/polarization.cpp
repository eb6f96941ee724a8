#include "minext/polarization.hpp"

#include <cmath>

#include "minext/rng.hpp"

namespace minext {

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out *= static_cast<double>(n - k + j) / j;
  return out;
}

RMatrix builtin_matrix(const Representation& rep) {
  switch (rep.tag()) {
    case Representation::Tag::StandardSL2: {
      RMatrix s(2, 2);
      s << 0, -1, 1, 0;
      return s;
    }
    case Representation::Tag::StandardSp: {
      const int g = rep.domain().genus;
      RMatrix s = RMatrix::Zero(2 * g, 2 * g);
      s.topRightCorner(g, g) = -RMatrix::Identity(g, g);
      s.bottomLeftCorner(g, g) = RMatrix::Identity(g, g);
      return s;
    }
    case Representation::Tag::SymSL2: {
      // Induced pairing normalized by <v^k, w^k> = S(v, w)^k; on monomials
      // <m_a, m_b> = 0 unless a + b = k, and <m_a, m_{k-a}> = (-1)^{k-a} / C(k,a).
      const int k = rep.sym_power();
      RMatrix s = RMatrix::Zero(k + 1, k + 1);
      for (int a = 0; a <= k; ++a)
        s(a, k - a) = std::pow(-1.0, k - a) / binomial(k, a);
      return s;
    }
  }
  throw InternalConsistencyError("unreachable");
}

void verify_polarization(const PolarizationForm& pol, const Representation& rep) {
  const DomainSpec spec = rep.domain();
  const CMatrix s = pol.s.cast<Complex>();

  // Invariance rho(g)^T S rho(g) = S on sampled real group elements.
  CounterRng rng(0x50A1ULL);
  for (int trial = 0; trial < 12; ++trial) {
    const UnboundedPoint p = random_unbounded_point(spec, rng);
    const CMatrix g = point_to_group(p) * circle_action(spec, 2.0 * M_PI * rng.next_unit());
    const CMatrix r = rep.rho(g);
    if ((r.transpose() * s * r - s).cwiseAbs().maxCoeff() > 1e-11)
      throw InvalidPolarizationError("polarization: rho-invariance failed");
  }

  // Positive twist: S(v, Cw) with C the quarter-turn of the circle action.
  const CMatrix twist = s * rep.rho(circle_action(spec, M_PI / 2.0));
  if ((twist - twist.adjoint()).cwiseAbs().maxCoeff() > 1e-11)
    throw InvalidPolarizationError("polarization: twisted form not symmetric");
  if (lambda_min_hermitian(0.5 * (twist + twist.adjoint())) <= 0.0)
    throw InvalidPolarizationError("polarization: twisted form not positive definite");

  // (-1)^p S^h positive definite on each reference V^{p,q}.
  const HodgeFiberDecomposition decomp =
      fiber_decompose(rep, UnboundedPoint::reference(spec));
  const Complex phase = std::pow(kImag, -pol.weight);
  for (const auto& comp : decomp.components) {
    const CMatrix basis = comp.basis;
    CMatrix gram(basis.cols(), basis.cols());
    for (Eigen::Index a = 0; a < basis.cols(); ++a)
      for (Eigen::Index b = 0; b < basis.cols(); ++b)
        gram(a, b) = std::pow(-1.0, comp.p) * phase *
                     (basis.col(a).transpose() * s * basis.col(b).conjugate())(0);
    if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidPolarizationError("polarization: Hodge gram not Hermitian");
    if (lambda_min_hermitian(0.5 * (gram + gram.adjoint())) <= 1e-10)
      throw InvalidPolarizationError("polarization: (-1)^p S^h not positive definite");
  }
}

}  // namespace

PolarizationForm builtin_polarization(const Representation& rep) {
  PolarizationForm pol;
  pol.tag = rep.tag();
  pol.s = builtin_matrix(rep);
  pol.weight = rep.weight();
  verify_polarization(pol, rep);
  return pol;
}

Complex s_bilinear(const PolarizationForm& pol, const CVector& v, const CVector& w) {
  if (v.size() != pol.s.rows() || w.size() != pol.s.rows())
    throw ShapeMismatchError("s_bilinear: wrong vector size");
  return (v.transpose() * pol.s.cast<Complex>() * w)(0);
}

Complex s_hermitian(const PolarizationForm& pol, const CVector& v, const CVector& w) {
  return std::pow(kImag, -pol.weight) * s_bilinear(pol, v, w.conjugate());
}

FiberMetric::FiberMetric(const PolarizationForm& pol,
                         const HodgeFiberDecomposition& decomp)
    : s_(pol.s.cast<Complex>()), phase_(std::pow(kImag, -pol.weight)) {
  const CMatrix basis = decomp.full_basis();
  if (basis.cols() != basis.rows())
    throw InconsistentFiberError("FiberMetric: fiber basis is not square");
  for (const auto& comp : decomp.components) {
    signs_.push_back(comp.p % 2 == 0 ? 1 : -1);
    bases_.push_back(comp.basis);
  }
  lu_.compute(basis);
  if (std::abs(lu_.determinant()) < 1e-12)
    throw InconsistentFiberError("FiberMetric: fiber basis is singular");
}

std::vector<CVector> FiberMetric::split(const CVector& v) const {
  const CVector coords = lu_.solve(v);
  std::vector<CVector> pieces;
  pieces.reserve(bases_.size());
  Eigen::Index at = 0;
  for (const auto& b : bases_) {
    pieces.push_back(b * coords.segment(at, b.cols()));
    at += b.cols();
  }
  return pieces;
}

Complex FiberMetric::pair(const std::vector<CVector>& v_pieces,
                          const std::vector<CVector>& w_pieces) const {
  Complex total = 0.0;
  for (std::size_t c = 0; c < bases_.size(); ++c)
    total += static_cast<double>(signs_[c]) * phase_ *
             (v_pieces[c].transpose() * s_ * w_pieces[c].conjugate())(0);
  return total;
}

Complex hodge_metric(const PolarizationForm& pol,
                     const HodgeFiberDecomposition& decomp, const CVector& v,
                     const CVector& w) {
  const CMatrix basis = decomp.full_basis();
  if (basis.rows() != v.size() || basis.cols() != basis.rows())
    throw InconsistentFiberError("hodge_metric: fiber basis is not square");
  Eigen::PartialPivLU<CMatrix> lu(basis);
  const CVector cv = lu.solve(v);
  const CVector cw = lu.solve(w);
  const double residual = (basis * cv - v).norm();
  if (!(residual <= 1e-8 * std::max(1.0, v.norm())))
    throw InconsistentFiberError("hodge_metric: decomposition residual too large");

  Complex total = 0.0;
  Eigen::Index at = 0;
  for (const auto& comp : decomp.components) {
    const Eigen::Index d = comp.basis.cols();
    const CVector vp = comp.basis * cv.segment(at, d);
    const CVector wp = comp.basis * cw.segment(at, d);
    total += std::pow(-1.0, comp.p) * s_hermitian(pol, vp, wp);
    at += d;
  }
  return total;
}

Complex polarization_function(const HolomorphicSection& sec1,
                              const HolomorphicSection& sec2,
                              const PolarizationForm& pol,
                              const UnboundedPoint& point) {
  const HodgeFiberDecomposition decomp = fiber_decompose(sec1.rep, point);
  return hodge_metric(pol, decomp, eval_section(sec1, point),
                      eval_section(sec2, point));
}

double s1_orbit_check(const HolomorphicSection& sec1,
                      const HolomorphicSection& sec2,
                      const PolarizationForm& pol, const UnboundedPoint& point,
                      int n_samples) {
  const Complex base = polarization_function(sec1, sec2, pol, point);
  double worst = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    const double theta = 2.0 * M_PI * (j + 1) / (n_samples + 1);
    const UnboundedPoint moved =
        group_act(circle_action(point.spec, theta), point);
    worst = std::max(worst,
                     std::abs(polarization_function(sec1, sec2, pol, moved) - base));
  }
  return worst;
}

}  // namespace minext
