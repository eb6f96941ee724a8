#include "minext/hc_domain.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "minext/rng.hpp"

namespace minext {

namespace {

constexpr double kPdMargin = 1e-10;
constexpr double kSymTol = 1e-12;

CMatrix symplectic_form(int g) {
  CMatrix j = CMatrix::Zero(2 * g, 2 * g);
  j.topRightCorner(g, g) = CMatrix::Identity(g, g);
  j.bottomLeftCorner(g, g) = -CMatrix::Identity(g, g);
  return j;
}

void require_group_element(const CMatrix& g, int genus) {
  if (g.rows() != 2 * genus || g.cols() != 2 * genus)
    throw ShapeMismatchError("group element has wrong size");
  if (g.imag().cwiseAbs().maxCoeff() > 1e-10)
    throw ShapeMismatchError("group element must be real");
  const CMatrix j = symplectic_form(genus);
  if ((g.transpose() * j * g - j).cwiseAbs().maxCoeff() > 1e-10)
    throw ShapeMismatchError("group element is not symplectic");
}

}  // namespace

UnboundedPoint UnboundedPoint::from_tau(Complex tau) {
  UnboundedPoint p;
  p.spec = DomainSpec::upper_half_plane();
  p.omega = CMatrix::Constant(1, 1, tau);
  return p;
}

UnboundedPoint UnboundedPoint::reference(const DomainSpec& spec) {
  UnboundedPoint p;
  p.spec = spec;
  p.omega = kImag * CMatrix::Identity(spec.genus, spec.genus);
  return p;
}

BoundedPoint BoundedPoint::from_t(Complex t) {
  BoundedPoint p;
  p.spec = DomainSpec::upper_half_plane();
  p.z = CMatrix::Constant(1, 1, t);
  return p;
}

bool contains(const DomainSpec& spec, const CMatrix& candidate, Model model) {
  const int g = spec.genus;
  if (candidate.rows() != g || candidate.cols() != g)
    throw ShapeMismatchError("contains: candidate has wrong shape");
  if (!all_finite(candidate)) return false;
  if (!is_symmetric(candidate, kSymTol)) return false;
  if (model == Model::Unbounded) {
    const CMatrix im = 0.5 * (candidate - candidate.adjoint()) / kImag;
    return lambda_min_hermitian(im) > kPdMargin;
  }
  const CMatrix gram =
      CMatrix::Identity(g, g) - candidate.adjoint() * candidate;
  return lambda_min_hermitian(gram) > kPdMargin;
}

BoundedPoint hc_embed(const UnboundedPoint& p) {
  const int g = p.spec.genus;
  const CMatrix eye = CMatrix::Identity(g, g);
  BoundedPoint b;
  b.spec = p.spec;
  b.z = (p.omega - kImag * eye) *
        (p.omega + kImag * eye).partialPivLu().inverse();
  return b;
}

UnboundedPoint hc_inverse(const BoundedPoint& b) {
  const int g = b.spec.genus;
  const CMatrix eye = CMatrix::Identity(g, g);
  const CMatrix den = eye - b.z;
  Eigen::PartialPivLU<CMatrix> lu(den);
  const double det = std::abs(lu.determinant());
  if (det < 1e-14)
    throw BoundaryPointError("hc_inverse: point on the boundary (I - Z singular)");
  UnboundedPoint p;
  p.spec = b.spec;
  p.omega = kImag * (eye + b.z) * lu.inverse();
  return p;
}

UnboundedPoint group_act(const CMatrix& g, const UnboundedPoint& p) {
  const int genus = p.spec.genus;
  require_group_element(g, genus);
  const CMatrix a = g.topLeftCorner(genus, genus);
  const CMatrix b = g.topRightCorner(genus, genus);
  const CMatrix c = g.bottomLeftCorner(genus, genus);
  const CMatrix d = g.bottomRightCorner(genus, genus);
  const CMatrix den = c * p.omega + d;
  Eigen::PartialPivLU<CMatrix> lu(den);
  if (std::abs(lu.determinant()) < 1e-14)
    throw ActionUndefinedError("group_act: C Omega + D is singular");
  UnboundedPoint out;
  out.spec = p.spec;
  out.omega = (a * p.omega + b) * lu.inverse();
  return out;
}

CMatrix point_to_group(const UnboundedPoint& p) {
  const int g = p.spec.genus;
  const CMatrix x = 0.5 * (p.omega + p.omega.conjugate());
  const CMatrix y = 0.5 * (p.omega - p.omega.conjugate()) / kImag;
  Eigen::LLT<RMatrix> llt(y.real());
  if (llt.info() != Eigen::Success)
    throw BoundaryPointError("point_to_group: Im(Omega) is not positive definite");
  const RMatrix l = llt.matrixL();
  const RMatrix linv_t = l.transpose().inverse();
  CMatrix out = CMatrix::Zero(2 * g, 2 * g);
  out.topLeftCorner(g, g) = l;
  out.topRightCorner(g, g) = x.real() * linv_t;
  out.bottomRightCorner(g, g) = linv_t;
  return out;
}

CMatrix cayley_matrix(const DomainSpec& spec) {
  const int g = spec.genus;
  const Complex scale = 1.0 / std::sqrt(Complex(0.0, 2.0));
  CMatrix w = CMatrix::Zero(2 * g, 2 * g);
  w.topLeftCorner(g, g) = scale * CMatrix::Identity(g, g);
  w.topRightCorner(g, g) = scale * kImag * CMatrix::Identity(g, g);
  w.bottomLeftCorner(g, g) = scale * kImag * CMatrix::Identity(g, g);
  w.bottomRightCorner(g, g) = scale * CMatrix::Identity(g, g);
  return w;
}

HCFactorization factorize_pkp(const CMatrix& g, const HodgeFrame& frame) {
  const int n = frame.spec.genus;
  if (g.rows() != 2 * n || g.cols() != 2 * n)
    throw ShapeMismatchError("factorize_pkp: wrong size");
  const CMatrix w = cayley_matrix(frame.spec);
  const CMatrix winv = w.partialPivLu().inverse();
  const CMatrix gc = winv * g * w;

  const CMatrix a = gc.topLeftCorner(n, n);
  const CMatrix b = gc.topRightCorner(n, n);
  const CMatrix c = gc.bottomLeftCorner(n, n);
  const CMatrix d = gc.bottomRightCorner(n, n);
  Eigen::PartialPivLU<CMatrix> lu(d);
  if (std::abs(lu.determinant()) < 1e-14)
    throw NotInBigCellError("factorize_pkp: pivot block singular");
  const CMatrix dinv = lu.inverse();

  // Block UDL: (I, b d^{-1}; 0, I) (a - b d^{-1} c, 0; 0, d) (I, 0; d^{-1} c, I).
  const CMatrix eye = CMatrix::Identity(n, n);
  CMatrix u = CMatrix::Identity(2 * n, 2 * n);
  u.topRightCorner(n, n) = b * dinv;
  CMatrix k = CMatrix::Zero(2 * n, 2 * n);
  k.topLeftCorner(n, n) = a - b * dinv * c;
  k.bottomRightCorner(n, n) = d;
  CMatrix lfac = CMatrix::Identity(2 * n, 2 * n);
  lfac.bottomLeftCorner(n, n) = dinv * c;

  HCFactorization out;
  out.p_plus = w * u * winv;
  out.k_c = w * k * winv;
  out.p_minus = w * lfac * winv;
  return out;
}

BoundedPoint zeta_coordinate(const UnboundedPoint& p, const HodgeFrame& frame) {
  const CMatrix g = point_to_group(p);
  const HCFactorization f = factorize_pkp(g, frame);
  const CMatrix x = nilpotent_log(f.p_plus);
  BoundedPoint b;
  b.spec = p.spec;
  b.z = gm11_coordinates(frame, x);
  return b;
}

UnboundedPoint random_unbounded_point(const DomainSpec& spec, CounterRng& rng) {
  const int g = spec.genus;
  RMatrix x(g, g), m(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) {
      x(j, k) = 1.5 * rng.next_symmetric();
      m(j, k) = rng.next_symmetric();
    }
  x = RMatrix(0.5 * (x + x.transpose()));
  const RMatrix y = m * m.transpose() + 0.3 * RMatrix::Identity(g, g);
  UnboundedPoint p;
  p.spec = spec;
  p.omega = x.cast<Complex>() + kImag * y.cast<Complex>();
  return p;
}

CMatrix random_compact_element(const DomainSpec& spec, CounterRng& rng) {
  const int g = spec.genus;
  CMatrix raw(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) raw(j, k) = rng.next_gaussian();
  Eigen::HouseholderQR<CMatrix> qr(raw);
  CMatrix u = qr.householderQ() * CMatrix::Identity(g, g);
  // Fix the phase ambiguity of the QR factor for determinism.
  for (int k = 0; k < g; ++k) {
    const Complex d = qr.matrixQR()(k, k);
    if (std::abs(d) > 0) u.col(k) *= d / std::abs(d);
  }
  CMatrix out = CMatrix::Zero(2 * g, 2 * g);
  out.topLeftCorner(g, g) = u.real().cast<Complex>();
  out.topRightCorner(g, g) = u.imag().cast<Complex>();
  out.bottomLeftCorner(g, g) = -u.imag().cast<Complex>();
  out.bottomRightCorner(g, g) = u.real().cast<Complex>();
  return out;
}

}  // namespace minext
