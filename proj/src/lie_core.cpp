#include "minext/lie_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace minext {

// ---------------------------------------------------------------------------
// linalg utilities
// ---------------------------------------------------------------------------

CMatrix basis_matrix(const std::vector<CMatrix>& basis) {
  if (basis.empty()) return CMatrix(0, 0);
  const auto rows = basis.front().size();
  CMatrix out(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != rows)
      throw ShapeMismatchError("basis elements have mixed sizes");
    out.col(static_cast<Eigen::Index>(j)) = vec(basis[j]);
  }
  return out;
}

CMatrix orthonormal_columns(const CMatrix& m, double rank_tol) {
  if (m.cols() == 0) return m;
  Eigen::ColPivHouseholderQR<CMatrix> qr(m);
  qr.setThreshold(rank_tol);
  const Eigen::Index rank = qr.rank();
  CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), rank);
  return q;
}

double projection_residual(const CMatrix& vectors, const CMatrix& span) {
  if (vectors.cols() == 0) return 0.0;
  const CMatrix q = orthonormal_columns(span);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const CVector v = vectors.col(j);
    const CVector rem = (q.cols() == 0) ? v : CVector(v - q * (q.adjoint() * v));
    worst = std::max(worst, rem.norm() / std::max(1.0, v.norm()));
  }
  return worst;
}

double subspace_angle(const CMatrix& a, const CMatrix& b) {
  const CMatrix qa = orthonormal_columns(a);
  const CMatrix qb = orthonormal_columns(b);
  if (qa.cols() != qb.cols())
    throw ShapeMismatchError("subspace_angle: dimensions differ");
  if (qa.cols() == 0) return 0.0;
  // sin of the largest principal angle; well conditioned near zero, where
  // the acos formula loses half the digits.
  const CMatrix rem = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<CMatrix> svd(rem);
  const double s = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
  return std::asin(s);
}

double lambda_min_hermitian(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0).real();
  if (n == 2) {
    const double half_tr = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double det = m(0, 0).real() * m(1, 1).real() - std::norm(m(0, 1));
    const double disc = std::max(0.0, half_tr * half_tr - det);
    return half_tr - std::sqrt(disc);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_symmetric(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const CMatrix& m) { return m.allFinite(); }

int nilpotency_order(const CMatrix& x, double tol) {
  if (x.rows() != x.cols()) throw ShapeMismatchError("nilpotency_order: not square");
  const double base = x.norm();
  if (base == 0.0) return 1;
  CMatrix power = x;
  double scale = base;
  for (int k = 1; k <= x.rows(); ++k) {
    if (power.norm() < tol * scale) return k;
    power = power * x;
    scale *= base;
  }
  return 0;
}

CMatrix nilpotent_exp(const CMatrix& x) {
  if (x.rows() != x.cols()) throw ShapeMismatchError("nilpotent_exp: not square");
  const int order = nilpotency_order(x);
  if (order == 0) throw NotNilpotentError("nilpotent_exp: matrix is not nilpotent");
  CMatrix result = CMatrix::Identity(x.rows(), x.cols());
  CMatrix term = CMatrix::Identity(x.rows(), x.cols());
  for (int m = 1; m < order; ++m) {
    term = term * x / static_cast<double>(m);
    result += term;
  }
  return result;
}

CMatrix nilpotent_log(const CMatrix& g) {
  if (g.rows() != g.cols()) throw ShapeMismatchError("nilpotent_log: not square");
  const CMatrix n = g - CMatrix::Identity(g.rows(), g.cols());
  const int order = nilpotency_order(n);
  if (order == 0) throw NotNilpotentError("nilpotent_log: g - I is not nilpotent");
  CMatrix result = CMatrix::Zero(g.rows(), g.cols());
  CMatrix power = CMatrix::Identity(g.rows(), g.cols());
  double sign = 1.0;
  for (int m = 1; m < order; ++m) {
    power = power * n;
    result += (sign / static_cast<double>(m)) * power;
    sign = -sign;
  }
  return result;
}

// ---------------------------------------------------------------------------
// domains and the algebra decomposition
// ---------------------------------------------------------------------------

DomainSpec DomainSpec::siegel(int genus) {
  if (genus < 1) throw ConfigError("Siegel genus must be >= 1");
  return {DomainKind::SiegelUpperHalfSpace, genus};
}

std::string DomainSpec::name() const {
  if (kind == DomainKind::UpperHalfPlane) return "upper_half_plane";
  return "siegel_g" + std::to_string(genus);
}

CMatrix circle_action(const DomainSpec& spec, double theta) {
  const int g = spec.genus;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix h = CMatrix::Zero(2 * g, 2 * g);
  h.topLeftCorner(g, g) = c * CMatrix::Identity(g, g);
  h.topRightCorner(g, g) = s * CMatrix::Identity(g, g);
  h.bottomLeftCorner(g, g) = -s * CMatrix::Identity(g, g);
  h.bottomRightCorner(g, g) = c * CMatrix::Identity(g, g);
  return h;
}

namespace {

// sp(2g) element with blocks (A, B; C, -A^T).
CMatrix sp_element(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  const Eigen::Index g = a.rows();
  CMatrix x = CMatrix::Zero(2 * g, 2 * g);
  x.topLeftCorner(g, g) = a;
  x.topRightCorner(g, g) = b;
  x.bottomLeftCorner(g, g) = c;
  x.bottomRightCorner(g, g) = -a.transpose();
  return x;
}

// Symmetric unit E_jj or E_jk + E_kj.
CMatrix sym_unit(int g, int j, int k) {
  CMatrix s = CMatrix::Zero(g, g);
  s(j, k) += 1.0;
  s(k, j) = s(j, k);
  if (j == k) s(j, j) = 1.0;
  return s;
}

}  // namespace

std::vector<CMatrix> algebra_basis(const DomainSpec& spec) {
  const int g = spec.genus;
  const CMatrix zero = CMatrix::Zero(g, g);
  std::vector<CMatrix> basis;
  basis.reserve(g * (2 * g + 1));
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) {
      CMatrix a = CMatrix::Zero(g, g);
      a(j, k) = 1.0;
      basis.push_back(sp_element(a, zero, zero));
    }
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) basis.push_back(sp_element(zero, sym_unit(g, j, k), zero));
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) basis.push_back(sp_element(zero, zero, sym_unit(g, j, k)));
  return basis;
}

CMatrix bracket(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    throw ShapeMismatchError("bracket: dimension mismatch");
  return x * y - y * x;
}

namespace {

// X(A) = (A/2, iA/2; iA/2, -A/2); squares to zero for any A.
CMatrix plus_block(const CMatrix& a) {
  const Eigen::Index g = a.rows();
  CMatrix x = CMatrix::Zero(2 * g, 2 * g);
  x.topLeftCorner(g, g) = 0.5 * a;
  x.topRightCorner(g, g) = 0.5 * kImag * a;
  x.bottomLeftCorner(g, g) = 0.5 * kImag * a;
  x.bottomRightCorner(g, g) = -0.5 * a;
  return x;
}

CMatrix minus_block(const CMatrix& a) { return plus_block(a).conjugate(); }

void certify_frame(const HodgeFrame& frame) {
  const double kEigTol = 1e-12;
  const double theta0 = M_PI / 5.0;
  const CMatrix h = frame.circle(theta0);
  const CMatrix hinv = frame.circle(-theta0);
  const Complex lam_p = std::exp(Complex(0.0, 2.0 * theta0));
  const Complex lam_m = std::exp(Complex(0.0, -2.0 * theta0));

  auto check_eig = [&](const std::vector<CMatrix>& basis, Complex lambda) {
    for (const CMatrix& x : basis) {
      const CMatrix ad = h * x * hinv;
      if ((ad - lambda * x).cwiseAbs().maxCoeff() > kEigTol * std::max(1.0, x.norm()))
        throw InternalConsistencyError("hodge frame: Ad eigenvalue property failed");
    }
  };
  check_eig(frame.g00, Complex(1.0, 0.0));
  check_eig(frame.g_m11, lam_p);
  check_eig(frame.g_1m1, lam_m);

  // Joint spanning / linear independence of the three bases.
  std::vector<CMatrix> all = frame.g00;
  all.insert(all.end(), frame.g_m11.begin(), frame.g_m11.end());
  all.insert(all.end(), frame.g_1m1.begin(), frame.g_1m1.end());
  const CMatrix stacked = basis_matrix(all);
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  if (svd.singularValues().minCoeff() < 1e-8)
    throw InternalConsistencyError("hodge frame: bases are not independent");
  const int expected_dim = frame.spec.genus * (2 * frame.spec.genus + 1);
  if (frame.algebra_dim() != expected_dim)
    throw InternalConsistencyError("hodge frame: dimension count mismatch");

  // Multiplicities of the adjoint operator on the ambient algebra must match.
  const auto ambient = algebra_basis(frame.spec);
  const CMatrix bm = basis_matrix(ambient);
  const Eigen::Index d = bm.cols();
  CMatrix ad_images(bm.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j)
    ad_images.col(j) = vec(CMatrix(h * ambient[static_cast<std::size_t>(j)] * hinv));
  const CMatrix ad_op = bm.colPivHouseholderQr().solve(ad_images);
  Eigen::ComplexEigenSolver<CMatrix> es(ad_op);
  int n0 = 0, np = 0, nm = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex ev = es.eigenvalues()(j);
    if (std::abs(ev - 1.0) < 1e-6) ++n0;
    else if (std::abs(ev - lam_p) < 1e-6) ++np;
    else if (std::abs(ev - lam_m) < 1e-6) ++nm;
    else throw InternalConsistencyError("hodge frame: unexpected adjoint eigenvalue");
  }
  if (n0 != static_cast<int>(frame.g00.size()) ||
      np != static_cast<int>(frame.g_m11.size()) ||
      nm != static_cast<int>(frame.g_1m1.size()))
    throw InternalConsistencyError("hodge frame: eigenspace dimensions inconsistent");
}

}  // namespace

HodgeFrame hodge_decompose_algebra(const DomainSpec& spec) {
  const int g = spec.genus;
  HodgeFrame frame;
  frame.spec = spec;

  // g00 is the complexified unitary algebra (A, B; -B, A), A skew, B symmetric.
  const CMatrix zero = CMatrix::Zero(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = j + 1; k < g; ++k) {
      CMatrix a = CMatrix::Zero(g, g);
      a(j, k) = 1.0;
      a(k, j) = -1.0;
      CMatrix x = CMatrix::Zero(2 * g, 2 * g);
      x.topLeftCorner(g, g) = a;
      x.bottomRightCorner(g, g) = a;
      frame.g00.push_back(x);
    }
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      const CMatrix b = sym_unit(g, j, k);
      CMatrix x = CMatrix::Zero(2 * g, 2 * g);
      x.topRightCorner(g, g) = b;
      x.bottomLeftCorner(g, g) = -b;
      frame.g00.push_back(x);
    }
  // Coordinate order (j, k), j <= k, row-major over the upper triangle; this
  // order defines the coordinates of the bounded model.
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      frame.g_m11.push_back(plus_block(sym_unit(g, j, k)));
      frame.g_1m1.push_back(minus_block(sym_unit(g, j, k)));
    }

  certify_frame(frame);
  return frame;
}

CMatrix gm11_element(const HodgeFrame& frame, const CMatrix& z) {
  const int g = frame.spec.genus;
  if (z.rows() != g || z.cols() != g)
    throw ShapeMismatchError("gm11_element: coordinate matrix has wrong size");
  return plus_block(z);
}

CMatrix gm11_coordinates(const HodgeFrame& frame, const CMatrix& x, double tol) {
  const CMatrix bm = basis_matrix(frame.g_m11);
  const CVector target = vec(x);
  const CVector coords = bm.colPivHouseholderQr().solve(target);
  if ((bm * coords - target).norm() > tol * std::max(1.0, target.norm()))
    throw InternalConsistencyError("gm11_coordinates: element not in g_m11 span");
  const int g = frame.spec.genus;
  CMatrix z = CMatrix::Zero(g, g);
  int idx = 0;
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      z(j, k) = coords(idx);
      z(k, j) = coords(idx);
      ++idx;
    }
  return z;
}

}  // namespace minext
