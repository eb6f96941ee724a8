#include "minext/vhs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <climits>
#include <cmath>

#include "minext/rng.hpp"

namespace minext {

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out *= static_cast<double>(n - k + j) / j;
  return out;
}

// Coefficients of (a X + b Y)^m in the basis X^m, X^{m-1} Y, ..., Y^m.
CVector linear_form_power(Complex a, Complex b, int m) {
  CVector c(m + 1);
  for (int j = 0; j <= m; ++j)
    c(j) = binomial(m, j) * std::pow(a, m - j) * std::pow(b, j);
  return c;
}

CVector convolve(const CVector& u, const CVector& v) {
  CVector out = CVector::Zero(u.size() + v.size() - 1);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) out(i + j) += u(i) * v(j);
  return out;
}

}  // namespace

Representation Representation::standard_sl2() {
  Representation r;
  r.tag_ = Tag::StandardSL2;
  r.domain_ = DomainSpec::upper_half_plane();
  r.dim_ = 2;
  r.weight_ = 1;
  return r;
}

Representation Representation::sym_sl2(int k) {
  if (k < 1 || k > 6) throw ConfigError("sym_sl2: power must be in 1..6");
  Representation r;
  r.tag_ = Tag::SymSL2;
  r.domain_ = DomainSpec::upper_half_plane();
  r.dim_ = k + 1;
  r.weight_ = k;
  r.sym_k_ = k;
  return r;
}

Representation Representation::standard_sp(int genus) {
  if (genus < 1 || genus > 3) throw ConfigError("standard_sp: genus must be in 1..3");
  Representation r;
  r.tag_ = Tag::StandardSp;
  r.domain_ = DomainSpec::siegel(genus);
  r.dim_ = 2 * genus;
  r.weight_ = 1;
  return r;
}

std::string Representation::name() const {
  switch (tag_) {
    case Tag::StandardSL2: return "standard_sl2";
    case Tag::SymSL2: return "sym" + std::to_string(sym_k_) + "_sl2";
    case Tag::StandardSp: return "standard_sp" + std::to_string(2 * domain_.genus);
  }
  return "unknown";
}

CMatrix Representation::rho(const CMatrix& g) const {
  if (g.rows() != domain_.ambient_size() || g.cols() != domain_.ambient_size())
    throw ShapeMismatchError("rho: group element has wrong size");
  if (tag_ != Tag::SymSL2) return g;

  // Substitution action on degree-k forms in X, Y where the basis vector
  // e1 corresponds to X and e2 to Y: X -> g11 X + g21 Y, Y -> g12 X + g22 Y.
  const int k = sym_k_;
  CMatrix out(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) {
    CVector image(1);
    image(0) = 1.0;
    if (k - j > 0)
      image = convolve(image, linear_form_power(g(0, 0), g(1, 0), k - j));
    if (j > 0) image = convolve(image, linear_form_power(g(0, 1), g(1, 1), j));
    out.col(j) = image;
  }
  return out;
}

CMatrix Representation::drho(const CMatrix& x) const {
  if (x.rows() != domain_.ambient_size() || x.cols() != domain_.ambient_size())
    throw ShapeMismatchError("drho: algebra element has wrong size");
  if (tag_ != Tag::SymSL2) return x;

  // Derivation on monomials X^{k-j} Y^j.
  const int k = sym_k_;
  CMatrix out = CMatrix::Zero(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) {
    out(j, j) = static_cast<double>(k - j) * x(0, 0) + static_cast<double>(j) * x(1, 1);
    if (j + 1 <= k) out(j + 1, j) = static_cast<double>(k - j) * x(1, 0);
    if (j - 1 >= 0) out(j - 1, j) = static_cast<double>(j) * x(0, 1);
  }
  return out;
}

CMatrix Representation::rho_torus(Complex z) const {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  return std::pow(r, -weight_) * rho(circle_action(domain_, theta));
}

Complex Representation::scalar_action(double lambda) const {
  return std::pow(lambda, -weight_);
}

CMatrix Representation::smallest_piece_basis() const {
  switch (tag_) {
    case Tag::StandardSL2: {
      CMatrix b(2, 1);
      b << kImag, 1.0;
      return b;
    }
    case Tag::SymSL2: {
      // (i X + Y)^k expanded in the monomial basis.
      CMatrix b(sym_k_ + 1, 1);
      b.col(0) = linear_form_power(kImag, 1.0, sym_k_);
      return b;
    }
    case Tag::StandardSp: {
      const int g = domain_.genus;
      CMatrix b = CMatrix::Zero(2 * g, g);
      b.topRows(g) = kImag * CMatrix::Identity(g, g);
      b.bottomRows(g) = CMatrix::Identity(g, g);
      return b;
    }
  }
  throw InternalConsistencyError("unreachable");
}

int Representation::smallest_p() const {
  return tag_ == Tag::SymSL2 ? sym_k_ : 1;
}

// ---------------------------------------------------------------------------
// fiber decompositions
// ---------------------------------------------------------------------------

const HodgeFiberDecomposition::Component* HodgeFiberDecomposition::find(
    int p, int q) const {
  for (const auto& c : components)
    if (c.p == p && c.q == q) return &c;
  return nullptr;
}

CMatrix HodgeFiberDecomposition::filtration_basis(int p) const {
  std::vector<CMatrix> picked;
  for (const auto& c : components)
    if (c.p >= p) picked.push_back(c.basis);
  if (picked.empty()) return CMatrix(components.front().basis.rows(), 0);
  Eigen::Index cols = 0;
  for (const auto& b : picked) cols += b.cols();
  CMatrix out(picked.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : picked) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

CMatrix HodgeFiberDecomposition::full_basis() const { return filtration_basis(INT_MIN); }

int HodgeFiberDecomposition::total_dim() const {
  int d = 0;
  for (const auto& c : components) d += static_cast<int>(c.basis.cols());
  return d;
}

CMatrix weight_component(const Representation& rep, int n) {
  const double r0 = 2.0;
  const CMatrix op = rep.rho_torus(Complex(r0, 0.0));
  const Complex target = std::pow(r0, -n);
  Eigen::ComplexEigenSolver<CMatrix> es(op);
  std::vector<Eigen::Index> hits;
  for (Eigen::Index j = 0; j < op.rows(); ++j)
    if (std::abs(es.eigenvalues()(j) - target) < 1e-8 * std::abs(target)) hits.push_back(j);
  CMatrix out(op.rows(), static_cast<Eigen::Index>(hits.size()));
  for (std::size_t j = 0; j < hits.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(hits[j]);
  return out;
}

namespace {

// Generic angle for eigenvalue classification. The predicted eigenvalues
// e^{-i (p - q) theta0} must be pairwise separated; pi/5 collides for weights
// 5 and 6 (indices p - q differing by 10), where pi/7 is collision free.
double classification_angle(const Representation& rep) {
  const int n = rep.weight();
  const double theta0 = M_PI / 5.0;
  bool separated = true;
  for (int d1 = -n; d1 <= n && separated; d1 += 2)
    for (int d2 = d1 + 2; d2 <= n && separated; d2 += 2) {
      const Complex e1 = std::exp(Complex(0.0, -d1 * theta0));
      const Complex e2 = std::exp(Complex(0.0, -d2 * theta0));
      if (std::abs(e1 - e2) < 1e-6) separated = false;
    }
  return separated ? theta0 : M_PI / 7.0;
}

HodgeFiberDecomposition reference_decomposition(const Representation& rep) {
  const DomainSpec spec = rep.domain();
  const int n = rep.weight();
  const double theta0 = classification_angle(rep);
  const CMatrix op = rep.rho_torus(std::exp(Complex(0.0, theta0)));

  Eigen::ComplexEigenSolver<CMatrix> es(op);
  HodgeFiberDecomposition out;
  out.point = UnboundedPoint::reference(spec);

  for (int p = n; p >= 0; --p) {
    const int q = n - p;
    const Complex predicted = std::exp(Complex(0.0, -(p - q) * theta0));
    std::vector<Eigen::Index> hits;
    for (Eigen::Index j = 0; j < op.rows(); ++j)
      if (std::abs(es.eigenvalues()(j) - predicted) < 1e-8) hits.push_back(j);
    if (hits.empty()) continue;
    CMatrix basis(op.rows(), static_cast<Eigen::Index>(hits.size()));
    for (std::size_t j = 0; j < hits.size(); ++j)
      basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(hits[j]);
    out.components.push_back({p, q, basis});
  }

  if (out.total_dim() != rep.dim())
    throw InconsistentFiberError("fiber_decompose: eigenvalue classification incomplete");
  return out;
}

}  // namespace

HodgeFiberDecomposition push_decomposition(const HodgeFiberDecomposition& ref,
                                           const Representation& rep,
                                           const UnboundedPoint& point) {
  const UnboundedPoint o = UnboundedPoint::reference(rep.domain());
  if ((point.omega - o.omega).cwiseAbs().maxCoeff() < 1e-14) {
    HodgeFiberDecomposition out = ref;
    out.point = point;
    return out;
  }
  const CMatrix mover = rep.rho(point_to_group(point));
  HodgeFiberDecomposition out;
  out.point = point;
  out.components.reserve(ref.components.size());
  for (const auto& c : ref.components)
    out.components.push_back({c.p, c.q, mover * c.basis});
  return out;
}

HodgeFiberDecomposition fiber_decompose(const Representation& rep,
                                        const UnboundedPoint& point) {
  return push_decomposition(reference_decomposition(rep), rep, point);
}

double ShiftingReport::max_residual() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.residual);
  return worst;
}

ShiftingReport check_shifting(const Representation& rep, const HodgeFrame& frame) {
  const HodgeFiberDecomposition decomp =
      fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
  ShiftingReport report;
  auto run = [&](const std::vector<CMatrix>& algebra, int shift) {
    for (const CMatrix& x : algebra) {
      const CMatrix dx = rep.drho(x);
      for (const auto& c : decomp.components) {
        const CMatrix image = dx * c.basis;
        const auto* target = decomp.find(c.p + shift, c.q - shift);
        const CMatrix span = target ? target->basis : CMatrix(image.rows(), 0);
        report.entries.push_back({c.p, c.q, shift, projection_residual(image, span)});
      }
    }
  };
  run(frame.g_1m1, +1);
  run(frame.g_m11, -1);
  return report;
}

// ---------------------------------------------------------------------------
// sections
// ---------------------------------------------------------------------------

HolomorphicSection build_section(const CVector& v, int p_level,
                                 const Representation& rep,
                                 const HodgeFrame& frame) {
  if (v.size() != rep.dim())
    throw ShapeMismatchError("build_section: base vector has wrong size");
  const HodgeFiberDecomposition decomp =
      fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
  const CMatrix filt = decomp.filtration_basis(p_level);
  if (v.norm() > 0 && projection_residual(v, filt) > 1e-10)
    throw InvalidBaseVectorError("build_section: vector not in the filtration piece");
  return HolomorphicSection{rep, frame, v, p_level};
}

CVector eval_section_bounded(const HolomorphicSection& sec, const BoundedPoint& z) {
  const CMatrix x = gm11_element(sec.frame, z.z);
  return nilpotent_exp(sec.rep.drho(x)) * sec.base_vector;
}

CVector eval_section(const HolomorphicSection& sec, const UnboundedPoint& p) {
  return eval_section_bounded(sec, hc_embed(p));
}

CVector eval_section_factorized(const HolomorphicSection& sec,
                                const UnboundedPoint& p) {
  const HCFactorization f = factorize_pkp(point_to_group(p), sec.frame);
  return sec.rep.rho(f.p_plus) * sec.base_vector;
}

// ---------------------------------------------------------------------------
// polynomial structure
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> monomial_exponents(int n_vars, int min_degree,
                                                 int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(n_vars), 0);
  // Lexicographic enumeration at each total degree.
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == n_vars - 1) {
      current[static_cast<std::size_t>(var)] = remaining;
      out.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[static_cast<std::size_t>(var)] = e;
      self(self, var + 1, remaining - e);
    }
  };
  for (int deg = min_degree; deg <= max_degree; ++deg) rec(rec, 0, deg);
  return out;
}

Complex monomial_value(const std::vector<int>& alpha, const BoundedPoint& z) {
  const int g = z.spec.genus;
  Complex out = 1.0;
  int idx = 0;
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      for (int e = 0; e < alpha[static_cast<std::size_t>(idx)]; ++e) out *= z.z(j, k);
      ++idx;
    }
  return out;
}

namespace {

int section_degree_bound(const HolomorphicSection& sec) {
  // Nilpotency order of drho on a generic g_m11 element bounds the degree.
  CMatrix x = CMatrix::Zero(sec.frame.spec.ambient_size(), sec.frame.spec.ambient_size());
  double c = 1.0;
  for (const CMatrix& b : sec.frame.g_m11) {
    x += c * b;
    c += 0.37;
  }
  const int order = nilpotency_order(sec.rep.drho(x));
  if (order == 0)
    throw InternalConsistencyError("section_degree_bound: drho not nilpotent on g_m11");
  return order - 1;
}

template <typename Draw>
BoundedPoint sample_bounded(const DomainSpec& spec, Draw&& draw) {
  // Small symmetric matrices are always inside the bounded model.
  const int g = spec.genus;
  CMatrix z = CMatrix::Zero(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      const Complex v = 0.35 * draw();
      z(j, k) = v;
      z(k, j) = v;
    }
  return BoundedPoint{spec, z};
}

}  // namespace

PolynomialForm section_polynomial(const HolomorphicSection& sec) {
  const DomainSpec spec = sec.frame.spec;
  const int degree = section_degree_bound(sec);
  PolynomialForm form;
  form.exponents = monomial_exponents(spec.bounded_dim(), 0, degree);
  const int n_mono = static_cast<int>(form.exponents.size());
  const int n_pts = 2 * n_mono + 8;

  CounterRng rng(0x5EC7104DULL);
  auto draw = [&]() { return rng.next_box(); };
  CMatrix vander(n_pts, n_mono);
  CMatrix values(n_pts, sec.rep.dim());
  for (int s = 0; s < n_pts; ++s) {
    const BoundedPoint z = sample_bounded(spec, draw);
    for (int m = 0; m < n_mono; ++m)
      vander(s, m) = monomial_value(form.exponents[static_cast<std::size_t>(m)], z);
    values.row(s) = eval_section_bounded(sec, z).transpose();
  }
  form.coefficients = vander.colPivHouseholderQr().solve(values).transpose();
  return form;
}

HolomorphyReport holomorphy_check(const HolomorphicSection& sec) {
  const PolynomialForm form = section_polynomial(sec);
  HolomorphyReport report;
  report.degree_bound = 0;
  for (const auto& e : form.exponents) {
    int deg = 0;
    for (int v : e) deg += v;
    report.degree_bound = std::max(report.degree_bound, deg);
  }

  CounterRng rng(0x8B7E57ULL);
  auto draw = [&]() { return rng.next_box(); };
  double worst = 0.0;
  for (int s = 0; s < 25; ++s) {
    const BoundedPoint z = sample_bounded(sec.frame.spec, draw);
    const CVector truth = eval_section_bounded(sec, z);
    CVector fitted = CVector::Zero(sec.rep.dim());
    for (std::size_t m = 0; m < form.exponents.size(); ++m)
      fitted += form.coefficients.col(static_cast<Eigen::Index>(m)) *
                monomial_value(form.exponents[m], z);
    worst = std::max(worst, (fitted - truth).norm() / std::max(1.0, truth.norm()));
  }
  report.max_heldout_residual = worst;
  return report;
}

}  // namespace minext
