#pragma once

#include <string>
#include <vector>

#include "minext/hc_domain.hpp"

namespace minext {

/// A built-in real algebraic representation of the domain's group, together
/// with the scalar rule lambda * Id |-> lambda^{-weight} that extends it to
/// the similitude group. rho is a polynomial matrix map, so it evaluates on
/// complexified group elements as well.
class Representation {
 public:
  enum class Tag { StandardSL2, SymSL2, StandardSp };

  static Representation standard_sl2();
  static Representation sym_sl2(int k);        // 1 <= k <= 6
  static Representation standard_sp(int genus);  // 1 <= genus <= 3

  Tag tag() const { return tag_; }
  const DomainSpec& domain() const { return domain_; }
  int dim() const { return dim_; }
  int weight() const { return weight_; }
  int sym_power() const { return sym_k_; }
  std::string name() const;

  CMatrix rho(const CMatrix& g) const;
  CMatrix drho(const CMatrix& x) const;

  /// rho(h(z)) for z = r e^{i theta} on the Deligne torus:
  /// r^{-weight} * rho(circle_action(theta)).
  CMatrix rho_torus(Complex z) const;

  /// Action of the scalar factor lambda * Id.
  Complex scalar_action(double lambda) const;

  /// Canonical basis of the smallest filtration piece at the reference point
  /// (columns). Deterministic, unlike raw eigensolver output.
  CMatrix smallest_piece_basis() const;
  int smallest_p() const;

 private:
  Representation() = default;
  Tag tag_ = Tag::StandardSL2;
  DomainSpec domain_;
  int dim_ = 2;
  int weight_ = 1;
  int sym_k_ = 1;
};

/// Fiberwise Hodge decomposition V_C = sum of V^{p,q} at a point, each
/// component carrying a column basis.
struct HodgeFiberDecomposition {
  struct Component {
    int p = 0;
    int q = 0;
    CMatrix basis;  // dim_V x dim(V^{p,q})
  };

  UnboundedPoint point;
  std::vector<Component> components;  // sorted by decreasing p

  const Component* find(int p, int q) const;
  /// Column span of all components with first index >= p.
  CMatrix filtration_basis(int p) const;
  /// All component bases side by side (square, full rank).
  CMatrix full_basis() const;
  int smallest_p() const { return components.front().p; }
  int total_dim() const;
};

/// Basis of the weight-n subspace {v : rho(h(r)) v = r^{-n} v}, computed as
/// an eigenspace of rho(h(r0)) at r0 = 2. May be empty.
CMatrix weight_component(const Representation& rep, int n);

/// Decomposition at the reference point via simultaneous eigenspaces of
/// rho(h(e^{i theta0})), pushed to a moved point by rho(point_to_group(p)).
/// Eigenvalues are classified against the predicted z^{-p} zbar^{-q} values;
/// theta0 is chosen so the predictions are pairwise separated.
HodgeFiberDecomposition fiber_decompose(const Representation& rep,
                                        const UnboundedPoint& point);

/// Moves a reference decomposition to another point without re-solving the
/// eigenproblem (for inner loops over many points).
HodgeFiberDecomposition push_decomposition(const HodgeFiberDecomposition& ref,
                                           const Representation& rep,
                                           const UnboundedPoint& point);

/// Residuals of drho(X) V^{p,q} against V^{p+1,q-1} for X in g_1m1 (raising)
/// and against V^{p-1,q+1} for X in g_m11 (lowering).
struct ShiftingReport {
  struct Entry {
    int p = 0;
    int q = 0;
    int shift = 0;  // +1 raising, -1 lowering
    double residual = 0.0;
  };
  std::vector<Entry> entries;
  double max_residual() const;
};

ShiftingReport check_shifting(const Representation& rep, const HodgeFrame& frame);

/// Group-theoretic holomorphic section through a filtration vector at the
/// reference point: sigma(Z) = rho(Exp X(Z)) v, polynomial in the bounded
/// coordinates because drho(X) is nilpotent.
struct HolomorphicSection {
  Representation rep;
  HodgeFrame frame;
  CVector base_vector;
  int p_level = 0;
};

/// Throws InvalidBaseVectorError when v is not in F^{p_level} at the
/// reference point (residual above 1e-10).
HolomorphicSection build_section(const CVector& v, int p_level,
                                 const Representation& rep,
                                 const HodgeFrame& frame);

/// Primary evaluation: exponential of the lifted bounded coordinate.
CVector eval_section_bounded(const HolomorphicSection& sec, const BoundedPoint& z);
CVector eval_section(const HolomorphicSection& sec, const UnboundedPoint& p);

/// Second path through the group factorization: rho(zeta(g)) v.
CVector eval_section_factorized(const HolomorphicSection& sec,
                                const UnboundedPoint& p);

/// Certifies that every component of the section is a polynomial in the
/// bounded coordinates of the expected degree: an interpolant fitted on one
/// deterministic sample set must reproduce held-out values.
struct HolomorphyReport {
  int degree_bound = 0;
  double max_heldout_residual = 0.0;
};

HolomorphyReport holomorphy_check(const HolomorphicSection& sec);

/// Monomial exponents and evaluation used by the polynomial machinery.
std::vector<std::vector<int>> monomial_exponents(int n_vars, int min_degree,
                                                 int max_degree);
Complex monomial_value(const std::vector<int>& alpha, const BoundedPoint& z);

/// Exact polynomial coefficients of every section component in the bounded
/// coordinates (fit of known degree, exact for these sections).
struct PolynomialForm {
  std::vector<std::vector<int>> exponents;  // shared across components
  CMatrix coefficients;                     // dim_V x n_monomials
};

PolynomialForm section_polynomial(const HolomorphicSection& sec);

}  // namespace minext
