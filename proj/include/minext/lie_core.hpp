#pragma once

#include <string>
#include <vector>

#include "minext/linalg.hpp"

namespace minext {

enum class DomainKind { UpperHalfPlane, SiegelUpperHalfSpace };

/// Which Hermitian symmetric domain we work over. The upper half plane is the
/// genus-1 Siegel space under the identification tau <-> (tau) as a 1x1
/// matrix; both kinds share one code path and tests pin the identification.
struct DomainSpec {
  DomainKind kind = DomainKind::UpperHalfPlane;
  int genus = 1;

  static DomainSpec upper_half_plane() { return {DomainKind::UpperHalfPlane, 1}; }
  static DomainSpec siegel(int genus);

  /// Group elements and algebra elements are ambient x ambient.
  int ambient_size() const { return 2 * genus; }
  /// Domain points (Omega, Z) are point x point complex symmetric matrices.
  int point_size() const { return genus; }
  /// Number of independent complex coordinates of the bounded model.
  int bounded_dim() const { return genus * (genus + 1) / 2; }

  std::string name() const;
  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// The circle action at the reference point: h(e^{i theta}) is the block
/// rotation (cos t I, sin t I; -sin t I, cos t I) in G_R. For genus 1 this is
/// the 2x2 rotation matrix.
CMatrix circle_action(const DomainSpec& spec, double theta);

/// Basis of the full complexified algebra sp(2g, C) (= sl(2, C) for g = 1),
/// used for adjoint-operator matrices and consistency checks.
std::vector<CMatrix> algebra_basis(const DomainSpec& spec);

/// Reference-point data: the eigenspace decomposition of the complexified
/// algebra under Ad of the circle action,
///   g_C = g00 + g_m11 + g_1m1,
/// with Ad(h(e^{i t})) acting by 1, e^{2it}, e^{-2it} respectively. The g_m11
/// basis is a fixed normalized basis (it pins the coordinates, and therefore
/// the Lebesgue measure, of the bounded model): for genus 1 the single element
/// (1/2, i/2; i/2, -1/2), for higher genus the symmetric-unit blocks
/// X(E_jj), X(E_jk + E_kj) with X(A) = (A/2, iA/2; iA/2, -A/2).
struct HodgeFrame {
  DomainSpec spec;
  std::vector<CMatrix> g00;
  std::vector<CMatrix> g_m11;
  std::vector<CMatrix> g_1m1;

  CMatrix circle(double theta) const { return circle_action(spec, theta); }
  int algebra_dim() const {
    return static_cast<int>(g00.size() + g_m11.size() + g_1m1.size());
  }
};

/// Builds the frame and certifies it: eigenvalue property of every basis
/// element under Ad(h(e^{i theta_0})) at a generic angle, joint spanning and
/// linear independence, and eigenvalue multiplicities of the adjoint operator.
/// Throws InternalConsistencyError if any check fails.
HodgeFrame hodge_decompose_algebra(const DomainSpec& spec);

/// Matrix commutator XY - YX. Throws ShapeMismatchError on dimension mismatch.
CMatrix bracket(const CMatrix& x, const CMatrix& y);

/// Lifts a symmetric coordinate matrix Z to the g_m11 element
/// sum_{j<=k} Z_jk B_jk.
CMatrix gm11_element(const HodgeFrame& frame, const CMatrix& z);

/// Coordinates of an element of g_m11 in the fixed basis, returned as the
/// symmetric matrix Z. Throws InternalConsistencyError when x is not in the
/// span within `tol`.
CMatrix gm11_coordinates(const HodgeFrame& frame, const CMatrix& x,
                         double tol = 1e-9);

}  // namespace minext
