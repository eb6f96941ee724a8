#pragma once

#include "minext/lie_core.hpp"

namespace minext {

/// Point of the unbounded model: tau in the upper half plane (stored 1x1) or
/// a complex symmetric Omega with positive definite imaginary part.
struct UnboundedPoint {
  DomainSpec spec;
  CMatrix omega;

  static UnboundedPoint from_tau(Complex tau);
  static UnboundedPoint reference(const DomainSpec& spec);  // i * Id
  Complex tau() const { return omega(0, 0); }
};

/// Point of the bounded model: t in the unit disk (stored 1x1) or a complex
/// symmetric Z with I - conj(Z) Z positive definite. The entries of Z are the
/// coordinates of the Harish-Chandra image in the fixed g_m11 basis.
struct BoundedPoint {
  DomainSpec spec;
  CMatrix z;

  static BoundedPoint from_t(Complex t);
  Complex t() const { return z(0, 0); }
};

enum class Model { Bounded, Unbounded };

/// Membership with a positive-definiteness margin of 1e-10 on the smallest
/// eigenvalue; boundary points are rejected, not clamped.
bool contains(const DomainSpec& spec, const CMatrix& candidate, Model model);

inline bool contains(const UnboundedPoint& p) {
  return contains(p.spec, p.omega, Model::Unbounded);
}
inline bool contains(const BoundedPoint& p) {
  return contains(p.spec, p.z, Model::Bounded);
}

/// Cayley transform to the bounded model: Z = (Omega - iI)(Omega + iI)^{-1}.
BoundedPoint hc_embed(const UnboundedPoint& p);

/// Inverse transform Omega = i(I + Z)(I - Z)^{-1}. Throws BoundaryPointError
/// when I - Z is singular.
UnboundedPoint hc_inverse(const BoundedPoint& b);

/// Mobius action of g in G_R by blocks (A, B; C, D):
/// Omega -> (A Omega + B)(C Omega + D)^{-1}.
UnboundedPoint group_act(const CMatrix& g, const UnboundedPoint& p);

/// A real group element moving the reference point i*Id to p: with
/// Omega = X + iY and Y = L L^T this is (L, X L^{-T}; 0, L^{-T}).
CMatrix point_to_group(const UnboundedPoint& p);

/// Unique factorization g = p_plus * k_c * p_minus over the big cell, with
/// log(p_plus) in g_m11 and log(p_minus) in g_1m1.
struct HCFactorization {
  CMatrix p_plus;
  CMatrix k_c;
  CMatrix p_minus;
};

/// Computed by conjugating with the fixed Cayley matrix, where the compact
/// factor becomes block diagonal and p_plus/p_minus become block unipotent
/// triangular, then performing a block LDU factorization. Throws
/// NotInBigCellError when the pivot block is singular.
HCFactorization factorize_pkp(const CMatrix& g, const HodgeFrame& frame);

/// The blockwise Cayley matrix (1, i; i, 1)/sqrt(2i) conjugating to the model
/// where the factorization is triangular.
CMatrix cayley_matrix(const DomainSpec& spec);

/// Harish-Chandra coordinate of p through the group: log of the p_plus factor
/// of point_to_group(p), expressed in the fixed g_m11 basis. Independent code
/// path from hc_embed; the two must agree.
BoundedPoint zeta_coordinate(const UnboundedPoint& p, const HodgeFrame& frame);

class CounterRng;

/// Seeded in-domain point: Omega = X + i(M M^T + c I) with moderate spread.
UnboundedPoint random_unbounded_point(const DomainSpec& spec, CounterRng& rng);

/// Seeded element of the unitary-block compact subgroup (A, B; -B, A) with
/// A + iB unitary; for genus 1 these are the circle matrices.
CMatrix random_compact_element(const DomainSpec& spec, CounterRng& rng);

}  // namespace minext
