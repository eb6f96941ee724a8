#pragma once

#include "minext/vhs.hpp"

namespace minext {

/// Group-invariant bilinear form polarizing the built-in representations.
/// S is real; the associated Hermitian form is S^h(v, w) = i^{-n} S(v, wbar)
/// and the Hodge metric is (-1)^p S^h on V^{p,q}.
struct PolarizationForm {
  Representation::Tag tag = Representation::Tag::StandardSL2;
  RMatrix s;
  int weight = 1;
};

/// The explicit form per builtin, with every axiom verified at construction:
/// rho-invariance on sampled group elements, positive definiteness of the
/// twisted form S(v, h(i) w), and definiteness of (-1)^p S^h on each V^{p,q}.
/// Throws InvalidPolarizationError if any check fails.
PolarizationForm builtin_polarization(const Representation& rep);

/// S extended complex-bilinearly.
Complex s_bilinear(const PolarizationForm& pol, const CVector& v, const CVector& w);

/// S^h(v, w) = i^{-n} S(v, conj(w)); Hermitian, G_R-invariant.
Complex s_hermitian(const PolarizationForm& pol, const CVector& v, const CVector& w);

/// Hodge metric: decompose v, w against the fiber decomposition and return
/// sum_p (-1)^p S^h(v_p, w_p). Throws InconsistentFiberError when the fiber
/// basis cannot resolve the inputs.
Complex hodge_metric(const PolarizationForm& pol,
                     const HodgeFiberDecomposition& decomp, const CVector& v,
                     const CVector& w);

/// Factorized form of the Hodge metric at one fiber, for taking many pairings
/// without re-decomposing the basis.
class FiberMetric {
 public:
  FiberMetric(const PolarizationForm& pol, const HodgeFiberDecomposition& decomp);

  /// Component pieces of v, ordered as the decomposition components.
  std::vector<CVector> split(const CVector& v) const;
  Complex pair(const std::vector<CVector>& v_pieces,
               const std::vector<CVector>& w_pieces) const;
  Complex operator()(const CVector& v, const CVector& w) const {
    return pair(split(v), split(w));
  }

 private:
  CMatrix s_;
  Complex phase_;
  std::vector<int> signs_;
  std::vector<CMatrix> bases_;
  Eigen::PartialPivLU<CMatrix> lu_;
};

/// The polarization function (sigma1, sigma2)_{h'} = h_E(sigma1(h'), sigma2(h')).
Complex polarization_function(const HolomorphicSection& sec1,
                              const HolomorphicSection& sec2,
                              const PolarizationForm& pol,
                              const UnboundedPoint& point);

/// Max deviation of the polarization function along the circle orbit of a
/// point, |(s1,s2)_{z.p} - (s1,s2)_p| over sampled angles.
double s1_orbit_check(const HolomorphicSection& sec1,
                      const HolomorphicSection& sec2,
                      const PolarizationForm& pol, const UnboundedPoint& point,
                      int n_samples);

}  // namespace minext
