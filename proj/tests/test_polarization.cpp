#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "minext/polarization.hpp"

using namespace minext;
using testing::mat2;

namespace {

CVector cvec2(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

HolomorphicSection modular_section() {
  const Representation rep = Representation::standard_sl2();
  const HodgeFrame frame = hodge_decompose_algebra(rep.domain());
  return build_section(cvec2(kImag, 1), 1, rep, frame);
}

}  // namespace

TEST_CASE("builtin polarization matrices") {
  const PolarizationForm p2 = builtin_polarization(Representation::standard_sl2());
  RMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((p2.s - expected).cwiseAbs().maxCoeff() == 0.0);

  const PolarizationForm psp = builtin_polarization(Representation::standard_sp(2));
  CHECK((psp.s + psp.s.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Antisymmetry for the odd-weight builtins: S(v, v) = 0.
  CounterRng rng(3);
  for (int s = 0; s < 5; ++s) {
    CVector v(4);
    for (int i = 0; i < 4; ++i) v(i) = rng.next_gaussian();
    CHECK(std::abs(s_bilinear(psp, v, v)) < 1e-14);
  }

  // Every builtin passes its construction-time verification.
  for (int k = 1; k <= 6; ++k)
    CHECK_NOTHROW(builtin_polarization(Representation::sym_sl2(k)));
  for (int g = 1; g <= 3; ++g)
    CHECK_NOTHROW(builtin_polarization(Representation::standard_sp(g)));
}

TEST_CASE("hermitian form properties") {
  const Representation rep = Representation::standard_sl2();
  const PolarizationForm pol = builtin_polarization(rep);
  CounterRng rng(5);
  for (int s = 0; s < 10; ++s) {
    const CVector v = cvec2(rng.next_gaussian(), rng.next_gaussian());
    const CVector w = cvec2(rng.next_gaussian(), rng.next_gaussian());
    // Hermitian symmetry of S^h.
    CHECK(std::abs(s_hermitian(pol, v, w) - std::conj(s_hermitian(pol, w, v))) < 1e-13);
    // Invariance under the real group.
    const CMatrix g = point_to_group(random_unbounded_point(rep.domain(), rng)) *
                      circle_action(rep.domain(), 2.0 * M_PI * rng.next_unit());
    const CMatrix r = rep.rho(g);
    CHECK(std::abs(s_hermitian(pol, CVector(r * v), CVector(r * w)) -
                   s_hermitian(pol, v, w)) < 1e-11);
  }
}

TEST_CASE("hodge metric on the modular fiber") {
  const Representation rep = Representation::standard_sl2();
  const PolarizationForm pol = builtin_polarization(rep);
  CounterRng rng(7);
  for (int s = 0; s < 20; ++s) {
    const Complex tau = random_unbounded_point(rep.domain(), rng).tau();
    const HodgeFiberDecomposition d = fiber_decompose(rep, UnboundedPoint::from_tau(tau));
    // h_E((tau, 1), (tau, 1)) = 2 Im tau.
    const Complex h = hodge_metric(pol, d, cvec2(tau, 1), cvec2(tau, 1));
    CHECK(std::abs(h - Complex(2.0 * tau.imag(), 0.0)) < 1e-11 * std::abs(h));
  }
}

TEST_CASE("hodge metric is positive on the smallest piece") {
  CounterRng rng(11);
  for (const Representation& rep :
       {Representation::standard_sl2(), Representation::sym_sl2(3),
        Representation::standard_sp(2)}) {
    const PolarizationForm pol = builtin_polarization(rep);
    const HodgeFiberDecomposition ref =
        fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
    const CMatrix basis = rep.smallest_piece_basis();
    for (int s = 0; s < 10; ++s) {
      CVector v = CVector::Zero(rep.dim());
      for (Eigen::Index j = 0; j < basis.cols(); ++j)
        v += rng.next_gaussian() * basis.col(j);
      if (v.norm() < 1e-8) continue;
      const Complex h = hodge_metric(pol, ref, v, v);
      CHECK(h.real() > 0.0);
      CHECK(std::abs(h.imag()) < 1e-12 * h.real());
    }
  }
}

TEST_CASE("pointwise norm ratio of the modular section") {
  const Representation rep = Representation::standard_sl2();
  const PolarizationForm pol = builtin_polarization(rep);
  const HolomorphicSection sigma = modular_section();
  const UnboundedPoint ref = UnboundedPoint::from_tau(kImag);
  const Complex hv = polarization_function(sigma, sigma, pol, ref);
  CHECK(std::abs(hv - Complex(2, 0)) < 1e-13);

  CounterRng rng(13);
  for (int s = 0; s < 100; ++s) {
    const Complex tau = random_unbounded_point(rep.domain(), rng).tau();
    const Complex t = (tau - kImag) / (tau + kImag);
    const Complex ratio =
        polarization_function(sigma, sigma, pol, UnboundedPoint::from_tau(tau)) / hv;
    CHECK(std::abs(ratio - (1.0 - std::norm(t))) < 1e-10);
  }
}

TEST_CASE("polarization function is hermitian and positive") {
  const Representation rep = Representation::standard_sp(2);
  const PolarizationForm pol = builtin_polarization(rep);
  const HodgeFrame frame = hodge_decompose_algebra(rep.domain());
  const CMatrix basis = rep.smallest_piece_basis();
  const HolomorphicSection s1 = build_section(basis.col(0), 1, rep, frame);
  const HolomorphicSection s2 = build_section(basis.col(1), 1, rep, frame);

  CounterRng rng(17);
  for (int s = 0; s < 10; ++s) {
    const UnboundedPoint p = random_unbounded_point(rep.domain(), rng);
    const Complex a = polarization_function(s1, s2, pol, p);
    const Complex b = polarization_function(s2, s1, pol, p);
    CHECK(std::abs(a - std::conj(b)) < 1e-11);
    const Complex n = polarization_function(s1, s1, pol, p);
    CHECK(n.real() >= 0.0);
    CHECK(std::abs(n.imag()) < 1e-12 * std::max(1.0, n.real()));
  }
}

TEST_CASE("circle invariance of polarization functions") {
  const Representation rep = Representation::standard_sl2();
  const PolarizationForm pol = builtin_polarization(rep);
  const HolomorphicSection sigma = modular_section();

  // At the reference point the whole orbit is fixed.
  CHECK(s1_orbit_check(sigma, sigma, pol, UnboundedPoint::from_tau(kImag), 16) < 1e-13);

  CounterRng rng(19);
  for (int s = 0; s < 10; ++s) {
    const UnboundedPoint p = random_unbounded_point(rep.domain(), rng);
    CHECK(s1_orbit_check(sigma, sigma, pol, p, 16) < 1e-10);
  }
}

TEST_CASE("circle invariance for the symplectic section") {
  const Representation rep = Representation::standard_sp(2);
  const PolarizationForm pol = builtin_polarization(rep);
  const HodgeFrame frame = hodge_decompose_algebra(rep.domain());
  const CMatrix basis = rep.smallest_piece_basis();
  const HolomorphicSection s1 = build_section(basis.col(0), 1, rep, frame);
  const HolomorphicSection s2 = build_section(basis.col(1), 1, rep, frame);

  CounterRng rng(23);
  for (int s = 0; s < 5; ++s) {
    const UnboundedPoint p = random_unbounded_point(rep.domain(), rng);
    CHECK(s1_orbit_check(s1, s1, pol, p, 16) < 1e-9);
    CHECK(s1_orbit_check(s1, s2, pol, p, 16) < 1e-9);
  }
}

TEST_CASE("K-invariance restated through moved fibers") {
  const Representation rep = Representation::standard_sp(2);
  const PolarizationForm pol = builtin_polarization(rep);
  const HodgeFiberDecomposition ref =
      fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
  CounterRng rng(29);
  for (int s = 0; s < 10; ++s) {
    const CMatrix k = random_compact_element(rep.domain(), rng);
    const CMatrix rk = rep.rho(k);
    const UnboundedPoint moved =
        group_act(k, UnboundedPoint::reference(rep.domain()));
    // k fixes the reference point, so both sides use the same fiber.
    CHECK((moved.omega - ref.point.omega).cwiseAbs().maxCoeff() < 1e-12);
    CVector v(4), w(4);
    for (int i = 0; i < 4; ++i) {
      v(i) = rng.next_gaussian();
      w(i) = rng.next_gaussian();
    }
    const Complex lhs = hodge_metric(pol, ref, CVector(rk * v), CVector(rk * w));
    const Complex rhs = hodge_metric(pol, ref, v, w);
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("degenerate fiber bases are rejected") {
  const Representation rep = Representation::standard_sl2();
  const PolarizationForm pol = builtin_polarization(rep);
  HodgeFiberDecomposition broken =
      fiber_decompose(rep, UnboundedPoint::from_tau(kImag));
  broken.components[1].basis = broken.components[0].basis;  // duplicate span
  CHECK_THROWS_AS(FiberMetric(pol, broken), InconsistentFiberError);
  CHECK_THROWS_AS(hodge_metric(pol, broken, cvec2(1, 0), cvec2(1, 0)),
                  InconsistentFiberError);
}

TEST_CASE("FiberMetric matches hodge_metric") {
  const Representation rep = Representation::standard_sp(2);
  const PolarizationForm pol = builtin_polarization(rep);
  CounterRng rng(31);
  const UnboundedPoint p = random_unbounded_point(rep.domain(), rng);
  const HodgeFiberDecomposition d = fiber_decompose(rep, p);
  const FiberMetric metric(pol, d);
  for (int s = 0; s < 10; ++s) {
    CVector v(4), w(4);
    for (int i = 0; i < 4; ++i) {
      v(i) = rng.next_gaussian();
      w(i) = rng.next_gaussian();
    }
    CHECK(std::abs(metric(v, w) - hodge_metric(pol, d, v, w)) < 1e-12);
  }
}
