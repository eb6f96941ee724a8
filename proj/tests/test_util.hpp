#pragma once

#include <initializer_list>

#include "minext/hc_domain.hpp"
#include "minext/rng.hpp"

namespace minext::testing {

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Random element of the real symplectic algebra sp(2g, R).
inline CMatrix random_sp_algebra_real(const DomainSpec& spec, CounterRng& rng,
                                      double scale = 1.0) {
  const int g = spec.genus;
  RMatrix a(g, g), b(g, g), c(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      a(i, j) = scale * rng.next_symmetric();
      b(i, j) = scale * rng.next_symmetric();
      c(i, j) = scale * rng.next_symmetric();
    }
  b = RMatrix(0.5 * (b + b.transpose()));
  c = RMatrix(0.5 * (c + c.transpose()));
  CMatrix x = CMatrix::Zero(2 * g, 2 * g);
  x.topLeftCorner(g, g) = a.cast<Complex>();
  x.topRightCorner(g, g) = b.cast<Complex>();
  x.bottomLeftCorner(g, g) = c.cast<Complex>();
  x.bottomRightCorner(g, g) = -a.transpose().cast<Complex>();
  return x;
}

}  // namespace minext::testing
