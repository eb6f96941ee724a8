#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minext/polarization.hpp"
#include "minext/rng.hpp"

namespace minext {

/// Deterministic polar rule on the unit disk: Gauss-Legendre in u = r^2 on
/// [0, 1] times a uniform angular grid. Exact for integrands polynomial in
/// t, tbar of radial degree <= 2 n_radial - 1 (in u) and angular degree
/// < n_angular. Construction checks positivity and that the weights sum to pi.
struct QuadratureRule {
  RVector radial_nodes;    // in u = r^2
  RVector radial_weights;  // already divided by 2 (du = 2 r dr)
  int angular_count = 0;

  static QuadratureRule disk(int n_radial = 64, int n_angular = 128);
  double weight_sum() const;
};

/// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration.
void gauss_legendre_unit(int n, RVector& nodes, RVector& weights);

struct IntegralEstimate {
  Complex value{0.0, 0.0};
  double std_error = 0.0;  // 0 for deterministic rules
  std::int64_t n_points = 0;
};

IntegralEstimate integrate_disk(const std::function<Complex(Complex)>& f,
                                const QuadratureRule& rule);

/// One pass over the nodes evaluating several integrands at once. Summation
/// order is fixed (chunked by radial index), so results do not depend on the
/// number of threads.
std::vector<IntegralEstimate> integrate_disk_batch(
    const std::function<void(Complex, std::span<Complex>)>& f, int n_out,
    const QuadratureRule& rule, int parallel = 1);

/// Seeded rejection sampler for the bounded model: upper-triangle coordinates
/// uniform in the complex box [-1,1)^2, symmetrized, accepted when inside.
struct MCSampler {
  std::uint64_t seed = 0;
  DomainSpec spec;
};

/// Candidate for a given counter value (pure function of seed and index).
CMatrix mc_candidate(const MCSampler& sampler, std::uint64_t index);

/// n accepted points. Throws SamplerDegenerateError when the acceptance ratio
/// collapses after warmup. `candidates_used`, if given, receives the number
/// of raw draws.
std::vector<BoundedPoint> mc_sample(const MCSampler& sampler, std::int64_t n,
                                    std::int64_t* candidates_used = nullptr);

/// Volume of the bounded domain in the fixed coordinates (box volume times
/// acceptance ratio) with a binomial standard error.
IntegralEstimate mc_volume(const MCSampler& sampler, std::int64_t n_candidates);

struct McBatchResult {
  std::vector<IntegralEstimate> estimates;
  std::int64_t n_candidates = 0;
  std::int64_t n_accepted = 0;
  double box_volume = 0.0;
};

/// Monte Carlo integrals over the bounded domain: box volume times the mean
/// of indicator * f over candidates. One pass, shared samples across the
/// integrand components, fixed chunked reduction.
McBatchResult mc_integrate_batch(
    const MCSampler& sampler, std::int64_t n_candidates,
    const std::function<void(const BoundedPoint&, std::span<Complex>)>& f,
    int n_out, int parallel = 1);

/// Which integration backend an operation should use.
struct Integrator {
  enum class Kind { Disk, MonteCarlo };
  Kind kind = Kind::Disk;
  QuadratureRule rule;
  MCSampler sampler;
  std::int64_t mc_candidates = 0;
  int parallel = 1;

  static Integrator disk(QuadratureRule r = QuadratureRule::disk(), int parallel = 1);
  static Integrator monte_carlo(MCSampler s, std::int64_t n, int parallel = 1);
};

/// Generic batched integral over the bounded model of either backend.
std::vector<IntegralEstimate> integrate_batch(
    const Integrator& integrator, const DomainSpec& spec,
    const std::function<void(const BoundedPoint&, std::span<Complex>)>& f,
    int n_out);

/// L2 inner product (sigma1, sigma2) = integral of the polarization function
/// over the bounded model in the fixed coordinates.
IntegralEstimate l2_inner(const HolomorphicSection& sec1,
                          const HolomorphicSection& sec2,
                          const PolarizationForm& pol, const Representation& rep,
                          const Integrator& integrator);

IntegralEstimate l2_norm(const HolomorphicSection& sec,
                         const PolarizationForm& pol, const Representation& rep,
                         const Integrator& integrator);

/// Norm of the fiber form dz on C/(Z + tau Z) in the geometric normalization
/// c_1 * integral of dz wedge conj(dz), evaluated by quadrature over the
/// fundamental square. Equals Im(tau).
double geometric_fiber_norm(Complex tau);

}  // namespace minext
