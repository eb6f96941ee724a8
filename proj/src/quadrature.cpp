#include "minext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace minext {

void gauss_legendre_unit(int n, RVector& nodes, RVector& weights) {
  nodes.resize(n);
  weights.resize(n);
  // Roots of P_n on [-1, 1] by Newton from the Chebyshev initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes(i) = 0.5 * (x + 1.0);
    weights(i) = 1.0 / ((1.0 - x * x) * dp * dp);  // includes the [0,1] rescale
  }
}

QuadratureRule QuadratureRule::disk(int n_radial, int n_angular) {
  if (n_radial < 1 || n_angular < 1)
    throw ConfigError("disk rule needs positive node counts");
  QuadratureRule rule;
  gauss_legendre_unit(n_radial, rule.radial_nodes, rule.radial_weights);
  rule.radial_weights *= 0.5;  // du = 2 r dr
  rule.angular_count = n_angular;
  for (int i = 0; i < n_radial; ++i)
    if (rule.radial_weights(i) <= 0.0)
      throw InternalConsistencyError("disk rule: nonpositive weight");
  if (std::abs(rule.weight_sum() - M_PI) > 1e-12)
    throw InternalConsistencyError("disk rule: weights do not sum to pi");
  return rule;
}

double QuadratureRule::weight_sum() const {
  return radial_weights.sum() * 2.0 * M_PI;
}

IntegralEstimate integrate_disk(const std::function<Complex(Complex)>& f,
                                const QuadratureRule& rule) {
  auto batch = integrate_disk_batch(
      [&](Complex t, std::span<Complex> out) { out[0] = f(t); }, 1, rule, 1);
  return batch[0];
}

std::vector<IntegralEstimate> integrate_disk_batch(
    const std::function<void(Complex, std::span<Complex>)>& f, int n_out,
    const QuadratureRule& rule, int parallel) {
  const int nr = static_cast<int>(rule.radial_nodes.size());
  const int na = rule.angular_count;
  const double dtheta = 2.0 * M_PI / na;

  // One partial sum per radial ring; rings are combined in index order so the
  // result is independent of the thread count.
  std::vector<std::vector<Complex>> ring_sums(
      static_cast<std::size_t>(nr), std::vector<Complex>(static_cast<std::size_t>(n_out)));
  auto do_ring = [&](int i) {
    const double r = std::sqrt(rule.radial_nodes(i));
    const double w = rule.radial_weights(i) * dtheta;
    std::vector<Complex> vals(static_cast<std::size_t>(n_out));
    auto& acc = ring_sums[static_cast<std::size_t>(i)];
    for (int j = 0; j < na; ++j) {
      const double phi = dtheta * j;
      const Complex t = std::polar(r, phi);
      f(t, std::span<Complex>(vals));
      for (int m = 0; m < n_out; ++m) {
        if (!std::isfinite(vals[static_cast<std::size_t>(m)].real()) ||
            !std::isfinite(vals[static_cast<std::size_t>(m)].imag()))
          throw IntegrandError("integrate_disk: non-finite integrand value");
        acc[static_cast<std::size_t>(m)] += w * vals[static_cast<std::size_t>(m)];
      }
    }
  };

  if (parallel <= 1) {
    for (int i = 0; i < nr; ++i) do_ring(i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < nr; i = next.fetch_add(1)) do_ring(i);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(parallel, nr); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<IntegralEstimate> out(static_cast<std::size_t>(n_out));
  for (int m = 0; m < n_out; ++m) {
    Complex total = 0.0;
    for (int i = 0; i < nr; ++i) total += ring_sums[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
    out[static_cast<std::size_t>(m)] =
        IntegralEstimate{total, 0.0, static_cast<std::int64_t>(nr) * na};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

CMatrix mc_candidate(const MCSampler& sampler, std::uint64_t index) {
  const int g = sampler.spec.genus;
  CounterRng rng(sampler.seed, index);
  CMatrix z = CMatrix::Zero(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      const Complex v = rng.next_box();
      z(j, k) = v;
      z(k, j) = v;
    }
  return z;
}

std::vector<BoundedPoint> mc_sample(const MCSampler& sampler, std::int64_t n,
                                    std::int64_t* candidates_used) {
  std::vector<BoundedPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  std::int64_t drawn = 0;
  constexpr std::int64_t kWarmup = 100000;
  while (static_cast<std::int64_t>(out.size()) < n) {
    const CMatrix z = mc_candidate(sampler, static_cast<std::uint64_t>(drawn));
    ++drawn;
    if (contains(sampler.spec, z, Model::Bounded))
      out.push_back(BoundedPoint{sampler.spec, z});
    if (drawn >= kWarmup &&
        static_cast<double>(out.size()) < 1e-6 * static_cast<double>(drawn))
      throw SamplerDegenerateError("mc_sample: acceptance ratio below 1e-6");
  }
  if (candidates_used) *candidates_used = drawn;
  return out;
}

namespace {

double box_volume(const DomainSpec& spec) {
  return std::pow(4.0, spec.bounded_dim());
}

}  // namespace

McBatchResult mc_integrate_batch(
    const MCSampler& sampler, std::int64_t n_candidates,
    const std::function<void(const BoundedPoint&, std::span<Complex>)>& f,
    int n_out, int parallel) {
  if (n_candidates <= 1) throw ConfigError("mc_integrate_batch: need n > 1");
  constexpr std::int64_t kChunk = 65536;
  const std::int64_t n_chunks = (n_candidates + kChunk - 1) / kChunk;

  struct Partial {
    std::vector<Complex> sum;
    std::vector<double> sumsq;
    std::int64_t accepted = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

  auto do_chunk = [&](std::int64_t c) {
    Partial part;
    part.sum.assign(static_cast<std::size_t>(n_out), Complex(0.0));
    part.sumsq.assign(static_cast<std::size_t>(n_out), 0.0);
    std::vector<Complex> vals(static_cast<std::size_t>(n_out));
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n_candidates, lo + kChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      const CMatrix z = mc_candidate(sampler, static_cast<std::uint64_t>(i));
      if (!contains(sampler.spec, z, Model::Bounded)) continue;
      ++part.accepted;
      const BoundedPoint p{sampler.spec, z};
      f(p, std::span<Complex>(vals));
      for (int m = 0; m < n_out; ++m) {
        const Complex v = vals[static_cast<std::size_t>(m)];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw IntegrandError("mc_integrate_batch: non-finite integrand value");
        part.sum[static_cast<std::size_t>(m)] += v;
        part.sumsq[static_cast<std::size_t>(m)] += std::norm(v);
      }
    }
    partials[static_cast<std::size_t>(c)] = std::move(part);
  };

  if (parallel <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) do_chunk(c);
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
      for (std::int64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
        do_chunk(c);
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(
        std::min<std::int64_t>(parallel, n_chunks));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  McBatchResult result;
  result.n_candidates = n_candidates;
  result.box_volume = box_volume(sampler.spec);
  std::vector<Complex> sum(static_cast<std::size_t>(n_out), Complex(0.0));
  std::vector<double> sumsq(static_cast<std::size_t>(n_out), 0.0);
  for (const auto& part : partials) {
    result.n_accepted += part.accepted;
    for (int m = 0; m < n_out; ++m) {
      sum[static_cast<std::size_t>(m)] += part.sum[static_cast<std::size_t>(m)];
      sumsq[static_cast<std::size_t>(m)] += part.sumsq[static_cast<std::size_t>(m)];
    }
  }
  const double n = static_cast<double>(n_candidates);
  result.estimates.resize(static_cast<std::size_t>(n_out));
  for (int m = 0; m < n_out; ++m) {
    const Complex mean = sum[static_cast<std::size_t>(m)] / n;
    const double var =
        std::max(0.0, (sumsq[static_cast<std::size_t>(m)] - n * std::norm(mean)) / (n - 1.0));
    result.estimates[static_cast<std::size_t>(m)] = IntegralEstimate{
        result.box_volume * mean, result.box_volume * std::sqrt(var / n),
        n_candidates};
  }
  return result;
}

IntegralEstimate mc_volume(const MCSampler& sampler, std::int64_t n_candidates) {
  auto batch = mc_integrate_batch(
      sampler, n_candidates,
      [](const BoundedPoint&, std::span<Complex> out) { out[0] = 1.0; }, 1, 1);
  return batch.estimates[0];
}

Integrator Integrator::disk(QuadratureRule r, int parallel) {
  Integrator it;
  it.kind = Kind::Disk;
  it.rule = std::move(r);
  it.parallel = parallel;
  return it;
}

Integrator Integrator::monte_carlo(MCSampler s, std::int64_t n, int parallel) {
  Integrator it;
  it.kind = Kind::MonteCarlo;
  it.sampler = s;
  it.mc_candidates = n;
  it.parallel = parallel;
  return it;
}

std::vector<IntegralEstimate> integrate_batch(
    const Integrator& integrator, const DomainSpec& spec,
    const std::function<void(const BoundedPoint&, std::span<Complex>)>& f,
    int n_out) {
  if (integrator.kind == Integrator::Kind::Disk) {
    if (spec.bounded_dim() != 1)
      throw ConfigError("disk rule only applies to one-coordinate domains");
    return integrate_disk_batch(
        [&](Complex t, std::span<Complex> out) {
          f(BoundedPoint{spec, CMatrix::Constant(1, 1, t)}, out);
        },
        n_out, integrator.rule, integrator.parallel);
  }
  MCSampler sampler = integrator.sampler;
  sampler.spec = spec;
  return mc_integrate_batch(sampler, integrator.mc_candidates, f, n_out,
                            integrator.parallel)
      .estimates;
}

IntegralEstimate l2_inner(const HolomorphicSection& sec1,
                          const HolomorphicSection& sec2,
                          const PolarizationForm& pol, const Representation& rep,
                          const Integrator& integrator) {
  const HodgeFiberDecomposition ref =
      fiber_decompose(rep, UnboundedPoint::reference(rep.domain()));
  auto f = [&](const BoundedPoint& z, std::span<Complex> out) {
    const UnboundedPoint p = hc_inverse(z);
    const HodgeFiberDecomposition decomp = push_decomposition(ref, rep, p);
    out[0] = hodge_metric(pol, decomp, eval_section_bounded(sec1, z),
                          eval_section_bounded(sec2, z));
  };
  return integrate_batch(integrator, rep.domain(), f, 1)[0];
}

IntegralEstimate l2_norm(const HolomorphicSection& sec,
                         const PolarizationForm& pol, const Representation& rep,
                         const Integrator& integrator) {
  return l2_inner(sec, sec, pol, rep, integrator);
}

double geometric_fiber_norm(Complex tau) {
  // Lattice C/(Z + tau Z) parametrized by (x, y) in [0,1]^2 via z = x + tau y:
  // dz wedge dzbar pulls back to (taubar - tau) dx dy. The normalizing
  // constant c_1 = i/2 makes the answer real positive.
  RVector nodes, weights;
  gauss_legendre_unit(8, nodes, weights);
  Complex integral = 0.0;
  for (int a = 0; a < nodes.size(); ++a)
    for (int b = 0; b < nodes.size(); ++b) {
      const Complex coeff = std::conj(tau) - tau;
      integral += weights(a) * weights(b) * coeff;
    }
  const Complex c1 = 0.5 * kImag;
  const Complex out = c1 * integral;
  return out.real();
}

}  // namespace minext
