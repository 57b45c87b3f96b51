#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/circle_diffeo.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/fit.hpp"
#include "locdiff/interval.hpp"
#include "locdiff/partition.hpp"

namespace locdiff {

struct LocalizedFactor {
  IntervalS1 interval;  // declared support arc
  CircleDiffeo diffeo;
};

// Ordered factor list; the first factor acts first, so the represented map is
// factors.back() o ... o factors.front().
struct LocalizedWord {
  std::vector<LocalizedFactor> factors;
};

// Interpolant psi_k: displacement (sum of the first k weights) * u.
// k = 0 gives the identity, k = size the original map, both exactly.
inline CircleDiffeo psi(const CircleDiffeo& phi, const PartitionOfUnity& p,
                        std::size_t k, const Config& cfg = default_config()) {
  if (k > p.size()) throw ValidationError("interpolant index exceeds partition size");
  if (k == 0) return CircleDiffeo::identity();
  if (k == p.size() || phi.is_identity()) return phi;

  const TrigPoly& u = phi.displacement();
  auto sampler = [&](std::size_t m) {
    std::vector<double> w = u.sample_uniform(m);
    for (std::size_t j = 0; j < m; ++j)
      w[j] *= p.partial_weight(k, kTwoPi * double(j) / double(m));
    return w;
  };
  const std::size_t m0 = detail::next_pow2(
      std::max<std::size_t>(1024, 2 * (phi.mode_count() + 1)));
  return CircleDiffeo::from_displacement(
      detail::fit_adaptive_grid(sampler, m0, cfg, "interpolant"), cfg);
}

// Factorization phi = Xi_m o ... o Xi_1 with Xi_k = psi_k o psi_{k-1}^{-1}
// supported inside the k-th covering interval.
inline LocalizedWord localize(const CircleDiffeo& phi, const PartitionOfUnity& p,
                              const Config& cfg = default_config()) {
  LocalizedWord word;
  word.factors.reserve(p.size());
  if (phi.is_identity()) {
    for (std::size_t i = 0; i < p.size(); ++i)
      word.factors.push_back({p.interval(i), CircleDiffeo::identity()});
    return word;
  }
  if (!in_neighborhood(phi, epsilon_max(p, 1.0)))
    throw OutsideNeighborhood(
        "map exceeds the admissible displacement bound; slice it first");

  CircleDiffeo prev = CircleDiffeo::identity();
  for (std::size_t k = 1; k <= p.size(); ++k) {
    CircleDiffeo cur = psi(phi, p, k, cfg);
    CircleDiffeo factor =
        k == 1 ? cur : compose(cur, invert(prev, cfg), cfg);
    word.factors.push_back({p.interval(k - 1), std::move(factor)});
    prev = std::move(cur);
  }
  return word;
}

// Displacement scaled by lam in [0, 1]; stays a diffeomorphism for any
// diffeomorphism input since scaling toward zero cannot push 1 + u' below
// min(1, inf(1 + u')).
inline CircleDiffeo interpolation_path(const CircleDiffeo& phi, double lam,
                                       const Config& cfg = default_config()) {
  if (!(lam >= 0.0 && lam <= 1.0))
    throw ValidationError("interpolation parameter must lie in [0, 1]");
  if (lam == 0.0) return CircleDiffeo::identity();
  if (lam == 1.0) return phi;
  return CircleDiffeo::from_displacement(phi.displacement().scaled(lam), cfg);
}

// Slice phi along the displacement-scaling path into n consecutive quotient
// factors, doubling n until every factor passes the neighborhood test for the
// partition's admissible bound.  First factor acts first.
inline std::vector<CircleDiffeo> slice_factorize(const CircleDiffeo& phi,
                                                 const PartitionOfUnity& p,
                                                 const Config& cfg = default_config()) {
  const double eps = epsilon_max(p, 1.0);
  if (phi.is_identity() || in_neighborhood(phi, eps)) return {phi};

  for (std::size_t n = 2; n <= std::size_t(cfg.slice_cap); n *= 2) {
    std::vector<CircleDiffeo> factors;
    factors.reserve(n);
    CircleDiffeo prev = CircleDiffeo::identity();
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      CircleDiffeo next = interpolation_path(phi, double(k + 1) / double(n), cfg);
      CircleDiffeo f = compose(next, invert(prev, cfg), cfg);
      ok = in_neighborhood(f, eps);
      factors.push_back(std::move(f));
      prev = std::move(next);
    }
    if (ok) return factors;
  }
  throw SlicingFailure("factor count cap reached before all slices fit the bound");
}

// Three-arc covering of I adapted to the complement arc J' of J: the middle
// arc I3 sits strictly inside J', while I1 and I2 each stay clear of a
// neighborhood of J''s center so that their union with J misses a point.
inline Covering three_interval_cover(const IntervalS1& I, const IntervalS1& J,
                                     std::size_t grid = 4096) {
  for (std::size_t j = 0; j < grid; ++j) {
    const double theta = kTwoPi * double(j) / double(grid);
    if (!I.closure_contains(theta) && !J.closure_contains(theta))
      throw NotApplicable(
          "closures of the two arcs miss part of the circle; a single proper "
          "interval contains their union");
  }

  const double W = kTwoPi - J.length();  // length of the complement arc J'
  if (W <= 1e-6)
    throw Infeasible("complement arc of the second interval has no usable interior");

  const double A = I.a, B = I.b;
  const double js = A + wrap_angle(J.b - A);  // start of J' in I's chart
  const double je = js + W;
  if (je > B + 1e-9)
    throw Infeasible("complement arc does not sit inside the first interval");
  const double d = W / 8.0;

  const IntervalS1 I1 = IntervalS1::make(A, js + 2.0 * d);
  const IntervalS1 I2 = IntervalS1::make(je - 2.0 * d, B);
  const IntervalS1 I3 = IntervalS1::make(js + d, je - d);
  const IntervalS1 Jp = IntervalS1::make(J.b, J.b + W);

  // verify the construction's containments on the same grid
  if (!Jp.contains_arc(I3, -0.5 * d))
    throw ValidationError("middle arc escaped the complement arc");
  const double witness = js + 4.0 * d;  // center of J'
  for (const IntervalS1* arc : {&I1, &I2})
    if (arc->closure_contains(witness) || J.closure_contains(witness))
      throw ValidationError("side arc together with the second interval is dense");

  return Covering::of_arc({I1, I2, I3}, I, grid);
}

}  // namespace locdiff
