#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/circle_diffeo.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/fit.hpp"
#include "locdiff/localization.hpp"
#include "locdiff/moebius.hpp"
#include "locdiff/partition.hpp"

namespace locdiff {

// Ordered composition, first factor acting first.  The whole word is pushed
// through one pointwise lift propagation on a shared grid with a single
// spectral refit at the end, so the result carries one refit error
// independent of the factor count instead of one per pairwise composition.
inline CircleDiffeo word_product(const LocalizedWord& w,
                                 const Config& cfg = default_config()) {
  std::vector<const CircleDiffeo*> active;
  active.reserve(w.factors.size());
  std::size_t max_modes = 0;
  for (const LocalizedFactor& f : w.factors) {
    if (f.diffeo.is_identity()) continue;
    max_modes = std::max(max_modes, f.diffeo.mode_count());
    active.push_back(&f.diffeo);
  }
  if (active.empty()) return CircleDiffeo::identity();
  if (active.size() == 1) return *active.front();

  auto sampler = [&](std::size_t m) {
    std::vector<double> lift(m);
    for (std::size_t j = 0; j < m; ++j) lift[j] = kTwoPi * double(j) / double(m);
    for (const CircleDiffeo* f : active)
      for (std::size_t j = 0; j < m; ++j) lift[j] += f->displacement_interp(lift[j]);
    for (std::size_t j = 0; j < m; ++j) lift[j] -= kTwoPi * double(j) / double(m);
    return lift;
  };
  const std::size_t m0 = detail::next_pow2(
      std::max<std::size_t>(1024, 4 * (max_modes + 1)));
  return CircleDiffeo::from_displacement(
      detail::fit_adaptive_grid(sampler, m0, cfg, "word product"), cfg);
}

// Group inverse of a word: reversed order, inverted factors, same support
// intervals (a map and its inverse move exactly the same points).
inline LocalizedWord inverse_word(const LocalizedWord& w,
                                  const Config& cfg = default_config()) {
  LocalizedWord out;
  out.factors.reserve(w.factors.size());
  for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
    out.factors.push_back({it->interval, invert(it->diffeo, cfg)});
  return out;
}

// Localized word for one Mobius generator small enough to localize directly.
inline LocalizedWord small_generator_word(TSFactor::Kind kind, double value,
                                          const PartitionOfUnity& p,
                                          const Config& cfg = default_config()) {
  const MoebiusElement g = generator(
      kind == TSFactor::Kind::Translation ? GenKind::T : GenKind::S, value);
  const CircleDiffeo d = to_diffeo(g, cfg);
  if (!d.is_identity() && !in_neighborhood(d, epsilon_max(p, 1.0)))
    throw OutsideNeighborhood("generator parameter too large to localize; step it");
  return localize(d, p, cfg);
}

namespace detail {

inline LocalizedWord stepped_word(TSFactor::Kind kind, double value,
                                  const PartitionOfUnity& p, double step,
                                  const Config& cfg) {
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  {
    const CircleDiffeo d = to_diffeo(
        generator(kind == TSFactor::Kind::Translation ? GenKind::T : GenKind::S, step),
        cfg);
    if (!in_neighborhood(d, epsilon_max(p, 1.0)))
      throw StepTooLarge("step parameter fails the neighborhood test");
  }

  double n = std::floor(value / step);
  double r = value - n * step;
  if (r >= step) {  // rounding at an exact multiple
    n += 1.0;
    r = value - n * step;
  }
  if (r < 0.0) r = 0.0;

  const double blocks = std::fabs(n) + 1.0;
  if (blocks * double(p.size()) > double(cfg.word_factor_cap))
    throw WordTooLong("word needs " + std::to_string(std::size_t(blocks)) +
                      " blocks of " + std::to_string(p.size()) +
                      " factors, over the cap");

  LocalizedWord out;
  if (n != 0.0) {
    LocalizedWord block = small_generator_word(kind, step, p, cfg);
    if (n < 0.0) block = inverse_word(block, cfg);
    const std::size_t copies = std::size_t(std::fabs(n));
    out.factors.reserve(copies * block.factors.size() + p.size());
    for (std::size_t i = 0; i < copies; ++i)
      out.factors.insert(out.factors.end(), block.factors.begin(),
                         block.factors.end());
  }
  const LocalizedWord rem = small_generator_word(kind, r, p, cfg);
  out.factors.insert(out.factors.end(), rem.factors.begin(), rem.factors.end());
  return out;
}

}  // namespace detail

// T(t) as repeated localized blocks of T(step) and a remainder block,
// t = n*step + r with r in [0, step) (floor convention; negative t uses
// inverted blocks).
inline LocalizedWord translation_word(double t, const PartitionOfUnity& p,
                                      double tau_step,
                                      const Config& cfg = default_config()) {
  return detail::stepped_word(TSFactor::Kind::Translation, t, p, tau_step, cfg);
}

inline LocalizedWord special_conformal_word(double s, const PartitionOfUnity& p,
                                            double sigma_step,
                                            const Config& cfg = default_config()) {
  return detail::stepped_word(TSFactor::Kind::SpecialConformal, s, p, sigma_step, cfg);
}

// Largest power of 1/2 whose generator passes the neighborhood test.
inline double default_step(TSFactor::Kind kind, const PartitionOfUnity& p,
                           const Config& cfg = default_config()) {
  const double eps = epsilon_max(p, 1.0);
  double step = 1.0;
  for (int j = 0; j <= 40; ++j, step *= 0.5) {
    const CircleDiffeo d = to_diffeo(
        generator(kind == TSFactor::Kind::Translation ? GenKind::T : GenKind::S, step),
        cfg);
    if (in_neighborhood(d, eps)) return step;
  }
  throw StepTooLarge("no dyadic step passes the neighborhood test");
}

// Localized word for an arbitrary Mobius element: its T/S word is expanded
// factor by factor.  The T/S word multiplies left to right as matrices, so
// its leftmost factor acts last on the circle; expansion therefore walks the
// word from the back to keep this word's first factor acting first.
inline LocalizedWord moebius_word(const MoebiusElement& g, const PartitionOfUnity& p,
                                  const Config& cfg = default_config()) {
  const std::vector<TSFactor> ts = ts_word(g);
  LocalizedWord out;
  if (ts.empty()) return out;

  double t_step = 0.0, s_step = 0.0;
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    double& step = it->kind == TSFactor::Kind::Translation ? t_step : s_step;
    if (step == 0.0) step = default_step(it->kind, p, cfg);
    const LocalizedWord part = detail::stepped_word(it->kind, it->param, p, step, cfg);
    out.factors.insert(out.factors.end(), part.factors.begin(), part.factors.end());
  }
  return out;
}

}  // namespace locdiff
