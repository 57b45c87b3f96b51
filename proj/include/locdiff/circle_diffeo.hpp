#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/extremum.hpp"
#include "locdiff/fit.hpp"
#include "locdiff/interval.hpp"
#include "locdiff/trig_poly.hpp"

namespace locdiff {

struct DiffeoMetrics {
  double sup_displacement = 0.0;  // sup |u|, lift displacement
  double inf_derivative = 0.0;    // inf (1 + u')
  double chordal_sup = 0.0;       // sup 2|sin(u/2)|
};

/**
 * Orientation-preserving circle diffeomorphism, stored through its canonical
 * lift  phi~(x) = x + u(x)  with u a trigonometric polynomial and the branch
 * pinned by u(0) in (-pi, pi].  Monotonicity 1 + u' > 0 is validated at
 * construction on the grid cache with a local polish, so every value of this
 * type is a genuine diffeomorphism.
 *
 * Values are immutable and cheap to copy; copies share the write-once grid
 * cache (uniform samples of u and u', oversampled 8x past the top mode), so
 * concurrent use from several threads is safe.
 */
class CircleDiffeo {
public:
  CircleDiffeo() { *this = from_displacement(TrigPoly{}, default_config()); }

  // Canonicalizes the branch, builds the grid cache, validates monotonicity.
  static CircleDiffeo from_displacement(TrigPoly u, const Config& cfg) {
    CircleDiffeo d(std::move(u), cfg);
    return d;
  }

  static CircleDiffeo identity() { return CircleDiffeo(); }

  static CircleDiffeo rotation(double angle) {
    return from_displacement(TrigPoly(angle, {}, {}), default_config());
  }

  const TrigPoly& displacement() const { return u_; }
  const TrigPoly& displacement_derivative() const { return du_; }
  std::size_t mode_count() const { return u_.degree(); }
  bool is_identity() const { return u_.is_zero(); }

  double lift(double x) const { return x + u_(x); }
  double lift_derivative(double x) const { return 1.0 + du_(x); }

  std::size_t grid_size() const { return cache_->m; }
  const std::vector<double>& grid_displacement() const { return cache_->u; }
  const std::vector<double>& grid_derivative() const { return cache_->du; }

  // Barycentric 8-point interpolation of u off the cached grid.  With the 8x
  // oversampled cache this tracks the exact value to ~1e-13 and costs O(1);
  // the long word-product loops live on it.
  double displacement_interp(double x) const {
    if (u_.degree() == 0) return u_.mean();
    const GridCache& c = *cache_;
    double t = wrap_angle(x) * double(c.m) / kTwoPi;
    std::size_t i0 = std::size_t(t);
    if (i0 >= c.m) i0 = 0, t = 0.0;
    const double s = t - double(i0);
    if (s == 0.0) return c.u[i0];
    static constexpr double w[8] = {1.0, -7.0, 21.0, -35.0, 35.0, -21.0, 7.0, -1.0};
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double d = s + 3.0 - double(j);
      const double q = w[j] / d;
      num += q * c.u[(i0 + c.m + std::size_t(j) - 3) % c.m];
      den += q;
    }
    return num / den;
  }

  const DiffeoMetrics& metrics() const {
    GridCache& c = *cache_;
    std::call_once(c.metrics_once, [&] {
      DiffeoMetrics m;
      m.inf_derivative = c.inf_derivative;
      if (u_.degree() == 0) {
        m.sup_displacement = std::fabs(u_.mean());
        m.chordal_sup = 2.0 * std::fabs(std::sin(0.5 * u_.mean()));
      } else {
        m.sup_displacement =
            polished_sup(c, [&](double x) { return std::fabs(u_(x)); },
                         [&](double v) { return std::fabs(v); });
        m.chordal_sup = polished_sup(
            c, [&](double x) { return 2.0 * std::fabs(std::sin(0.5 * u_(x))); },
            [&](double v) { return 2.0 * std::fabs(std::sin(0.5 * v)); });
      }
      c.metrics = m;
    });
    return c.metrics;
  }

private:
  struct GridCache {
    std::size_t m = 0;
    std::vector<double> u;
    std::vector<double> du;
    double inf_derivative = 0.0;
    std::once_flag metrics_once;
    DiffeoMetrics metrics;
  };

  CircleDiffeo(TrigPoly u, const Config& cfg) {
    const double u0 = u(0.0);
    const double shift = u0 - wrap_signed(u0);
    if (shift != 0.0) u = u.with_mean(u.mean() - shift);
    u_ = std::move(u);
    du_ = u_.derivative();

    auto cache = std::make_shared<GridCache>();
    cache->m = std::max<std::size_t>(1024, detail::next_pow2(8 * (u_.degree() + 1)));
    cache->u = u_.sample_uniform(cache->m);
    cache->du = du_.sample_uniform(cache->m);

    // polished inf of phi~' for validation
    if (u_.degree() == 0) {
      cache->inf_derivative = 1.0;
    } else {
      std::size_t jmin = 0;
      for (std::size_t j = 1; j < cache->m; ++j)
        if (cache->du[j] < cache->du[jmin]) jmin = j;
      const double h = kTwoPi / double(cache->m);
      const auto e = detail::golden_max([&](double x) { return -du_(x); },
                                        h * (double(jmin) - 1.0),
                                        h * (double(jmin) + 1.0));
      cache->inf_derivative = 1.0 + std::min(-e.value, cache->du[jmin]);
    }
    cache_ = std::move(cache);

    if (cache_->inf_derivative <= cfg.min_derivative_tol)
      throw NotADiffeomorphism("min lift derivative " +
                               std::to_string(cache_->inf_derivative) +
                               " not positive");
  }

  // grid argmax over transformed samples, golden polish in the bracket cell
  template <class F, class G>
  double polished_sup(const GridCache& c, F&& f, G&& transform_sample) const {
    std::size_t jmax = 0;
    double best = transform_sample(c.u[0]);
    for (std::size_t j = 1; j < c.m; ++j) {
      const double v = transform_sample(c.u[j]);
      if (v > best) best = v, jmax = j;
    }
    const double h = kTwoPi / double(c.m);
    const auto e = detail::golden_max(f, h * (double(jmax) - 1.0), h * (double(jmax) + 1.0));
    return std::max(best, e.value);
  }

  TrigPoly u_;
  TrigPoly du_;
  std::shared_ptr<GridCache> cache_;
};

inline CircleDiffeo make_diffeo(std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs, double mean,
                                const Config& cfg = default_config()) {
  return CircleDiffeo::from_displacement(
      TrigPoly(mean, std::move(cos_coeffs), std::move(sin_coeffs)), cfg);
}

inline double evaluate(const CircleDiffeo& phi, double x) { return phi.lift(x); }

inline const DiffeoMetrics& metrics(const CircleDiffeo& phi) { return phi.metrics(); }

// Composition phi o psi through its lift (phi~ o psi~), refit spectrally.
inline CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi,
                            const Config& cfg = default_config()) {
  if (psi.is_identity()) return phi;
  if (phi.is_identity()) return psi;
  if (phi.mode_count() == 0 && psi.mode_count() == 0)
    return CircleDiffeo::rotation(phi.displacement().mean() + psi.displacement().mean());

  const TrigPoly& up = phi.displacement();
  auto sampler = [&](std::size_t m) {
    std::vector<double> w = psi.displacement().sample_uniform(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = kTwoPi * double(j) / double(m);
      w[j] += up(x + w[j]);
    }
    return w;
  };
  const std::size_t m0 = detail::next_pow2(
      std::max<std::size_t>(256, 2 * (phi.mode_count() + psi.mode_count() + 2)));
  return CircleDiffeo::from_displacement(
      detail::fit_adaptive_grid(sampler, m0, cfg, "compose"), cfg);
}

// Inverse through per-node root finding on the monotone lift plus a refit.
inline CircleDiffeo invert(const CircleDiffeo& phi,
                           const Config& cfg = default_config()) {
  if (phi.is_identity()) return phi;
  if (phi.mode_count() == 0)
    return CircleDiffeo::rotation(-phi.displacement().mean());

  const TrigPoly& u = phi.displacement();
  const double bracket = std::min(u.coefficient_one_norm(), 3.0 * kPi) + 0.5;

  auto solve = [&](double y, double guess) {
    double lo = y - bracket, hi = y + bracket;
    double x = std::clamp(guess, lo, hi);
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
      const auto [v, d] = u.value_and_derivative(x);
      const double f = x + v - y;
      if (!std::isfinite(f)) break;
      if (std::fabs(f) < cfg.newton_tol) return x;
      (f < 0.0 ? lo : hi) = x;
      x -= f / (1.0 + d);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f = mid + u(mid) - y;
      if (!std::isfinite(f))
        throw ConvergenceFailure("lift inversion hit a non-finite value");
      (f < 0.0 ? lo : hi) = mid;
    }
    x = 0.5 * (lo + hi);
    if (std::fabs(x + u(x) - y) > 1e-9)
      throw ConvergenceFailure("lift inversion did not converge");
    return x;
  };

  auto sampler = [&](std::size_t m) {
    std::vector<double> v(m);
    const double h = kTwoPi / double(m);
    double prev = -u(0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double y = h * double(j);
      const double x = solve(y, j == 0 ? y - u(y) : prev + h);
      v[j] = x - y;
      prev = x;
    }
    return v;
  };
  const std::size_t m0 =
      detail::next_pow2(std::max<std::size_t>(256, 2 * (phi.mode_count() + 1)));
  CircleDiffeo inv = CircleDiffeo::from_displacement(
      detail::fit_adaptive_grid(sampler, m0, cfg, "invert"), cfg);

  for (int j = 0; j < 32; ++j) {
    const double y = kTwoPi * double(j) / 32.0;
    if (std::fabs(phi.lift(inv.lift(y)) - y) > cfg.invert_check_tol)
      throw ConvergenceFailure("inverse round trip exceeded tolerance");
  }
  return inv;
}

// Lift-displacement neighborhood test: sup|u| < eps * inf phi~'.  The sup is
// the lift displacement, which only names a well-defined arc motion while it
// stays below pi; larger maps always fail.
inline bool in_neighborhood(const CircleDiffeo& phi, double eps) {
  const DiffeoMetrics& m = phi.metrics();
  return m.sup_displacement < kPi && m.sup_displacement < eps * m.inf_derivative;
}

struct SupportResult {
  enum class Kind { Empty, Arc, Full };
  Kind kind = Kind::Empty;
  IntervalS1 arc;  // meaningful only when kind == Arc
};

// Smallest arc outside which |u| <= tol and |u'| <= tol, located by a grid
// scan plus bisection refinement of the two transition points.
inline SupportResult support(const CircleDiffeo& phi, double tol) {
  SupportResult res;
  if (phi.is_identity()) return res;

  const std::size_t m = phi.grid_size();
  const std::vector<double>& us = phi.grid_displacement();
  const std::vector<double>& dus = phi.grid_derivative();
  auto quiet_at = [&](std::size_t j) {
    return std::fabs(us[j]) <= tol && std::fabs(dus[j]) <= tol;
  };
  auto quiet = [&](double x) {
    return std::fabs(phi.displacement()(x)) <= tol &&
           std::fabs(phi.displacement_derivative()(x)) <= tol;
  };

  std::size_t quiet_count = 0;
  for (std::size_t j = 0; j < m; ++j) quiet_count += quiet_at(j) ? 1 : 0;
  if (quiet_count == m) return res;  // Empty
  if (quiet_count == 0) {
    res.kind = SupportResult::Kind::Full;
    return res;
  }

  // largest circular run of quiet nodes; ties resolved toward the support arc
  // whose left endpoint (the run's end) has the smallest canonical angle
  std::size_t best_start = 0, best_len = 0, best_end = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!quiet_at(j) || quiet_at((j + m - 1) % m)) continue;  // run starts here
    std::size_t len = 0;
    while (len < m && quiet_at((j + len) % m)) ++len;
    const std::size_t end = (j + len - 1) % m;
    if (len > best_len || (len == best_len && end < best_end))
      best_len = len, best_start = j, best_end = end;
  }

  const double h = kTwoPi / double(m);
  const std::size_t gap_end = best_end;

  auto refine = [&](double quiet_x, double active_x) {
    double lo = quiet_x, hi = active_x;  // keeps lo on the quiet side
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (quiet(mid) ? lo : hi) = mid;
    }
    return lo;
  };

  const double left = refine(h * double(gap_end), h * double(gap_end) + h);
  const double right_quiet = h * double(best_start);
  const double right = [&] {
    double lo = right_quiet - h, hi = right_quiet;  // lo active side, hi quiet
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (quiet(mid) ? hi : lo) = mid;
    }
    return hi;
  }();

  double len = wrap_angle(right - left);
  if (len == 0.0) len = kTwoPi - 1e-12;
  res.kind = SupportResult::Kind::Arc;
  res.arc = IntervalS1::make(left, left + len);
  return res;
}

// sup distance between canonical lifts, modulo a common deck shift.
inline double sup_lift_distance(const CircleDiffeo& phi, const CircleDiffeo& psi,
                                std::size_t n = 2048) {
  double mean_diff = 0.0;
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = kTwoPi * double(j) / double(n);
    d[j] = phi.lift(x) - psi.lift(x);
    mean_diff += d[j];
  }
  const double k = std::round(mean_diff / double(n) / kTwoPi);
  double sup = 0.0;
  for (double v : d) sup = std::max(sup, std::fabs(v - kTwoPi * k));
  return sup;
}

}  // namespace locdiff
