#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "locdiff/angle.hpp"

namespace locdiff::detail {

struct Extremum {
  double location = 0.0;
  double value = 0.0;
};

// Golden-section maximization on [lo, hi].  The bracket always comes from a
// grid cell around the coarse argmax, so unimodality holds in practice; the
// polish only needs to beat the grid value, never to certify a global max.
template <class F>
Extremum golden_max(F&& f, double lo, double hi) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

// sup of f over the circle: coarse scan on m points, then golden polish in the
// bracketing cells of the few best candidates.
template <class F>
Extremum periodic_sup(F&& f, std::size_t m) {
  const double h = kTwoPi / double(m);
  Extremum best{0.0, f(0.0)};
  std::size_t best_j = 0;
  for (std::size_t j = 1; j < m; ++j) {
    const double v = f(h * double(j));
    if (v > best.value) {
      best.value = v;
      best.location = h * double(j);
      best_j = j;
    }
  }
  const double lo = h * (double(best_j) - 1.0);
  const double hi = h * (double(best_j) + 1.0);
  Extremum polished = golden_max(f, lo, hi);
  if (polished.value < best.value) polished = best;
  polished.location = wrap_angle(polished.location);
  return polished;
}

template <class F>
Extremum periodic_inf(F&& f, std::size_t m) {
  Extremum e = periodic_sup([&](double x) { return -f(x); }, m);
  e.value = -e.value;
  return e;
}

}  // namespace locdiff::detail
