#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/errors.hpp"

namespace locdiff {

// Open proper arc of the circle.  Canonical form keeps a in [0, 2pi) and
// a < b < a + 2pi, so b may exceed 2pi for arcs through angle zero.
struct IntervalS1 {
  double a = 0.0;
  double b = 0.0;

  static IntervalS1 make(double lo, double hi) {
    const double len = hi - lo;
    if (!(len > 0.0) || !(len < kTwoPi))
      throw ValidationError("interval needs 0 < b - a < 2*pi, got length " +
                            std::to_string(len));
    IntervalS1 iv;
    iv.a = wrap_angle(lo);
    iv.b = iv.a + len;
    return iv;
  }

  double length() const { return b - a; }
  double center() const { return a + 0.5 * length(); }

  bool contains(double theta) const {
    const double w = wrap_angle(theta - a);
    return w > 0.0 && w < length();
  }

  bool closure_contains(double theta, double tol = 0.0) const {
    const double w = wrap_angle(theta - a);
    return w <= length() + tol || w >= kTwoPi - tol;
  }

  // inner (as an arc, up to tol at both ends) sits inside this arc
  bool contains_arc(const IntervalS1& inner, double tol = 0.0) const {
    double off = wrap_angle(inner.a - a);
    if (off > length() && kTwoPi - off <= tol) off -= kTwoPi;
    return off >= -tol && off + inner.length() <= length() + tol;
  }
};

// A validated list of arcs.  Two validation modes exist because the slicing
// construction produces arcs that only need to cover a given arc, while
// partitions of unity need the whole circle covered.
class Covering {
public:
  static Covering of_circle(std::vector<IntervalS1> intervals,
                            std::size_t grid = 4096) {
    Covering c(std::move(intervals));
    for (std::size_t j = 0; j < grid; ++j) {
      const double x = kTwoPi * double(j) / double(grid);
      if (!c.any_contains(x))
        throw CoverageGap("covering misses the circle near angle " +
                          std::to_string(x));
    }
    return c;
  }

  static Covering of_arc(std::vector<IntervalS1> intervals,
                         const IntervalS1& target, std::size_t grid = 4096) {
    Covering c(std::move(intervals));
    for (std::size_t j = 1; j < grid; ++j) {
      const double x = target.a + target.length() * double(j) / double(grid);
      if (!c.any_contains(x))
        throw CoverageGap("arcs miss the target arc near angle " +
                          std::to_string(wrap_angle(x)));
    }
    return c;
  }

  std::size_t size() const { return intervals_.size(); }
  const std::vector<IntervalS1>& intervals() const { return intervals_; }
  const IntervalS1& operator[](std::size_t i) const { return intervals_[i]; }

  bool any_contains(double theta) const {
    for (const auto& iv : intervals_)
      if (iv.contains(theta)) return true;
    return false;
  }

private:
  explicit Covering(std::vector<IntervalS1> ivs) : intervals_(std::move(ivs)) {
    if (intervals_.empty()) throw ValidationError("covering needs at least one arc");
  }

  std::vector<IntervalS1> intervals_;
};

}  // namespace locdiff
