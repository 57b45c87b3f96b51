#pragma once

#include <cmath>

namespace locdiff {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce to [0, 2*pi).
inline double wrap_angle(double x) {
  double r = x - kTwoPi * std::floor(x / kTwoPi);
  if (r >= kTwoPi) r -= kTwoPi;
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Reduce to (-pi, pi].
inline double wrap_signed(double x) {
  double r = x - kTwoPi * std::ceil((x - kPi) / kTwoPi);
  if (r > kPi) r -= kTwoPi;
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace locdiff
