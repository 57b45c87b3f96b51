#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "locdiff/angle.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/fft.hpp"
#include "locdiff/trig_poly.hpp"

namespace locdiff::detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Samples of a periodic function on the uniform grid x_j = 2 pi j / m.
using GridSampler = std::function<std::vector<double>(std::size_t)>;

// Adaptive spectral fit: sample, analyze, and accept once the upper half of
// the resolved spectrum sits below fit_tail_tol; otherwise double the grid.
// Retained modes always lie in the lower quarter, so every kept coefficient
// was computed alias-free.  Throws ModeOverflow when acceptance would need
// more than mode_cap modes.
inline TrigPoly fit_adaptive_grid(const GridSampler& sampler, std::size_t m0,
                                  const Config& cfg, const std::string& what) {
  const std::size_t m_cap = 4 * std::size_t(cfg.mode_cap);
  std::size_t m = std::clamp(next_pow2(std::max<std::size_t>(m0, 64)),
                             std::size_t(64), m_cap);
  for (;;) {
    const std::vector<double> samples = sampler(m);
    const RealSpectrum s = analyze_real(samples);
    double tail = 0.0;
    for (std::size_t k = m / 4 + 1; k <= m / 2; ++k)
      tail = std::max(tail, std::hypot(s.cos_coeffs[k - 1], s.sin_coeffs[k - 1]));
    if (tail <= cfg.fit_tail_tol) {
      std::size_t n = 0;
      for (std::size_t k = 1; k <= m / 4; ++k)
        if (std::hypot(s.cos_coeffs[k - 1], s.sin_coeffs[k - 1]) > cfg.chop_tol)
          n = k;
      std::vector<double> c(s.cos_coeffs.begin(), s.cos_coeffs.begin() + n);
      std::vector<double> si(s.sin_coeffs.begin(), s.sin_coeffs.begin() + n);
      return TrigPoly(s.mean, std::move(c), std::move(si));
    }
    if (m >= m_cap)
      throw ModeOverflow(what + ": spectral tail " + std::to_string(tail) +
                         " above tolerance at the mode cap");
    m <<= 1;
  }
}

inline TrigPoly fit_adaptive(const std::function<double(double)>& f,
                             std::size_t m0, const Config& cfg,
                             const std::string& what) {
  return fit_adaptive_grid(
      [&](std::size_t m) {
        std::vector<double> out(m);
        for (std::size_t j = 0; j < m; ++j) out[j] = f(kTwoPi * double(j) / double(m));
        return out;
      },
      m0, cfg, what);
}

}  // namespace locdiff::detail
