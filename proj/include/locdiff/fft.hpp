#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace locdiff::detail {

// In-place radix-2 FFT.  Sizes are always powers of two here and stay small
// (<= 32768), so a self-contained kernel beats dragging in a library.  The
// twiddle table is resynchronized by a direct polar() every 32 entries to keep
// phase drift near machine epsilon on the longest transforms.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  assert(n > 0 && (n & (n - 1)) == 0);
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double ang = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / double(n);
  std::vector<std::complex<double>> tw(n / 2);
  const std::complex<double> step = std::polar(1.0, ang);
  for (std::size_t j = 0; j < n / 2; ++j) {
    if (j % 32 == 0)
      tw[j] = std::polar(1.0, ang * double(j));
    else
      tw[j] = tw[j - 1] * step;
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> w = tw[j * stride];
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / double(n);
    for (auto& x : a) x *= inv;
  }
}

// Full real spectrum of M uniform samples: mean, then cos/sin pairs for
// k = 1..M/2 (the Nyquist bin lands in cos[M/2-1] with sin 0).
struct RealSpectrum {
  double mean = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

inline RealSpectrum analyze_real(const std::vector<double>& samples) {
  const std::size_t m = samples.size();
  assert(m >= 2 && (m & (m - 1)) == 0);
  std::vector<std::complex<double>> a(m);
  for (std::size_t j = 0; j < m; ++j) a[j] = samples[j];
  fft_inplace(a, false);

  RealSpectrum s;
  s.mean = a[0].real() / double(m);
  s.cos_coeffs.resize(m / 2);
  s.sin_coeffs.resize(m / 2);
  const double scale = 2.0 / double(m);
  for (std::size_t k = 1; k < m / 2; ++k) {
    s.cos_coeffs[k - 1] = scale * a[k].real();
    s.sin_coeffs[k - 1] = -scale * a[k].imag();
  }
  s.cos_coeffs[m / 2 - 1] = a[m / 2].real() / double(m);
  s.sin_coeffs[m / 2 - 1] = 0.0;
  return s;
}

// Evaluate mean + sum(cos_k cos(kx) + sin_k sin(kx)) on the uniform M grid.
// Requires M >= 2*(N+1) so no coefficient folds onto another bin.
inline std::vector<double> synthesize_real(double mean,
                                           const std::vector<double>& cos_coeffs,
                                           const std::vector<double>& sin_coeffs,
                                           std::size_t m) {
  assert(cos_coeffs.size() == sin_coeffs.size());
  const std::size_t n_modes = cos_coeffs.size();
  assert(m >= 2 * (n_modes + 1) && (m & (m - 1)) == 0);
  std::vector<std::complex<double>> a(m, 0.0);
  a[0] = mean * double(m);
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const std::complex<double> x(0.5 * double(m) * cos_coeffs[k - 1],
                                 -0.5 * double(m) * sin_coeffs[k - 1]);
    a[k] = x;
    a[m - k] = std::conj(x);
  }
  fft_inplace(a, true);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = a[j].real();
  return out;
}

}  // namespace locdiff::detail
