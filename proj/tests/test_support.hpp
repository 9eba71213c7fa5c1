#pragma once

// Test-only helpers: a plain radix-2 FFT and spectral measurements used as
// independent oracles for the synthesis code, plus small mask utilities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "curbalert/mask.hpp"

namespace testsupport {

inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

/// Magnitude spectrum of `x` zero-padded to `n` (power of two), Hann window.
inline std::vector<double> magnitude_spectrum(const std::vector<double>& x, std::size_t n) {
  std::vector<std::complex<double>> a(n);
  const std::size_t m = std::min(n, x.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double w = m > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (m - 1)) : 1.0;
    a[i] = x[i] * w;
  }
  fft_inplace(a);
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(a[k]);
  return mag;
}

/// Peak frequency with parabolic interpolation on the log magnitude.
inline double peak_frequency(const std::vector<double>& x, int sample_rate, std::size_t n = 16384) {
  const auto mag = magnitude_spectrum(x, n);
  std::size_t k = 1;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i)
    if (mag[i] > mag[k]) k = i;
  double offset = 0.0;
  if (k > 0 && k + 1 < mag.size() && mag[k] > 0) {
    const double a = std::log(mag[k - 1] + 1e-300), b = std::log(mag[k]), c = std::log(mag[k + 1] + 1e-300);
    const double denom = a - 2 * b + c;
    if (denom != 0.0) offset = 0.5 * (a - c) / denom;
  }
  return (static_cast<double>(k) + offset) * sample_rate / static_cast<double>(n);
}

inline double spectral_centroid(const std::vector<double>& x, int sample_rate, std::size_t n = 8192) {
  const auto mag = magnitude_spectrum(x, n);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    num += f * mag[k];
    den += mag[k];
  }
  return den > 0 ? num / den : 0.0;
}

inline double rms(const std::vector<double>& x, std::size_t begin, std::size_t end, std::size_t stride = 1,
                  std::size_t offset = 0) {
  double s = 0.0;
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double v = x[i * stride + offset];
    s += v * v;
    ++count;
  }
  return count ? std::sqrt(s / count) : 0.0;
}

inline std::vector<double> channel(const std::vector<double>& interleaved, int channels, int which) {
  std::vector<double> out;
  for (std::size_t i = which; i < interleaved.size(); i += channels) out.push_back(interleaved[i]);
  return out;
}

inline curbalert::CurbMask random_mask(std::mt19937& rng, int w, int h, double density, int max_label = 1) {
  curbalert::CurbMask m(w, h);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> label(1, max_label);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (u(rng) < density) m.set(c, r, static_cast<std::uint8_t>(label(rng)));
  return m;
}

}  // namespace testsupport
