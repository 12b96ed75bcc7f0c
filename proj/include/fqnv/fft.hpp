// fft.hpp -- minimal iterative radix-2 FFT, enough for diagnostic spectra.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fqnv/units.hpp"

namespace fqnv {

// In-place forward DFT, X_k = sum_n x_n exp(-2 pi i k n / M); M a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& x) {
  const std::size_t m = x.size();
  if (m == 0 || (m & (m - 1)) != 0)
    throw std::invalid_argument("fft length must be a power of two");

  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = -two_pi / static_cast<double>(len);
    const std::complex<double> wl{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < m; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = x[i + k];
        const auto v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace fqnv
