#include "divcor/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace divcor {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  if (n <= 1) return;

  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    const size_t half = len >> 1;
#pragma omp parallel for schedule(static) if (n >= (size_t(1) << 16))
    for (long long ii = 0; ii < static_cast<long long>(n / len); ++ii) {
      size_t i = static_cast<size_t>(ii) * len;
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < half; ++k) {
        // recompute w from scratch periodically to limit drift
        if ((k & 1023) == 0 && k != 0) {
          double a2 = ang * static_cast<double>(k);
          w = {std::cos(a2), std::sin(a2)};
        }
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace divcor
