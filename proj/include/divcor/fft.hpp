#pragma once

#include <complex>
#include <vector>

namespace divcor {

// In-place radix-2 FFT, size must be a power of two.
// Forward uses the e(-2*pi*i*jk/N) kernel; inverse uses e(+...) and does NOT
// divide by N (callers normalize).
void fft(std::vector<std::complex<double>>& a, bool inverse);

bool is_pow2(size_t n);
size_t next_pow2(size_t n);

}  // namespace divcor
