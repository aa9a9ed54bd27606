#pragma once

#include <cstdint>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>
#include <algorithm>

namespace divcor {

using cplx = std::complex<double>;

// Neumaier-compensated accumulator.  Deterministic for a fixed order of adds.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanCSum {
  KahanSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Fractional part of n*alpha, computed so that the low bits survive even when
// the product n*alpha is large.  fma recovers the rounding error of the
// product exactly, so s + e == n*alpha in exact arithmetic.
inline double frac_mul(uint64_t n, double alpha) {
  double x = static_cast<double>(n);  // exact for n < 2^53
  double s = x * alpha;
  double e = std::fma(x, alpha, -s);
  double f = (s - std::floor(s)) + e;
  f -= std::floor(f);
  return f;
}

inline double frac_reduce(double x) {
  double f = x - std::floor(x);
  f -= std::floor(f);
  return f;
}

// e(x) = exp(2*pi*i*x)
inline cplx e2pi(double frac) {
  double a = 2.0 * M_PI * frac;
  return {std::cos(a), std::sin(a)};
}

// Distance to the nearest integer (the torus norm).
inline double torus_dist(double x) {
  double f = x - std::round(x);
  return std::abs(f);
}

// Circle distance between two points of [0,1).
inline double circle_dist(double a, double b) { return torus_dist(a - b); }

// Deterministic chunked reduction: per-chunk compensated sums are combined in
// chunk order, so the result does not depend on how chunks are scheduled
// across threads.
double chunked_sum(size_t n, const std::function<double(size_t)>& term,
                   size_t chunk = size_t(1) << 14);

// Chunked sum where whole chunks are evaluated by the callee (lets hot loops
// stay tight); fn(lo, hi) returns the compensated sum over [lo, hi).
double chunked_block_sum(size_t n,
                         const std::function<double(size_t, size_t)>& block,
                         size_t chunk = size_t(1) << 14);

cplx chunked_block_csum(size_t n,
                        const std::function<cplx(size_t, size_t)>& block,
                        size_t chunk = size_t(1) << 14);

void set_thread_count(int n);
int thread_count();

// Trial-division factorization; intended for q up to ~10^12.
std::vector<std::pair<uint64_t, uint8_t>> factorize_u64(uint64_t n);

bool is_prime_u64(uint64_t n);

// All divisors of n from its factorization, unsorted.
std::vector<uint64_t> divisors_from_factorization(
    const std::vector<std::pair<uint64_t, uint8_t>>& fac);

uint64_t isqrt_u64(uint64_t n);

// Pearson correlation coefficient of two equal-length samples.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Nearest-rank percentile of an unsorted sample (p in [0, 100]).
double percentile_nearest_rank(std::vector<double> sample, double p);

// FNV-1a over bytes; used for content hashes of reports.
uint64_t fnv1a(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace divcor
