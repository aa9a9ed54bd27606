#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace divcor {

struct PrimeTable {
  uint64_t limit = 0;
  std::vector<uint64_t> primes;  // all primes <= limit, increasing

  // pi(x) for x <= limit
  uint64_t count_upto(uint64_t x) const;
};

PrimeTable primes_upto(uint64_t limit);

// View into one integer's factorization: primes strictly increasing,
// exponents >= 1.
struct FactorView {
  const uint64_t* primes = nullptr;
  const uint8_t* exps = nullptr;
  uint32_t count = 0;

  const uint64_t* begin_p() const { return primes; }
  uint32_t size() const { return count; }
};

// Complete factorizations of every n in (x_lo, x_hi], stored as a flat arena:
// one end-offset per n plus shared prime/exponent arrays.
struct FactorWindow {
  uint64_t x_lo = 0;  // exclusive
  uint64_t x_hi = 0;  // inclusive
  std::vector<uint64_t> offsets;  // end offset per n, size = length()
  std::vector<uint64_t> fprimes;
  std::vector<uint8_t> fexps;

  uint64_t length() const { return x_hi - x_lo; }
  bool contains(uint64_t n) const { return n > x_lo && n <= x_hi; }

  FactorView factors(uint64_t n) const;
  FactorView factors_by_index(uint64_t i) const;

  bool operator==(const FactorWindow& o) const = default;
};

// Factors every n in (lo, hi] by a segmented sieve over primes <= sqrt(hi);
// the cofactor left after division is 1 or a single prime.
FactorWindow build_range(uint64_t lo, uint64_t hi, uint32_t segment_len = 1u << 20);

// The (x, 2x] window used throughout.  Requires x >= 16, segment_len >= 1024.
FactorWindow build_window(uint64_t x, uint32_t segment_len = 1u << 20);

// Binary cache, little-endian: "DKW1", u32 version=1, u64 x, u64 length,
// u64 end-offset per n, then (u64 prime, u8 exponent) pairs.
void write_window(const FactorWindow& w, const std::string& path);
FactorWindow read_window(const std::string& path);

// Write then read; postcondition: result == w.
FactorWindow window_cache_roundtrip(const FactorWindow& w, const std::string& path);

}  // namespace divcor
