#pragma once

#include <cstdint>
#include <vector>

#include "divcor/factor_sieve.hpp"

namespace divcor {

// Dense real sequence over (x_lo, x_lo + values.size()], extended by zero to
// the rest of the integers.
struct ArithSeq {
  uint64_t x_lo = 0;
  std::vector<double> values;

  uint64_t length() const { return values.size(); }
  uint64_t x_hi() const { return x_lo + values.size(); }

  double at(int64_t n) const {
    if (n <= static_cast<int64_t>(x_lo)) return 0.0;
    uint64_t i = static_cast<uint64_t>(n) - x_lo - 1;
    return i < values.size() ? values[i] : 0.0;
  }

  double l1_norm() const;
  double l2_norm_sq() const;
  double sum() const { return l1_signed_sum(); }
  double l1_signed_sum() const;
};

// Closed interval of prime values, 1 < lo <= hi.
struct Interval {
  double lo;
  double hi;
  Interval(double lo_, double hi_);
  bool contains(uint64_t p) const {
    double x = static_cast<double>(p);
    return x >= lo && x <= hi;
  }
};

// d_k(p^nu) for nu = 0..64, by the recurrence
// d_k(p^{nu+1}) = d_k(p^nu) * (k+nu) / (nu+1); exact for integer k while the
// intermediate products stay below 2^53.
class DkTable {
 public:
  explicit DkTable(double k);
  double k() const { return k_; }
  double at(uint8_t nu) const { return tab_[nu]; }
  double operator()(const FactorView& f) const {
    double v = 1.0;
    for (uint32_t i = 0; i < f.count; ++i) v *= tab_[f.exps[i]];
    return v;
  }

 private:
  double k_;
  double tab_[65];
};

// Generalized divisor function d_k(n) from a factorization, k >= 0 real.
double dk(double k, const FactorView& f);

// Number of prime factors of n in I, with or without multiplicity.
uint32_t omega_interval(const FactorView& f, const Interval& I, bool with_multiplicity);

// 1 iff every prime of n inside I divides n to the first power only.
int mu_sq_interval(const FactorView& f, const Interval& I);

uint32_t big_omega(const FactorView& f);
uint32_t small_omega(const FactorView& f);

// log n on primes, 0 elsewhere (the von Mangoldt function restricted to primes).
double von_mangoldt_tilde(const FactorView& f, uint64_t n);

// Correction term Lambda - tilde_Lambda: log p on proper prime powers p^e, e >= 2.
double prime_power_correction(const FactorView& f, uint64_t n);

// Ramanujan sum c_q(h) by the divisor identity sum_{d | (q,|h|)} d*mu(q/d);
// exact integer arithmetic, (q, 0) = q.
int64_t ramanujan_sum(uint64_t q, int64_t h);

struct BasicMultiplicative {
  int64_t mobius;
  uint64_t phi;
  uint64_t tau;
};

// mu(q), phi(q), d(q) by trial division; q <= 10^12 intended.
BasicMultiplicative basic_multiplicative(uint64_t q);

}  // namespace divcor
