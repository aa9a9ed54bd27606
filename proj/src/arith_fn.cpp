#include "divcor/arith_fn.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "divcor/util.hpp"

namespace divcor {

double ArithSeq::l1_norm() const {
  return chunked_block_sum(values.size(), [&](size_t lo, size_t hi) {
    KahanSum s;
    for (size_t i = lo; i < hi; ++i) s.add(std::abs(values[i]));
    return s.value();
  });
}

double ArithSeq::l1_signed_sum() const {
  return chunked_block_sum(values.size(), [&](size_t lo, size_t hi) {
    KahanSum s;
    for (size_t i = lo; i < hi; ++i) s.add(values[i]);
    return s.value();
  });
}

double ArithSeq::l2_norm_sq() const {
  return chunked_block_sum(values.size(), [&](size_t lo, size_t hi) {
    KahanSum s;
    for (size_t i = lo; i < hi; ++i) s.add(values[i] * values[i]);
    return s.value();
  });
}

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(1.0 < lo && lo <= hi))
    throw std::invalid_argument("Interval: need 1 < lo <= hi");
}

DkTable::DkTable(double k) : k_(k) {
  if (k < 0) throw std::invalid_argument("dk: k must be >= 0");
  tab_[0] = 1.0;
  for (int nu = 0; nu < 64; ++nu)
    tab_[nu + 1] = tab_[nu] * (k + nu) / (nu + 1);
}

double dk(double k, const FactorView& f) {
  DkTable t(k);
  return t(f);
}

uint32_t omega_interval(const FactorView& f, const Interval& I, bool with_multiplicity) {
  uint32_t c = 0;
  for (uint32_t i = 0; i < f.count; ++i)
    if (I.contains(f.primes[i])) c += with_multiplicity ? f.exps[i] : 1;
  return c;
}

int mu_sq_interval(const FactorView& f, const Interval& I) {
  for (uint32_t i = 0; i < f.count; ++i)
    if (I.contains(f.primes[i]) && f.exps[i] > 1) return 0;
  return 1;
}

uint32_t big_omega(const FactorView& f) {
  uint32_t c = 0;
  for (uint32_t i = 0; i < f.count; ++i) c += f.exps[i];
  return c;
}

uint32_t small_omega(const FactorView& f) { return f.count; }

double von_mangoldt_tilde(const FactorView& f, uint64_t n) {
  if (f.count == 1 && f.exps[0] == 1) return std::log(static_cast<double>(n));
  return 0.0;
}

double prime_power_correction(const FactorView& f, uint64_t n) {
  (void)n;
  if (f.count == 1 && f.exps[0] >= 2)
    return std::log(static_cast<double>(f.primes[0]));
  return 0.0;
}

int64_t ramanujan_sum(uint64_t q, int64_t h) {
  if (q == 0) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  uint64_t ha = h >= 0 ? static_cast<uint64_t>(h) : static_cast<uint64_t>(-h);
  uint64_t g = ha == 0 ? q : std::gcd(q, ha);

  auto qfac = factorize_u64(q);
  // exponent of each q-prime inside g
  std::vector<uint8_t> gexp(qfac.size(), 0);
  {
    uint64_t r = g;
    for (size_t i = 0; i < qfac.size(); ++i) {
      while (r % qfac[i].first == 0) {
        r /= qfac[i].first;
        ++gexp[i];
      }
    }
  }

  // iterate over divisors d | g as exponent vectors over q's primes
  std::vector<uint8_t> e(qfac.size(), 0);
  int64_t total = 0;
  while (true) {
    uint64_t d = 1;
    for (size_t i = 0; i < qfac.size(); ++i)
      for (uint8_t j = 0; j < e[i]; ++j) d *= qfac[i].first;
    // mu(q/d) from exponent differences
    int64_t mu = 1;
    for (size_t i = 0; i < qfac.size(); ++i) {
      uint8_t diff = static_cast<uint8_t>(qfac[i].second - e[i]);
      if (diff >= 2) {
        mu = 0;
        break;
      }
      if (diff == 1) mu = -mu;
    }
    total += mu * static_cast<int64_t>(d);
    // next exponent vector
    size_t i = 0;
    for (; i < qfac.size(); ++i) {
      if (e[i] < gexp[i]) {
        ++e[i];
        break;
      }
      e[i] = 0;
    }
    if (i == qfac.size()) break;
  }
  return total;
}

BasicMultiplicative basic_multiplicative(uint64_t q) {
  if (q == 0) throw std::invalid_argument("basic_multiplicative: q must be >= 1");
  auto fac = factorize_u64(q);
  BasicMultiplicative r{1, 1, 1};
  for (auto [p, e] : fac) {
    r.mobius = (e >= 2) ? 0 : -r.mobius;
    uint64_t pe1 = 1;
    for (uint8_t j = 0; j + 1 < e; ++j) pe1 *= p;
    r.phi *= pe1 * (p - 1);
    r.tau *= (e + 1);
  }
  return r;
}

}  // namespace divcor
