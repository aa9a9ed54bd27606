#include "divcor/singular.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "divcor/arith_fn.hpp"
#include "divcor/factor_sieve.hpp"
#include "divcor/util.hpp"

namespace divcor {

namespace {

uint32_t vp_of(uint64_t p, int64_t h) {
  uint64_t m = h >= 0 ? static_cast<uint64_t>(h) : static_cast<uint64_t>(-h);
  uint32_t v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

// sum_{a > v} d_k(p^a) x^a with the coefficients generated by the recurrence
// d_k(p^{a+1}) = d_k(p^a) (k+a)/(a+1); truncated once the geometric bound on
// the remainder (term ratio <= x (a+k)/(a+1)) drops below tol.
std::pair<double, double> dk_tail_sum(double k, double x, uint32_t v, double tol) {
  KahanSum s;
  double coeff = 1.0;  // d_k(p^a), advanced along with a
  for (uint32_t a = 0; a < v; ++a) coeff *= (k + a) / (a + 1.0);
  double xa = std::pow(x, static_cast<double>(v));
  for (uint32_t a = v; a < 4096; ++a) {
    coeff *= (k + a) / (a + 1.0);
    xa *= x;
    // now coeff = d_k(p^{a+1}), xa = x^{a+1}
    double term = coeff * xa;
    s.add(term);
    double r = x * std::max(1.0, (k + a + 1.0) / (a + 2.0));
    if (r < 1.0) {
      double tail = term * r / (1.0 - r);
      if (tail < tol) return {s.value(), tail};
    }
  }
  throw std::range_error("dk_tail_sum: series did not reach tolerance");
}

}  // namespace

LocalFactor local_factor_dd(double k, double l, uint64_t p, int64_t h, double tol) {
  if (h == 0) throw std::invalid_argument("local_factor_dd: h must be nonzero");
  if (tol <= 0) throw std::invalid_argument("local_factor_dd: tol must be > 0");
  // trial-division validation only below 10^6; the Euler-product path feeds
  // certified table primes far beyond that
  if (p <= 1000000 && !is_prime_u64(p))
    throw std::invalid_argument("local_factor_dd: p must be prime");

  const uint32_t v = vp_of(p, h);
  const double u = 1.0 / static_cast<double>(p);
  const double q1 = 1.0 - u;  // 1 - 1/p
  DkTable dkt(k), dlt(l);

  // finite part: a = b < v and a = b = v
  KahanSum T;
  double ua = 1.0;
  for (uint32_t a = 0; a < v && a <= 64; ++a) {
    T.add(dkt.at(static_cast<uint8_t>(a)) * dlt.at(static_cast<uint8_t>(a)) * q1 * ua);
    ua *= u;
  }
  if (v <= 64) {
    double rho_vv = q1 * std::pow(u, static_cast<double>(v)) *
                    (static_cast<double>(p) - 2.0) / (static_cast<double>(p) - 1.0);
    T.add(dkt.at(static_cast<uint8_t>(v)) * dlt.at(static_cast<uint8_t>(v)) * rho_vv);
  }

  // infinite parts: (a > v, b = v) and (a = v, b > v)
  double half_tol = tol / (4.0 * std::max(dkt.at(std::min<uint32_t>(v, 64)),
                                          dlt.at(std::min<uint32_t>(v, 64))));
  auto [sk, ek] = dk_tail_sum(k, u, v, half_tol);
  auto [sl, el] = dk_tail_sum(l, u, v, half_tol);
  T.add(q1 * dlt.at(static_cast<uint8_t>(std::min<uint32_t>(v, 64))) * sk);
  T.add(q1 * dkt.at(static_cast<uint8_t>(std::min<uint32_t>(v, 64))) * sl);

  LocalFactor lf;
  lf.p = p;
  lf.h = h;
  lf.k = k;
  lf.l = l;
  lf.value = std::pow(q1, k + l - 2.0) * T.value();
  lf.truncation_error = std::pow(q1, k + l - 2.0) * q1 *
                        (dlt.at(static_cast<uint8_t>(std::min<uint32_t>(v, 64))) * ek +
                         dkt.at(static_cast<uint8_t>(std::min<uint32_t>(v, 64))) * el);
  return lf;
}

LocalFactor local_factor_ld(double k, uint64_t p, int64_t h, double tol) {
  if (h == 0) throw std::invalid_argument("local_factor_ld: h must be nonzero");
  if (tol <= 0) throw std::invalid_argument("local_factor_ld: tol must be > 0");
  if (p <= 1000000 && !is_prime_u64(p))
    throw std::invalid_argument("local_factor_ld: p must be prime");

  const uint32_t v = vp_of(p, h);
  const double u = 1.0 / static_cast<double>(p);
  const double q1 = 1.0 - u;
  DkTable dkt(k);

  LocalFactor lf;
  lf.p = p;
  lf.h = h;
  lf.k = k;

  if (v >= 1) {
    // p | h and p not | n force v_p(n+h) = 0, so the expectation is 1
    lf.value = std::pow(q1, k - 1.0);
    lf.truncation_error = 0.0;
    return lf;
  }

  // v = 0: P(v_p(n+h) = 0 | p not | n) = (p-2)/(p-1);
  //        P(v_p(n+h) = c)             = (1/(p-1)) (1-1/p) p^{-(c-1)}, c >= 1.
  double E0 = (static_cast<double>(p) - 2.0) / (static_cast<double>(p) - 1.0);
  auto [sk, ek] = dk_tail_sum(k, u, 0, tol / 4.0);
  // sum_{c>=1} d_k(p^c) p^{-(c-1)} = p * sk
  double E = E0 + (1.0 / (static_cast<double>(p) - 1.0)) * q1 *
                      static_cast<double>(p) * sk;
  lf.value = std::pow(q1, k - 1.0) * E;
  lf.truncation_error = std::pow(q1, k - 1.0) *
                        (1.0 / (static_cast<double>(p) - 1.0)) * q1 *
                        static_cast<double>(p) * ek;
  return lf;
}

namespace {

// singular constants keep re-walking the same primes; share one table
std::shared_ptr<const PrimeTable> cached_primes(uint64_t limit) {
  static std::mutex mu;
  static std::shared_ptr<const PrimeTable> table;
  std::lock_guard<std::mutex> lock(mu);
  if (!table || table->limit < limit)
    table = std::make_shared<const PrimeTable>(primes_upto(limit));
  return table;
}

// sum_{p > P} 1/p^2 <= 2.52 / (P log P) via pi(x) < 1.26 x / log x and
// partial summation
double prime_square_tail(double P) { return 2.52 / (P * std::log(P)); }

SingularConstant constant_impl(double k, std::optional<double> l, int64_t h,
                               double tol) {
  if (h == 0) throw std::invalid_argument("singular constant: h must be nonzero");
  if (tol <= 0) throw std::invalid_argument("singular constant: tol must be > 0");

  // off-h local factors satisfy |S_p - 1| <= coef / p^2
  double coef = l ? (k - 1.0) * (*l - 1.0) : 2.0 * (k - 1.0);
  if (coef < 1.0) coef = 1.0;

  double budget = tol / 2.0;
  double P = 1000.0;
  while (1.5 * coef * prime_square_tail(P) > budget) {
    P *= 2.0;
    if (P > 2.2e8)
      throw std::invalid_argument("singular constant: tol too small to certify");
  }
  uint64_t ha = h >= 0 ? static_cast<uint64_t>(h) : static_cast<uint64_t>(-h);
  uint64_t p_max = std::max<uint64_t>(static_cast<uint64_t>(P), ha + 1);

  auto pt = cached_primes(p_max);
  size_t nprimes = pt->count_upto(p_max);
  double local_tol =
      std::max(tol / (2.0 * static_cast<double>(nprimes)), 1e-13);

  KahanSum logs;
  KahanSum trunc;
  for (size_t i = 0; i < nprimes; ++i) {
    uint64_t p = pt->primes[i];
    LocalFactor lf = l ? local_factor_dd(k, *l, p, h, local_tol)
                       : local_factor_ld(k, p, h, local_tol);
    if (lf.value <= 0)
      throw std::range_error("singular constant: nonpositive local factor");
    logs.add(std::log(lf.value));
    trunc.add(lf.truncation_error / lf.value);
  }
  double log_prod = logs.value();

  SingularConstant c;
  c.k = k;
  c.l = l;
  c.h = h;
  c.p_max = p_max;
  c.tail_bound =
      1.5 * coef * prime_square_tail(static_cast<double>(p_max)) + trunc.value();
  c.product = std::exp(log_prod);
  double gammas = l ? std::lgamma(k) + std::lgamma(*l) : std::lgamma(k);
  c.value = std::exp(log_prod - gammas);
  return c;
}

}  // namespace

SingularConstant constant_dd(double k, double l, int64_t h, double tol) {
  return constant_impl(k, l, h, tol);
}

SingularConstant constant_ld(double k, int64_t h, double tol) {
  return constant_impl(k, std::nullopt, h, tol);
}

double local_oracle(OracleMode mode, double k, double l, uint64_t p, int64_t h,
                    uint32_t E) {
  if (!is_prime_u64(p)) throw std::invalid_argument("local_oracle: p must be prime");
  double pe_d = std::pow(static_cast<double>(p), static_cast<double>(E));
  if (pe_d > 1099511627776.0)  // 2^40
    throw std::range_error("local_oracle: p^E exceeds 2^40");
  uint64_t pe = 1;
  for (uint32_t i = 0; i < E; ++i) pe *= p;

  DkTable dkt(k);
  DkTable dlt(mode == OracleMode::dd ? l : k);

  auto vp_capped = [&](uint64_t m) -> uint32_t {
    if (m == 0) return E - 1;
    uint32_t v = 0;
    while (m % p == 0 && v < E - 1) {
      m /= p;
      ++v;
    }
    return v;
  };

  const double u = 1.0 - 1.0 / static_cast<double>(p);
  int64_t pe_s = static_cast<int64_t>(pe);

  double total = chunked_block_sum(pe, [&](size_t lo, size_t hi) {
    KahanSum s;
    for (size_t i = lo; i < hi; ++i) {
      uint64_t n = i + 1;
      int64_t mh = (static_cast<int64_t>(n) + h) % pe_s;
      if (mh < 0) mh += pe_s;
      uint32_t vb = vp_capped(static_cast<uint64_t>(mh));
      if (mode == OracleMode::dd) {
        uint32_t va = vp_capped(n);
        s.add(dkt.at(static_cast<uint8_t>(va)) * dlt.at(static_cast<uint8_t>(vb)));
      } else {
        if (n % p == 0) continue;
        s.add(dkt.at(static_cast<uint8_t>(vb)));
      }
    }
    return s.value();
  });

  if (mode == OracleMode::dd)
    return std::pow(u, k + l - 2.0) * total / static_cast<double>(pe);
  return std::pow(u, k - 1.0) * (static_cast<double>(p) / (static_cast<double>(p) - 1.0)) *
         total / static_cast<double>(pe);
}

double zeta_reference(double s) {
  if (s <= 1.0) throw std::invalid_argument("zeta_reference: need s > 1");
  const uint64_t N = 100000;
  KahanSum sum;
  for (uint64_t n = 1; n <= N; ++n)
    sum.add(std::pow(static_cast<double>(n), -s));
  double Nd = static_cast<double>(N);
  // Euler-Maclaurin for sum_{n > N}: int_N^inf x^-s dx - N^-s/2 + s N^{-s-1}/12
  double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(Nd, -s) +
                s / 12.0 * std::pow(Nd, -s - 1.0);
  return sum.value() + tail;
}

}  // namespace divcor
