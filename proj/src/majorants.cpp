#include "divcor/majorants.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "divcor/util.hpp"

namespace divcor {

double default_psi_bump(double t) {
  double u = 2.0 * t;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

MajorantParams majorant_params(double k, uint64_t X, double eps_prime) {
  if (k < 1) throw std::invalid_argument("majorant_params: k must be >= 1");
  if (X < 64) throw std::invalid_argument("majorant_params: X too small");
  MajorantParams mp;
  mp.k = k;
  mp.X = X;
  mp.eps_prime = eps_prime;
  double logX = std::log(static_cast<double>(X));
  double llX = std::log(logX);
  mp.omega_cap = (1.0 + eps_prime) * k * llX;
  double m_formula = std::pow(static_cast<double>(X), 2.0 * k / llX);
  double m_cap = std::pow(static_cast<double>(X), 1.0 / 3.0);
  if (m_formula > m_cap) {
    mp.M = m_cap;
    mp.m_clamped = true;
  } else {
    mp.M = m_formula;
  }
  if (mp.M < 2.0) mp.M = 2.0;
  return mp;
}

namespace {

// Depth-first walk over divisors m of n with m <= M and Omega(m) <= cap,
// accumulating d_{k-1}(m).
double tilde_sum(const FactorView& f, const DkTable& dkm1, double M,
                 uint32_t omega_cap, uint32_t i, double m, uint32_t om,
                 double coeff) {
  if (i == f.count) return coeff;
  double total = tilde_sum(f, dkm1, M, omega_cap, i + 1, m, om, coeff);
  double pm = m;
  double p = static_cast<double>(f.primes[i]);
  for (uint8_t e = 1; e <= f.exps[i]; ++e) {
    pm *= p;
    if (pm > M || om + e > omega_cap) break;
    total += tilde_sum(f, dkm1, M, omega_cap, i + 1, pm, om + e,
                       coeff * dkm1.at(e));
  }
  return total;
}

}  // namespace

double tilde_dk(const MajorantParams& mp, const DkTable& dkm1,
                const FactorView& f, uint64_t n) {
  if (n <= mp.X || n > 2 * mp.X) return 0.0;  // support restriction
  uint32_t cap = static_cast<uint32_t>(std::floor(mp.omega_cap));
  return tilde_sum(f, dkm1, mp.M, cap, 0, 1.0, 0, 1.0);
}

double tilde_dk(const MajorantParams& mp, const FactorView& f, uint64_t n) {
  DkTable dkm1(mp.k - 1.0);
  return tilde_dk(mp, dkm1, f, n);
}

namespace {

// Signed sum over squarefree divisors d <= M of mu(d) psi(log d / log M).
double nu_sum(const FactorView& f, const std::function<double(double)>& psi,
              double M, double logM, uint32_t i, double d, int mu) {
  if (i == f.count)
    return mu * psi(std::log(d) / logM);
  double total = nu_sum(f, psi, M, logM, i + 1, d, mu);
  double nd = d * static_cast<double>(f.primes[i]);
  if (nd <= M) total += nu_sum(f, psi, M, logM, i + 1, nd, -mu);
  return total;
}

}  // namespace

double gy_nu(const MajorantParams& mp, const FactorView& f, uint64_t n) {
  if (n <= mp.X || n > 2 * mp.X) return 0.0;
  double logM = std::log(mp.M);
  double s = nu_sum(f, mp.psi_bump, mp.M, logM, 0, 1.0, 1);
  return logM * s * s;
}

MajorizeReport majorize_check(const FactorWindow& window, double k,
                              const AnatomyParams& ap, const MajorantParams& mp) {
  if (ap.X != mp.X)
    throw std::invalid_argument("majorize_check: inconsistent X across params");
  const uint64_t len = window.length();
  DkTable dkt(k), dkm1(k - 1.0);

  struct Best {
    double ratio = 0;
    uint64_t n = 0;
    uint64_t s_size = 0;
    bool violated = false;
    uint64_t violator = 0;
  };
  const size_t chunk = size_t(1) << 16;
  const size_t nchunks = (len + chunk - 1) / chunk;
  std::vector<Best> partial(nchunks);

#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    size_t lo = static_cast<size_t>(c) * chunk;
    size_t hi = std::min(lo + chunk, static_cast<size_t>(len));
    Best b;
    for (size_t i = lo; i < hi; ++i) {
      uint64_t n = window.x_lo + 1 + i;
      FactorView f = window.factors_by_index(i);
      double dk_n = dkt(f);
      double td = tilde_dk(mp, dkm1, f, n);
      if (td > dk_n * (1.0 + 1e-9)) {
        b.violated = true;
        b.violator = n;
        break;
      }
      if (in_S(ap, f)) {
        b.s_size++;
        double ratio = td > 0 ? dk_n / td
                              : std::numeric_limits<double>::infinity();
        if (ratio > b.ratio) {
          b.ratio = ratio;
          b.n = n;
        }
      }
    }
    partial[static_cast<size_t>(c)] = b;
  }

  MajorizeReport rep;
  for (const Best& b : partial) {
    if (b.violated)
      throw std::runtime_error("majorize_check: tilde d_k(n) > d_k(n) at n = " +
                               std::to_string(b.violator));
    rep.s_size += b.s_size;
    if (b.ratio > rep.max_ratio) {
      rep.max_ratio = b.ratio;
      rep.argmax_n = b.n;
    }
  }
  if (std::isinf(rep.max_ratio))
    throw std::runtime_error("majorize_check: tilde d_k vanished on S (ratio +inf)");
  double llX = std::log(std::log(static_cast<double>(mp.X)));
  rep.bound = std::pow(llX, 5.0 * k);
  return rep;
}

MajorizeReport majorize_check_streamed(double k, const AnatomyParams& ap,
                                       const MajorantParams& mp,
                                       uint32_t segment_len) {
  MajorizeReport rep;
  const uint64_t X = mp.X;
  for (uint64_t base = X; base < 2 * X; base += segment_len) {
    uint64_t top = std::min<uint64_t>(base + segment_len, 2 * X);
    FactorWindow w = build_range(base, top);
    MajorizeReport part = majorize_check(w, k, ap, mp);
    rep.s_size += part.s_size;
    if (part.max_ratio > rep.max_ratio) {
      rep.max_ratio = part.max_ratio;
      rep.argmax_n = part.argmax_n;
    }
    rep.bound = part.bound;
  }
  return rep;
}

ShortIntervalProfile short_interval_profile(const ArithSeq& seq, uint64_t H1,
                                            uint64_t q, uint64_t a,
                                            uint64_t samples, uint64_t seed,
                                            double k_norm) {
  if (q == 0 || std::gcd(a, q) != 1)
    throw std::invalid_argument("short_interval_profile: need (a, q) = 1");
  if (H1 < q)
    throw std::invalid_argument("short_interval_profile: need H1 >= q");
  if (seq.length() <= H1 + 2)
    throw std::invalid_argument("short_interval_profile: sequence too short");

  uint64_t x_min = seq.x_lo + 1;
  uint64_t x_max = seq.x_hi() - H1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(x_min, x_max);
  std::vector<uint64_t> xs(samples);
  for (uint64_t i = 0; i < samples; ++i) xs[i] = dist(rng);

  double logX = std::log(static_cast<double>(seq.x_lo));
  double norm = static_cast<double>(q) / static_cast<double>(H1) /
                std::pow(logX, k_norm - 1.0);

  std::vector<double> vals(samples);
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < static_cast<long long>(samples); ++s) {
    uint64_t x = xs[static_cast<size_t>(s)];
    // first n >= x with n = a (mod q)
    uint64_t r = x % q;
    uint64_t n0 = x + ((a + q - r) % q);
    KahanSum acc;
    for (uint64_t n = n0; n <= x + H1; n += q) acc.add(seq.at(static_cast<int64_t>(n)));
    vals[static_cast<size_t>(s)] = acc.value() * norm;
  }

  ShortIntervalProfile prof;
  prof.H1 = H1;
  prof.q = q;
  prof.a = a;
  prof.samples = samples;
  prof.seed = seed;
  prof.k_norm = k_norm;
  prof.p50 = percentile_nearest_rank(vals, 50);
  prof.p90 = percentile_nearest_rank(vals, 90);
  prof.p99 = percentile_nearest_rank(vals, 99);
  prof.p100 = percentile_nearest_rank(vals, 100);
  return prof;
}

}  // namespace divcor
