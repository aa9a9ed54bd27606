#pragma once

#include <cstdint>
#include <functional>

#include "divcor/anatomy.hpp"
#include "divcor/arith_fn.hpp"
#include "divcor/factor_sieve.hpp"

namespace divcor {

// Smooth bump supported on [-1/2, 1/2] with psi(0) = 1.
double default_psi_bump(double t);

struct MajorantParams {
  double k = 0;
  uint64_t X = 0;
  double M = 0;          // truncation level, X^{2k/loglog X} clamped to X^{1/3}
  bool m_clamped = false;
  double omega_cap = 0;  // (1+eps') k loglog X
  double eps_prime = 0.1;
  std::function<double(double)> psi_bump = default_psi_bump;
};

MajorantParams majorant_params(double k, uint64_t X, double eps_prime = 0.1);

// Truncated divisor-sum majorant:
//   tilde d_k(n) = sum over m | n with m <= M, Omega(m) <= omega_cap of
//   d_{k-1}(m), restricted to n in (X, 2X].
double tilde_dk(const MajorantParams& mp, const FactorView& f, uint64_t n);

// Same but with a caller-supplied d_{k-1} table (saves rebuilding per call).
double tilde_dk(const MajorantParams& mp, const DkTable& dkm1,
                const FactorView& f, uint64_t n);

// Goldston-Yildirim majorant:
//   nu(n) = 1_{(X,2X]}(n) * log M * (sum_{d|n, d<=M} mu(d) psi(log d / log M))^2.
double gy_nu(const MajorantParams& mp, const FactorView& f, uint64_t n);

struct MajorizeReport {
  double max_ratio = 0;  // max over n in S of d_k(n) / tilde d_k(n)
  uint64_t argmax_n = 0;
  uint64_t s_size = 0;
  double bound = 0;      // (loglog X)^{5k}, for reporting
};

// Checks tilde d_k(n) <= d_k(n) for every n in the window (throws on
// violation) and returns the maximum ratio over S_{k,X}.
MajorizeReport majorize_check(const FactorWindow& window, double k,
                              const AnatomyParams& ap, const MajorantParams& mp);

// Same check over (X, 2X] factoring one segment at a time; peak memory stays
// one segment regardless of X.
MajorizeReport majorize_check_streamed(double k, const AnatomyParams& ap,
                                       const MajorantParams& mp,
                                       uint32_t segment_len = 1u << 21);

struct ShortIntervalProfile {
  uint64_t H1 = 0, q = 0, a = 0, samples = 0, seed = 0;
  double k_norm = 1;
  double p50 = 0, p90 = 0, p99 = 0, p100 = 0;
};

// Percentiles of (q/H1) * sum_{x <= n <= x+H1, n = a (q)} seq(n) / (log X)^{k-1}
// over uniformly random integer x in the sequence's support, seeded and
// reproducible.
ShortIntervalProfile short_interval_profile(const ArithSeq& seq, uint64_t H1,
                                            uint64_t q, uint64_t a,
                                            uint64_t samples, uint64_t seed,
                                            double k_norm);

}  // namespace divcor
