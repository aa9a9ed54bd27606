#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "divcor/arith_fn.hpp"
#include "divcor/factor_sieve.hpp"

namespace divcor {

struct AnatomyOverrides {
  std::optional<double> p1, q1, p2, q2, p3, q3;
  std::optional<double> psi;        // exponent of log X in P_1
  std::optional<double> eps_prime;  // epsilon' in the Omega cap

  bool has_all_endpoints() const {
    return p1 && q1 && p2 && q2 && p3 && q3;
  }
};

struct AnatomyParams {
  double k = 0;
  uint64_t X = 0;
  double p1 = 0, q1 = 0, p2 = 0, q2 = 0, p3 = 0, q3 = 0;
  double eps_prime = 0.1;
  double omega_cap = 0;        // (1+eps') k loglog X
  double large_prime_lo = 0;   // X^{1/(loglog X)^2}
  double large_omega_cap = 0;  // 10 k logloglog X
  double psi_value = 0;
  // clamp flags for p1,q1,p2,q2,p3,q3 in that order
  std::array<bool, 6> clamped{false, false, false, false, false, false};

  Interval interval(int j) const;  // j = 1, 2, 3
  bool intervals_overlap() const;
};

// The six endpoints and caps from the asymptotic formulas, clamped
// (Q_j <= X^{1/6}, P_j >= 3) with flags, but NOT validated: intervals may be
// empty.  params() below adds the validation.
AnatomyParams anatomy_endpoints(double k, uint64_t X,
                                const AnatomyOverrides& ov = {});

// Validated parameter set.  With no endpoint overrides rejects when any
// P_j >= Q_j survives clamping (at desk scale the default schedule always
// collapses for j = 2, 3; callers must pass an explicit schedule, e.g.
// desk_schedule()).
AnatomyParams params(double k, uint64_t X, const AnatomyOverrides& ov = {});

// A fixed-log-power schedule that keeps all three intervals nonempty at desk
// scale: [logX, log^2 X], [log^2 X, log^2.5 X], [log^2.5 X, log^3 X].
AnatomyOverrides desk_schedule(double k, uint64_t X);

// Membership in S_{k,X}: per interval j = 1,2,3 require omega(n; I_j) >= 1 and
// mu^2(n; I_j) = 1, plus Omega(n) <= omega_cap and the large-prime cap.
bool in_S(const AnatomyParams& ap, const FactorView& f);

struct DiscardedMassReport {
  double k = 0, l = 0;
  uint64_t X = 0, H = 0;
  double lemma_sum = 0;      // sum_{|h|<=H} sum_n |f - tilde f| d_l(n+h)
  double lemma_normalized = 0;  // / (H X log^{k+l-2} X)
  double mass_fraction = 0;  // sum_{n not in S} d_k(n) / sum_n d_k(n)
  uint64_t kept = 0, discarded = 0;
};

// The Lemma-slip statistic over a window plus the d_k mass fraction of the
// discarded set.  d_l(n+h) is evaluated over (X-H, 2X+H] (unrestricted).
DiscardedMassReport discarded_mass(const FactorWindow& window, double k, double l,
                                   const AnatomyParams& params_k,
                                   const AnatomyParams& params_l, uint64_t H);

// Same statistic over (X, 2X] without materializing factor windows; for the
// 2^26-scale trend runs.
DiscardedMassReport discarded_mass_streamed(double k, double l,
                                            const AnatomyParams& params_k,
                                            const AnatomyParams& params_l,
                                            uint64_t X, uint64_t H,
                                            uint32_t segment_len = 1u << 21);

}  // namespace divcor
