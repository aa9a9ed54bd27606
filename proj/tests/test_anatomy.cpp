#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "divcor/anatomy.hpp"
#include "divcor/factor_sieve.hpp"
#include "divcor/util.hpp"

using namespace divcor;

namespace {

FactorView synth(const std::vector<std::pair<uint64_t, uint8_t>>& fac,
                 std::vector<uint64_t>& ps, std::vector<uint8_t>& es) {
  ps.clear();
  es.clear();
  for (auto [p, e] : fac) {
    ps.push_back(p);
    es.push_back(e);
  }
  return {ps.data(), es.data(), static_cast<uint32_t>(ps.size())};
}

}  // namespace

TEST_CASE("endpoint formulas and clamping at k=2, X=10^8") {
  AnatomyParams ap = anatomy_endpoints(2.0, 100000000ull);
  double logX = std::log(1e8);
  double psi = 1.0 / std::log(std::log(logX));
  CHECK(ap.psi_value == doctest::Approx(psi));
  CHECK(ap.p1 == doctest::Approx(std::pow(logX, psi)));
  CHECK(ap.p1 > 15.0);
  CHECK(ap.p1 < 15.5);
  // Q_1 formula exceeds X, so it is clamped to X^{1/6} ~ 21.54
  CHECK(ap.q1 == doctest::Approx(std::pow(1e8, 1.0 / 6.0)));
  CHECK(ap.clamped[1]);
  // the asymptotic P_2 = exp((loglog X)^2) already exceeds the clamp cap; the
  // default schedule is degenerate at desk scale and params() must reject it
  CHECK(ap.p2 > ap.q2);
  CHECK_THROWS_AS(params(2.0, 100000000ull), std::invalid_argument);
}

TEST_CASE("override endpoints pass through verbatim") {
  AnatomyOverrides ov;
  ov.p1 = 10;
  ov.q1 = 100;
  ov.p2 = 100;
  ov.q2 = 1000;
  ov.p3 = 1000;
  ov.q3 = 10000;
  AnatomyParams ap = params(2.0, 1u << 20, ov);
  CHECK(ap.p1 == 10.0);
  CHECK(ap.q3 == 10000.0);
  for (bool c : ap.clamped) CHECK_FALSE(c);
}

TEST_CASE("degenerate schedules rejected") {
  CHECK_THROWS_AS(params(2.0, 1000), std::invalid_argument);   // X below minimum
  CHECK_THROWS_AS(params(2.0, 10000), std::invalid_argument);  // intervals collapse
  CHECK_THROWS_AS(params(1.5, 1u << 20), std::invalid_argument);  // k < 2
}

TEST_CASE("desk schedule produces valid params") {
  for (uint64_t X : {uint64_t(1) << 20, uint64_t(1) << 24}) {
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    CHECK(ap.p1 < ap.q1);
    CHECK(ap.p2 < ap.q2);
    CHECK(ap.p3 < ap.q3);
    CHECK(ap.omega_cap > 0);
  }
}

TEST_CASE("in_S membership on constructed integers") {
  AnatomyOverrides ov;
  ov.p1 = 10;
  ov.q1 = 100;
  ov.p2 = 100;
  ov.q2 = 1000;
  ov.p3 = 1000;
  ov.q3 = 10000;
  AnatomyParams ap = params(2.0, 1u << 20, ov);

  std::vector<uint64_t> ps;
  std::vector<uint8_t> es;

  // 11 * 101 * 1009: one squarefree prime in each interval
  CHECK(in_S(ap, synth(factorize_u64(11ull * 101 * 1009), ps, es)));
  // repeated prime inside interval 1
  CHECK_FALSE(in_S(ap, synth(factorize_u64(11ull * 11 * 101 * 1009), ps, es)));
  // no prime in interval 1
  CHECK_FALSE(in_S(ap, synth(factorize_u64(5ull * 101 * 1009), ps, es)));
  // a prime has no factor in any interval
  CHECK_FALSE(in_S(ap, synth(factorize_u64(1048583ull), ps, es)));
  // Omega cap: many small factors on top of the interval primes
  uint64_t heavy = 11ull * 101 * 1009;
  for (int i = 0; i < 12; ++i) heavy *= 2;  // Omega = 15 > cap ~ 11.04
  CHECK(big_omega(synth(factorize_u64(heavy), ps, es)) > ap.omega_cap);
  CHECK_FALSE(in_S(ap, synth(factorize_u64(heavy), ps, es)));
}

TEST_CASE("primes are rejected by a schedule with Q3 below the window") {
  uint64_t X = 1u << 20;
  AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
  REQUIRE(ap.q3 < static_cast<double>(X));
  FactorWindow w = build_range(X, X + 4096);
  for (uint64_t i = 0; i < w.length(); ++i) {
    FactorView f = w.factors_by_index(i);
    if (f.count == 1 && f.exps[0] == 1) CHECK_FALSE(in_S(ap, f));
  }
}

TEST_CASE("filter monotonicity: duplicating interval 2 onto interval 1 never shrinks S") {
  uint64_t X = 1u << 18;
  FactorWindow w = build_range(X, 2 * X);
  AnatomyOverrides full = desk_schedule(2.0, X);
  AnatomyOverrides weaker = full;
  weaker.p2 = full.p1;  // interval 2 condition becomes a copy of interval 1
  weaker.q2 = full.q1;
  AnatomyParams ap_full = params(2.0, X, full);
  AnatomyParams ap_weak = params(2.0, X, weaker);
  uint64_t count_full = 0, count_weak = 0;
  for (uint64_t i = 0; i < w.length(); ++i) {
    FactorView f = w.factors_by_index(i);
    bool in_full = in_S(ap_full, f);
    bool in_weak = in_S(ap_weak, f);
    if (in_full) {
      ++count_full;
      CHECK(in_weak);  // satisfying three distinct intervals implies the weaker filter
    }
    if (in_weak) ++count_weak;
  }
  CHECK(count_weak >= count_full);
  CHECK(count_full > 0);
}

TEST_CASE("condition (B) large-prime clause is vacuous at desk scale") {
  for (uint64_t X : {uint64_t(10000), uint64_t(1) << 20, uint64_t(1) << 30}) {
    AnatomyParams ap = anatomy_endpoints(2.0, X);
    // max possible count of prime factors >= large_prime_lo in any n <= 2X
    double max_large =
        std::log(2.0 * static_cast<double>(X)) / std::log(ap.large_prime_lo);
    CHECK(max_large < ap.large_omega_cap);
  }
}

TEST_CASE("discarded_mass: rejecting schedule gives fraction 1; lemma sum matches") {
  uint64_t X = 10000;
  FactorWindow w = build_range(X, 2 * X);

  // interval 1 sits entirely above 2X: omega(n; I_1) >= 1 never holds
  AnatomyOverrides rej;
  rej.p1 = 2.0 * X + 10;
  rej.q1 = 2.0 * X + 100;
  rej.p2 = 3;
  rej.q2 = 100;
  rej.p3 = 100;
  rej.q3 = 1000;
  AnatomyParams ap_rej = params(2.0, X, rej);
  DiscardedMassReport rep = discarded_mass(w, 2.0, 2.0, ap_rej, ap_rej, 8);
  CHECK(rep.mass_fraction == doctest::Approx(1.0));
  CHECK(rep.discarded == w.length());
  CHECK(rep.lemma_sum > 0);

  // sanity for a live schedule: fraction strictly between 0 and 1, and the
  // lemma sum equals a direct double loop
  AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
  uint64_t H = 8;
  DiscardedMassReport rep2 = discarded_mass(w, 2.0, 2.0, ap, ap, H);
  CHECK(rep2.mass_fraction > 0.0);
  CHECK(rep2.mass_fraction < 1.0);

  FactorWindow gw = build_range(X - H, 2 * X + H);
  DkTable t2(2.0);
  KahanSum direct;
  for (uint64_t i = 0; i < w.length(); ++i) {
    FactorView f = w.factors_by_index(i);
    if (in_S(ap, f)) continue;
    uint64_t n = X + 1 + i;
    double fv = t2(f);
    for (int64_t h = -static_cast<int64_t>(H); h <= static_cast<int64_t>(H); ++h) {
      uint64_t m = static_cast<uint64_t>(static_cast<int64_t>(n) + h);
      direct.add(fv * t2(gw.factors(m)));
    }
  }
  CHECK(rep2.lemma_sum == doctest::Approx(direct.value()).epsilon(1e-12));
}

TEST_CASE("discarded_mass: streamed variant agrees with the window variant") {
  uint64_t X = 1u << 16;
  FactorWindow w = build_range(X, 2 * X);
  AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
  DiscardedMassReport a = discarded_mass(w, 2.0, 2.0, ap, ap, 32);
  DiscardedMassReport b = discarded_mass_streamed(2.0, 2.0, ap, ap, X, 32, 1u << 13);
  CHECK(a.lemma_sum == doctest::Approx(b.lemma_sum).epsilon(1e-14));
  CHECK(a.mass_fraction == doctest::Approx(b.mass_fraction).epsilon(1e-14));
  CHECK(a.kept == b.kept);
  CHECK(a.discarded == b.discarded);
}
