#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "divcor/majorants.hpp"
#include "divcor/sequences.hpp"
#include "divcor/util.hpp"

using namespace divcor;

namespace {

// brute-force tilde d_k via full divisor enumeration by trial division
double tilde_dk_brute(double k, uint64_t n, double M, double omega_cap,
                      uint64_t X) {
  if (n <= X || n > 2 * X) return 0.0;
  DkTable dkm1(k - 1.0);
  double total = 0;
  for (uint64_t m : divisors_from_factorization(factorize_u64(n))) {
    if (static_cast<double>(m) > M) continue;
    auto mf = factorize_u64(m);
    uint32_t om = 0;
    for (auto [p, e] : mf) om += e;
    if (static_cast<double>(om) > omega_cap) continue;
    double dv = 1.0;
    for (auto [p, e] : mf) dv *= dkm1.at(e);
    total += dv;
  }
  return total;
}

}  // namespace

TEST_CASE("majorant params: M formula clamps to X^{1/3} at desk scale") {
  MajorantParams mp = majorant_params(2.0, 1u << 24);
  CHECK(mp.m_clamped);
  CHECK(mp.M == doctest::Approx(std::pow(static_cast<double>(1u << 24), 1.0 / 3.0)));
  CHECK(mp.omega_cap > 0);
  CHECK(mp.psi_bump(0.0) == doctest::Approx(1.0));
  CHECK(mp.psi_bump(0.5) == 0.0);
  CHECK(mp.psi_bump(-0.7) == 0.0);
}

TEST_CASE("tilde_dk on primes and 2p") {
  uint64_t X = 10000;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);
  REQUIRE(mp.M < static_cast<double>(X));

  // prime in the window: only m = 1 qualifies
  CHECK(tilde_dk(mp, w.factors(10007), 10007) == doctest::Approx(1.0));
  // n = 2p with p > M: divisors <= M are 1 and 2
  uint64_t n2p = 2 * 9973;
  REQUIRE(n2p > X);
  REQUIRE(n2p <= 2 * X);
  CHECK(tilde_dk(mp, w.factors(n2p), n2p) == doctest::Approx(2.0));
  // outside the support
  CHECK(tilde_dk(mp, w.factors(10007), 30000) == 0.0);
}

TEST_CASE("tilde_dk matches brute-force divisor enumeration") {
  uint64_t X = 1u << 20;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    uint64_t n = X + 1 + rng() % X;
    double got = tilde_dk(mp, w.factors(n), n);
    double want = tilde_dk_brute(2.0, n, mp.M, mp.omega_cap, X);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("tkdk: tilde d_k <= d_k pointwise over a full window") {
  uint64_t X = 1u << 16;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);
  DkTable t2(2.0), t1(1.0);
  for (uint64_t i = 0; i < w.length(); ++i) {
    uint64_t n = X + 1 + i;
    FactorView f = w.factors_by_index(i);
    CHECK(tilde_dk(mp, t1, f, n) <= t2(f) * (1.0 + 1e-12));
  }
}

TEST_CASE("tilde_dk is monotone in M") {
  uint64_t X = 1u << 18;
  FactorWindow w = build_window(X);
  MajorantParams lo = majorant_params(2.0, X);
  MajorantParams hi = lo;
  hi.M = lo.M * 8.0;
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    uint64_t n = X + 1 + rng() % X;
    FactorView f = w.factors(n);
    CHECK(tilde_dk(hi, f, n) >= tilde_dk(lo, f, n) - 1e-12);
  }
}

TEST_CASE("gy_nu: primes, positivity, and the four-term hand expansion") {
  uint64_t X = 1u << 20;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);
  double logM = std::log(mp.M);

  // prime > M: only d = 1 contributes and psi(0) = 1
  uint64_t p = 1048583;  // prime just above 2^20
  CHECK(gy_nu(mp, w.factors(p), p) == doctest::Approx(logM));

  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    uint64_t n = X + 1 + rng() % X;
    CHECK(gy_nu(mp, w.factors(n), n) >= 0.0);
  }

  // n = 3 * 5 * s with s prime > M: exactly two prime factors <= M
  uint64_t s = 69997;
  REQUIRE(is_prime_u64(s));
  uint64_t n = 15 * s;
  REQUIRE(n > X);
  REQUIRE(n <= 2 * X);
  REQUIRE(static_cast<double>(s) > mp.M);
  auto psi = mp.psi_bump;
  double hand = 1.0 - psi(std::log(3.0) / logM) - psi(std::log(5.0) / logM) +
                psi(std::log(15.0) / logM);
  CHECK(gy_nu(mp, w.factors(n), n) == doctest::Approx(logM * hand * hand));
}

TEST_CASE("majorize_check: live schedule bounded, empty S gives zero") {
  uint64_t X = 1u << 18;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);

  AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
  MajorizeReport rep = majorize_check(w, 2.0, ap, mp);
  CHECK(rep.s_size > 0);
  CHECK(rep.max_ratio >= 1.0);
  CHECK(rep.max_ratio < rep.bound);
  CHECK(rep.argmax_n > X);

  AnatomyOverrides rej;
  rej.p1 = 2.0 * X + 10;
  rej.q1 = 2.0 * X + 100;
  rej.p2 = 3;
  rej.q2 = 10;
  rej.p3 = 10;
  rej.q3 = 100;
  AnatomyParams ap_rej = params(2.0, X, rej);
  MajorizeReport rep2 = majorize_check(w, 2.0, ap_rej, mp);
  CHECK(rep2.s_size == 0);
  CHECK(rep2.max_ratio == 0.0);

  MajorantParams other = majorant_params(2.0, 1u << 19);
  CHECK_THROWS_AS(majorize_check(w, 2.0, ap, other), std::invalid_argument);
}

TEST_CASE("short_interval_profile: constant sequence and error paths") {
  uint64_t X = 1u << 16;
  FactorWindow w = build_window(X);
  ArithSeq ones = make_sequence(w, SequenceSpec::indicator());

  ShortIntervalProfile prof =
      short_interval_profile(ones, 512, 1, 0, 500, 42, 1.0);
  // every normalized sum is (H1 + 1) / H1 for the all-ones sequence
  CHECK(prof.p50 == doctest::Approx(513.0 / 512.0));
  CHECK(prof.p100 - prof.p50 <= 2.0 / 512.0);

  CHECK_THROWS_AS(short_interval_profile(ones, 512, 4, 2, 10, 1, 1.0),
                  std::invalid_argument);  // gcd(a, q) != 1
  CHECK_THROWS_AS(short_interval_profile(ones, 3, 4, 1, 10, 1, 1.0),
                  std::invalid_argument);  // H1 < q
}

TEST_CASE("sequence materialization matches pointwise majorants; streaming agrees") {
  uint64_t X = 1u << 16;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);

  ArithSeq td = make_sequence(w, SequenceSpec::tilde_dk_spec(2.0, mp));
  ArithSeq nu = make_sequence(w, SequenceSpec::gy_nu_spec(mp));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    uint64_t n = X + 1 + rng() % X;
    CHECK(td.at(static_cast<int64_t>(n)) ==
          doctest::Approx(tilde_dk(mp, w.factors(n), n)));
    CHECK(nu.at(static_cast<int64_t>(n)) ==
          doctest::Approx(gy_nu(mp, w.factors(n), n)));
  }

  ArithSeq td_str = make_sequence_streamed(X, 2 * X,
                                           SequenceSpec::tilde_dk_spec(2.0, mp),
                                           1u << 14);
  CHECK(td_str.values == td.values);
  AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
  ArithSeq r1 = make_sequence(w, SequenceSpec::dk_restricted(2.0, ap));
  ArithSeq r2 = make_sequence_streamed(X, 2 * X,
                                       SequenceSpec::dk_restricted(2.0, ap), 1u << 13);
  CHECK(r1.values == r2.values);
}

TEST_CASE("short_interval_profile: reproducible and residue-sensitive") {
  uint64_t X = 1u << 18;
  FactorWindow w = build_window(X);
  MajorantParams mp = majorant_params(2.0, X);
  ArithSeq td = make_sequence(w, SequenceSpec::tilde_dk_spec(2.0, mp));

  ShortIntervalProfile a = short_interval_profile(td, 1024, 3, 1, 400, 7, 2.0);
  ShortIntervalProfile b = short_interval_profile(td, 1024, 3, 1, 400, 7, 2.0);
  CHECK(a.p50 == b.p50);
  CHECK(a.p99 == b.p99);
  CHECK(a.p100 == b.p100);
  CHECK(a.p50 > 0);
  CHECK(a.p99 < 10.0 * a.p50);  // concentration, no heavy tail at this scale
}
