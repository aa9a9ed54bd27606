#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "divcor/correlate.hpp"
#include "divcor/sequences.hpp"
#include "divcor/singular.hpp"
#include "divcor/util.hpp"

using namespace divcor;

namespace {

ArithSeq random_seq(uint64_t x_lo, size_t len, uint64_t seed) {
  ArithSeq s;
  s.x_lo = x_lo;
  s.values.resize(len);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (auto& v : s.values) v = dist(rng);
  return s;
}

uint64_t divisor_count(uint64_t n) {
  uint64_t c = 0;
  for (uint64_t d = 1; d * d <= n; ++d)
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  return c;
}

}  // namespace

TEST_CASE("correlation_naive hand cases") {
  ArithSeq ind;
  ind.x_lo = 4;
  ind.values.assign(4, 1.0);  // {5, 6, 7, 8}
  auto corr = correlation_naive(ind, ind, 2);
  CHECK(corr[2 + 1] == doctest::Approx(3.0));   // h = 1
  CHECK(corr[2 + 0] == doctest::Approx(4.0));   // h = 0: inner product
  CHECK(corr[2 - 2] == doctest::Approx(2.0));   // h = -2

  ArithSeq zero;
  zero.x_lo = 0;
  zero.values.assign(64, 0.0);
  for (double v : correlation_naive(zero, zero, 8)) CHECK(v == 0.0);
  for (double v : correlation_fft(zero, zero, 8)) CHECK(v == 0.0);

  CHECK_THROWS_AS(correlation_naive(ind, ind, 100), std::range_error);
}

TEST_CASE("d_2 correlation on (10^3, 2*10^3] vs per-n divisor counting") {
  FactorWindow w = build_range(1000, 2001 + 8);
  ArithSeq d2 = make_sequence(w, SequenceSpec::dk_spec(2));
  // restrict f to (1000, 2000]
  ArithSeq f;
  f.x_lo = 1000;
  f.values.assign(d2.values.begin(), d2.values.begin() + 1000);
  auto corr = correlation_naive(f, d2, 1);
  KahanSum brute;
  for (uint64_t n = 1001; n <= 2000; ++n)
    brute.add(static_cast<double>(divisor_count(n) * divisor_count(n + 1)));
  CHECK(corr[2] == doctest::Approx(brute.value()).epsilon(1e-12));
}

TEST_CASE("fft equals naive on random inputs across lengths") {
  for (size_t len : {size_t(1000), size_t(10000), size_t(100000)}) {
    ArithSeq f = random_seq(1 << 20, len, len);
    ArithSeq g = random_seq((1 << 20) - 64, len + 128, len + 1);
    auto naive = correlation_naive(f, g, 128);
    auto fast = correlation_fft(f, g, 128);
    REQUIRE(naive.size() == fast.size());
    for (size_t i = 0; i < naive.size(); ++i) {
      double scale = std::max(1.0, std::abs(naive[i]));
      CHECK(std::abs(naive[i] - fast[i]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("shift symmetry: corr_{f,g}(h) = corr_{g,f}(-h)") {
  ArithSeq f = random_seq(500, 2000, 31);
  ArithSeq g = random_seq(450, 2100, 37);
  auto fg = correlation_naive(f, g, 16);
  auto gf = correlation_naive(g, f, 16);
  for (int64_t h = -16; h <= 16; ++h)
    CHECK(fg[static_cast<size_t>(h + 16)] ==
          doctest::Approx(gf[static_cast<size_t>(-h + 16)]).epsilon(1e-12));
}

TEST_CASE("fft correlation performance pin: 10^6 inputs, h_max 10^3") {
  ArithSeq f = random_seq(1 << 21, 1000000, 91);
  ArithSeq g = random_seq(1 << 21, 1000000, 92);
  auto t0 = std::chrono::steady_clock::now();
  auto fast = correlation_fft(f, g, 1000);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(fast.size() == 2001);
  CHECK(secs < 2.0);
}

TEST_CASE("theorem1_report structure at small scale") {
  Theorem1Options opt;
  opt.tol = 1e-4;
  CorrelationReport rep = theorem1_report(1 << 16, 16, 2, 2, opt);
  CHECK(rep.rows.size() == 32);
  CHECK(rep.deviation > 0.0);  // asymptotics not converged at desk scale
  for (const auto& row : rep.rows) {
    CHECK(row.empirical >= 0.0);
    CHECK(row.main_term > 0.0);
  }
  // window convention flag: zero-extended g drops the n + h > 2X terms
  Theorem1Options zopt = opt;
  zopt.extended_window = false;
  CorrelationReport zrep = theorem1_report(1 << 16, 16, 2, 2, zopt);
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].h > 0)
      CHECK(zrep.rows[i].empirical <= rep.rows[i].empirical + 1e-9);
    else
      CHECK(zrep.rows[i].empirical == doctest::Approx(rep.rows[i].empirical));
  }
  CHECK_THROWS_AS(theorem1_report(1 << 10, 4, 2, 2, opt), std::invalid_argument);
}

TEST_CASE("lambda-mode parity: odd shifts beat even shifts as the constants predict") {
  Theorem1Options opt;
  opt.tol = 1e-4;
  CorrelationReport rep = theorem1_report_lambda(1 << 17, 16, 2, opt);
  double even_emp = 0, odd_emp = 0, even_mt = 0, odd_mt = 0;
  int even_n = 0, odd_n = 0;
  for (const auto& row : rep.rows) {
    if (row.h % 2 == 0) {
      even_emp += row.empirical;
      even_mt += row.main_term;
      ++even_n;
    } else {
      odd_emp += row.empirical;
      odd_mt += row.main_term;
      ++odd_n;
    }
  }
  even_emp /= even_n;
  odd_emp /= odd_n;
  even_mt /= even_n;
  odd_mt /= odd_n;
  CHECK(odd_mt > even_mt);    // constants: local factor at p = 2
  CHECK(odd_emp > even_emp);  // same direction empirically
}

TEST_CASE("minor_arc_energy: full-circle arcs leave no remainder") {
  ArithSeq f = random_seq(4096, 4096, 71);
  ArithSeq g = random_seq(4096, 4096, 72);
  // Q = 2, delta = 0.3 covers the whole circle
  MinorArcEnergy full = minor_arc_energy(f, g, 2, 0.3, 8, 8);
  auto corr = correlation_naive(f, g, 8);
  for (size_t i = 0; i < full.remainder_mod.size(); ++i)
    CHECK(full.remainder_mod[i] <= 1e-6 * std::max(1.0, std::abs(corr[i])));
  CHECK(full.aggregate_normalized <= 1e-12);

  // narrow arcs keep less of the correlation than wide ones
  MinorArcEnergy narrow = minor_arc_energy(f, g, 2, 1.0 / (64.0 * 4096.0), 8, 512);
  CHECK(narrow.aggregate_S > full.aggregate_S);
}

TEST_CASE("major_arc_report: reality, Q=1 quadrature oracle") {
  // Q = 1: the major arcs are one interval around 0; compare against direct
  // trapezoid quadrature of S_f conj(S_g) e(alpha h)
  ArithSeq f = random_seq(10000, 1 << 14, 81);
  ArithSeq g = random_seq(10000, 1 << 14, 82);
  double delta = 1.0 / 128.0;
  ArcSet arcs = major_arcs(1, delta);
  CorrelationGrids grids = make_correlation_grids(f, g, 8);
  for (int64_t h : {0, 1, 3}) {
    cplx riemann = major_arc_integral_from_grids(grids, arcs, h);
    const int M = 8192;
    KahanCSum trap;
    for (int j = -M; j <= M; ++j) {
      double alpha = delta * static_cast<double>(j) / M;
      double wgt = (j == -M || j == M) ? 0.5 : 1.0;
      cplx val = sf_point(f, alpha) * std::conj(sf_point(g, alpha)) *
                 e2pi(frac_reduce(alpha * static_cast<double>(h)));
      trap.add(wgt * val * (delta / M));
    }
    CHECK(std::abs(riemann - trap.value()) <= 1e-5 * std::abs(trap.value()));
  }
}

TEST_CASE("major_arc_report on a restricted window is real and structured") {
  uint64_t X = 1 << 17;
  MajorArcReport rep = major_arc_report(X, 8, 2, 2, 4, 64.0 / X,
                                        desk_schedule(2.0, X), 8, 1e-4);
  CHECK(rep.rows.size() == 16);
  for (const auto& row : rep.rows) {
    CHECK(std::abs(row.mt_imag) <= 1e-8 * std::max(1.0, std::abs(row.mt_real)));
    CHECK(row.main_term > 0.0);
  }
  CHECK(rep.pearson >= -1.0);
  CHECK(rep.pearson <= 1.0);
}
