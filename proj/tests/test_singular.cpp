#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "divcor/arith_fn.hpp"
#include "divcor/singular.hpp"
#include "divcor/util.hpp"

using namespace divcor;

namespace {

// numeric bound on what the oracle can miss: both truncated valuation tails,
// started one exponent early to absorb the cap redistribution
double oracle_tail_dd(double k, double l, uint64_t p, uint32_t E) {
  DkTable dkt(k), dlt(l);
  double u = 1.0 / static_cast<double>(p);
  double tk = 0, tl = 0;
  for (uint32_t a = E - 1; a <= 64; ++a) {
    tk += dkt.at(static_cast<uint8_t>(a)) * std::pow(u, static_cast<double>(a));
    tl += dlt.at(static_cast<uint8_t>(a)) * std::pow(u, static_cast<double>(a));
  }
  double big = std::max(dkt.at(20), dlt.at(20));
  return 4.0 * std::pow(1.0 - u, k + l - 2.0) * big * (tk + tl) + 1e-12;
}

double oracle_tail_ld(double k, uint64_t p, uint32_t E) {
  DkTable dkt(k);
  double u = 1.0 / static_cast<double>(p);
  double t = 0;
  for (uint32_t a = E - 1; a <= 64; ++a)
    t += dkt.at(static_cast<uint8_t>(a)) * std::pow(u, static_cast<double>(a));
  return 4.0 * std::pow(1.0 - u, k - 1.0) * static_cast<double>(p) * t + 1e-12;
}

uint32_t oracle_E(uint64_t p) {
  switch (p) {
    case 2: return 20;
    case 3: return 12;
    case 5: return 8;
    default: return 7;
  }
}

}  // namespace

TEST_CASE("local_factor_dd closed cases") {
  // k = l = 2, p coprime to h: 1 - 1/p^2
  for (uint64_t p : {3, 5, 7, 11, 101}) {
    LocalFactor lf = local_factor_dd(2, 2, p, 1, 1e-12);
    double expect = 1.0 - 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    CHECK(lf.value == doctest::Approx(expect).epsilon(1e-11));
  }
  // p = 2, h = 2 (v = 1): (1 - 1/4)(1 + 1/2) = 1.125
  LocalFactor lf2 = local_factor_dd(2, 2, 2, 2, 1e-12);
  CHECK(lf2.value == doctest::Approx(1.125).epsilon(1e-11));
  // far prime: |value - 1| <= 1e-11
  LocalFactor lfbig = local_factor_dd(2.5, 3.5, 999983, 5, 1e-13);
  CHECK(std::abs(lfbig.value - 1.0) <= 1e-11);
  CHECK_THROWS_AS(local_factor_dd(2, 2, 5, 0, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(local_factor_dd(2, 2, 6, 1, 1e-9), std::invalid_argument);
}

TEST_CASE("local_factor_ld closed cases") {
  for (uint64_t p : {3, 5, 7, 11}) {
    LocalFactor lf = local_factor_ld(2, p, 1, 1e-12);
    double pd = static_cast<double>(p);
    CHECK(lf.value == doctest::Approx(1.0 + 1.0 / (pd * (pd - 1.0))).epsilon(1e-11));
  }
  // p | h: (1 - 1/p)^{k-1}, independent of the valuation
  LocalFactor v1 = local_factor_ld(2, 3, 3, 1e-12);
  LocalFactor v2 = local_factor_ld(2, 3, 9, 1e-12);
  CHECK(v1.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(v1.value == doctest::Approx(v2.value));
  // large p off h: |value - 1| <= 2k/p^2
  for (uint64_t p : {1009, 10007}) {
    LocalFactor lf = local_factor_ld(3, p, 7, 1e-13);
    CHECK(std::abs(lf.value - 1.0) <= 6.0 / (static_cast<double>(p) * static_cast<double>(p)));
  }
  CHECK_THROWS_AS(local_factor_ld(2, 5, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("oracle spot values from the contract") {
  double o1 = local_oracle(OracleMode::dd, 2, 2, 2, 1, 20);
  CHECK(std::abs(o1 - 0.75) <= std::pow(2.0, -18.0));
  double o2 = local_oracle(OracleMode::ld, 2, 0, 3, 1, 12);
  CHECK(std::abs(o2 - 7.0 / 6.0) <= std::pow(3.0, -10.0));
  CHECK_THROWS_AS(local_oracle(OracleMode::dd, 2, 2, 2, 1, 45), std::range_error);
}

TEST_CASE("oracle stability in E: geometric tail") {
  for (uint64_t p : {2, 3}) {
    uint32_t E = p == 2 ? 14 : 9;
    double a = local_oracle(OracleMode::ld, 2, 0, p, 1, E);
    double b = local_oracle(OracleMode::ld, 2, 0, p, 1, E + 4);
    DkTable t(2);
    double bound = t.at(static_cast<uint8_t>(E)) *
                   std::pow(static_cast<double>(p), -(static_cast<double>(E) - 1.0));
    CHECK(std::abs(a - b) <= bound);
  }
}

TEST_CASE("oracle equivalence: closed form vs p-adic enumeration") {
  const std::pair<double, double> kl_pairs[] = {{2, 2}, {3, 2}, {2.5, 2.5}};
  for (uint64_t p : {2, 3, 5, 7}) {
    uint32_t E = oracle_E(p);
    for (int64_t h = -12; h <= 12; ++h) {
      if (h == 0) continue;
      for (auto [k, l] : kl_pairs) {
        double closed = local_factor_dd(k, l, p, h, 1e-13).value;
        double oracle = local_oracle(OracleMode::dd, k, l, p, h, E);
        CHECK(std::abs(closed - oracle) <= oracle_tail_dd(k, l, p, E));
      }
      for (double k : {2.0, 3.0, 2.5}) {
        double closed = local_factor_ld(k, p, h, 1e-13).value;
        double oracle = local_oracle(OracleMode::ld, k, 0, p, h, E);
        CHECK(std::abs(closed - oracle) <= oracle_tail_ld(k, p, E));
      }
    }
  }
}

TEST_CASE("zeta reference values") {
  CHECK(zeta_reference(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
  CHECK(zeta_reference(6.0) == doctest::Approx(std::pow(M_PI, 6) / 945.0).epsilon(1e-12));
  CHECK_THROWS_AS(zeta_reference(0.5), std::invalid_argument);
}

TEST_CASE("constants: Ingham and Titchmarsh anchors") {
  double inv_zeta2 = 1.0 / zeta_reference(2.0);

  // Ingham: prod_p S_{2,2,p}(h) = (6/pi^2) sigma_{-1}(h) for h = 1..24
  for (int64_t h = 1; h <= 24; ++h) {
    SingularConstant c = constant_dd(2, 2, h, 1e-6);
    double sigma = 0;
    for (int64_t d = 1; d <= h; ++d)
      if (h % d == 0) sigma += 1.0 / static_cast<double>(d);
    CHECK(c.product == doctest::Approx(inv_zeta2 * sigma).epsilon(1e-4));
    CHECK(c.value > 0);
    CHECK(c.tail_bound <= 1e-6);
  }
  // Gamma(2) = 1, so value == product here
  SingularConstant c1 = constant_dd(2, 2, 1, 1e-7);
  CHECK(c1.value == doctest::Approx(0.607927).epsilon(1e-5));
  SingularConstant c2 = constant_dd(2, 2, 2, 1e-7);
  CHECK(c2.value == doctest::Approx(0.911891).epsilon(1e-5));

  // Titchmarsh: prod_p S_{2,p}(1) = zeta(2) zeta(3) / zeta(6)
  double tref = zeta_reference(2.0) * zeta_reference(3.0) / zeta_reference(6.0);
  SingularConstant t = constant_ld(2, 1, 1e-7);
  CHECK(t.product == doctest::Approx(tref).epsilon(1e-4));
  CHECK(t.value == doctest::Approx(1.943596).epsilon(1e-4));
}

TEST_CASE("constant symmetries and support-dependence") {
  SingularConstant a = constant_dd(2.5, 3.0, 6, 1e-8);
  SingularConstant b = constant_dd(3.0, 2.5, -6, 1e-8);
  SingularConstant c = constant_dd(2.5, 3.0, -6, 1e-8);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  CHECK(a.value == doctest::Approx(c.value).epsilon(1e-12));

  // Lambda-side constants depend only on the prime support of h
  SingularConstant s12 = constant_ld(2, 12, 1e-8);
  SingularConstant s18 = constant_ld(2, 18, 1e-8);
  CHECK(s12.value == doctest::Approx(s18.value).epsilon(1e-12));

  CHECK_THROWS_AS(constant_dd(2, 2, 0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(constant_ld(2, 0, 1e-6), std::invalid_argument);
}

TEST_CASE("Euler product convergence: tightening tol moves value within tail bound") {
  for (int64_t h : {1, 6}) {
    SingularConstant loose = constant_dd(2, 2, h, 1e-4);
    SingularConstant tight = constant_dd(2, 2, h, 1e-4 / 16.0);
    CHECK(tight.p_max > loose.p_max);
    double rel = std::abs(tight.value - loose.value) / loose.value;
    CHECK(rel <= loose.tail_bound * 1.5 + 1e-12);
  }
}
