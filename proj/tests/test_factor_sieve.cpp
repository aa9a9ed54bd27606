#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>

#include "divcor/factor_sieve.hpp"
#include "divcor/util.hpp"

using namespace divcor;

namespace {

// independent trial-division factorization used as the oracle
std::vector<std::pair<uint64_t, uint8_t>> trial_factor(uint64_t n) {
  return factorize_u64(n);
}

uint64_t reconstruct(const FactorView& f) {
  unsigned __int128 prod = 1;
  for (uint32_t i = 0; i < f.count; ++i) {
    for (uint8_t e = 0; e < f.exps[i]; ++e) prod *= f.primes[i];
  }
  REQUIRE(prod <= ~uint64_t(0));
  return static_cast<uint64_t>(prod);
}

}  // namespace

TEST_CASE("primes_upto small cases") {
  CHECK(primes_upto(10).primes == std::vector<uint64_t>{2, 3, 5, 7});
  CHECK(primes_upto(2).primes == std::vector<uint64_t>{2});
  CHECK_THROWS_AS(primes_upto(1), std::invalid_argument);
}

TEST_CASE("primes_upto 10^6 count vs independent sieve") {
  PrimeTable t = primes_upto(1000000);
  CHECK(t.primes.size() == 78498);
  // spot-check primality of a random subset by trial division
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    uint64_t p = t.primes[rng() % t.primes.size()];
    CHECK(is_prime_u64(p));
  }
}

TEST_CASE("build_window hand factorizations at x=16") {
  FactorWindow w = build_window(16);
  FactorView f24 = w.factors(24);
  REQUIRE(f24.count == 2);
  CHECK(f24.primes[0] == 2);
  CHECK(f24.exps[0] == 3);
  CHECK(f24.primes[1] == 3);
  CHECK(f24.exps[1] == 1);

  FactorView f17 = w.factors(17);
  REQUIRE(f17.count == 1);
  CHECK(f17.primes[0] == 17);
  CHECK(f17.exps[0] == 1);
}

TEST_CASE("window Omega sum matches per-n trial division at x=10^4") {
  FactorWindow w = build_window(10000);
  uint64_t sum_sieve = 0, sum_trial = 0;
  for (uint64_t n = 10001; n <= 20000; ++n) {
    FactorView f = w.factors(n);
    for (uint32_t i = 0; i < f.count; ++i) sum_sieve += f.exps[i];
    for (auto [p, e] : trial_factor(n)) sum_trial += e;
  }
  CHECK(sum_sieve == sum_trial);
}

TEST_CASE("reconstruction: 1000 random n per window") {
  std::mt19937_64 rng(42);
  for (uint64_t x : {uint64_t(50000), uint64_t(1) << 21}) {
    FactorWindow w = build_window(x);
    for (int i = 0; i < 1000; ++i) {
      uint64_t n = x + 1 + rng() % x;
      CHECK(reconstruct(w.factors(n)) == n);
    }
  }
}

TEST_CASE("primes listed are prime; lists sorted strictly increasing") {
  FactorWindow w = build_window(30000);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    uint64_t n = 30001 + rng() % 30000;
    FactorView f = w.factors(n);
    for (uint32_t j = 0; j < f.count; ++j) {
      CHECK(is_prime_u64(f.primes[j]));
      CHECK(f.exps[j] >= 1);
      if (j > 0) CHECK(f.primes[j] > f.primes[j - 1]);
    }
  }
}

TEST_CASE("build deterministic across segment lengths") {
  FactorWindow a = build_window(70000, 1024);
  FactorWindow b = build_window(70000, 1u << 16);
  CHECK(a == b);
}

TEST_CASE("completeness: single-factor count equals pi(2x) - pi(x)") {
  uint64_t x = 500000;
  FactorWindow w = build_window(x);
  uint64_t count = 0;
  for (uint64_t i = 0; i < w.length(); ++i) {
    FactorView f = w.factors_by_index(i);
    if (f.count == 1 && f.exps[0] == 1) ++count;
  }
  PrimeTable t = primes_upto(2 * x);
  CHECK(count == t.count_upto(2 * x) - t.count_upto(x));
}

TEST_CASE("cache roundtrip is identity; corrupt files rejected") {
  FactorWindow w = build_window(10000);
  std::string path = "test_window_cache.bin";
  FactorWindow r = window_cache_roundtrip(w, path);
  CHECK(r == w);

  // wrong magic
  {
    FILE* fp = fopen(path.c_str(), "r+b");
    REQUIRE(fp);
    fputc('X', fp);
    fclose(fp);
    CHECK_THROWS_WITH_AS(read_window(path), "window cache: bad magic",
                         std::runtime_error);
  }
  // truncated
  write_window(w, path);
  {
    FILE* fp = fopen(path.c_str(), "r+b");
    REQUIRE(fp);
#ifdef _WIN32
    _chsize(_fileno(fp), 64);
#else
    REQUIRE(ftruncate(fileno(fp), 64) == 0);
#endif
    fclose(fp);
    CHECK_THROWS_AS(read_window(path), std::runtime_error);
  }
  remove(path.c_str());
}

TEST_CASE("range and argument errors") {
  CHECK_THROWS_AS(build_window(8), std::invalid_argument);
  CHECK_THROWS_AS(build_window(100, 512), std::invalid_argument);
  CHECK_THROWS_AS(build_window(uint64_t(1) << 62), std::range_error);
  FactorWindow w = build_window(10000);
  CHECK_THROWS_AS(w.factors(10000), std::out_of_range);
  CHECK_THROWS_AS(w.factors(20001), std::out_of_range);
}
