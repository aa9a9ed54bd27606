#include "divcor/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace divcor {

namespace {
int g_threads = 0;  // 0 = library default
}

void set_thread_count(int n) {
  g_threads = n;
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

int thread_count() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

double chunked_sum(size_t n, const std::function<double(size_t)>& term,
                   size_t chunk) {
  return chunked_block_sum(
      n,
      [&](size_t lo, size_t hi) {
        KahanSum s;
        for (size_t i = lo; i < hi; ++i) s.add(term(i));
        return s.value();
      },
      chunk);
}

double chunked_block_sum(size_t n,
                         const std::function<double(size_t, size_t)>& block,
                         size_t chunk) {
  if (n == 0) return 0.0;
  size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks);
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    size_t lo = static_cast<size_t>(c) * chunk;
    size_t hi = std::min(lo + chunk, n);
    partial[static_cast<size_t>(c)] = block(lo, hi);
  }
  KahanSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

cplx chunked_block_csum(size_t n,
                        const std::function<cplx(size_t, size_t)>& block,
                        size_t chunk) {
  if (n == 0) return {0.0, 0.0};
  size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<cplx> partial(nchunks);
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    size_t lo = static_cast<size_t>(c) * chunk;
    size_t hi = std::min(lo + chunk, n);
    partial[static_cast<size_t>(c)] = block(lo, hi);
  }
  KahanCSum total;
  for (cplx v : partial) total.add(v);
  return total.value();
}

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::pair<uint64_t, uint8_t>> factorize_u64(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize_u64: n must be >= 1");
  std::vector<std::pair<uint64_t, uint8_t>> fac;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      uint8_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      fac.emplace_back(p, e);
    }
  }
  if (n > 1) fac.emplace_back(n, 1);
  return fac;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
    if (n % p == 0) return false;
  return true;
}

std::vector<uint64_t> divisors_from_factorization(
    const std::vector<std::pair<uint64_t, uint8_t>>& fac) {
  std::vector<uint64_t> divs{1};
  for (auto [p, e] : fac) {
    size_t base = divs.size();
    uint64_t pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  return divs;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("pearson: size mismatch");
  size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double percentile_nearest_rank(std::vector<double> sample, double p) {
  if (sample.empty())
    throw std::invalid_argument("percentile: empty sample");
  std::sort(sample.begin(), sample.end());
  if (p <= 0) return sample.front();
  if (p >= 100) return sample.back();
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * sample.size()));
  if (rank == 0) rank = 1;
  return sample[rank - 1];
}

uint64_t fnv1a(const void* data, size_t len, uint64_t seed) {
  const unsigned char* b = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace divcor
