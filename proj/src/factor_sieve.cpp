#include "divcor/factor_sieve.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "divcor/util.hpp"

namespace divcor {

uint64_t PrimeTable::count_upto(uint64_t x) const {
  if (x > limit) throw std::out_of_range("PrimeTable::count_upto beyond limit");
  auto it = std::upper_bound(primes.begin(), primes.end(), x);
  return static_cast<uint64_t>(it - primes.begin());
}

PrimeTable primes_upto(uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("primes_upto: limit must be >= 2");
  PrimeTable t;
  t.limit = limit;
  std::vector<uint8_t> is_comp(limit + 1, 0);
  for (uint64_t i = 2; i * i <= limit; ++i)
    if (!is_comp[i])
      for (uint64_t j = i * i; j <= limit; j += i) is_comp[j] = 1;
  for (uint64_t i = 2; i <= limit; ++i)
    if (!is_comp[i]) t.primes.push_back(i);
  return t;
}

FactorView FactorWindow::factors_by_index(uint64_t i) const {
  uint64_t beg = (i == 0) ? 0 : offsets[i - 1];
  uint64_t end = offsets[i];
  return {fprimes.data() + beg, fexps.data() + beg,
          static_cast<uint32_t>(end - beg)};
}

FactorView FactorWindow::factors(uint64_t n) const {
  if (!contains(n)) throw std::out_of_range("FactorWindow::factors: n outside window");
  return factors_by_index(n - x_lo - 1);
}

namespace {

struct SegmentOut {
  std::vector<uint64_t> offsets;  // end offsets, local
  std::vector<uint64_t> primes;
  std::vector<uint8_t> exps;
};

// Factor the segment (seg_lo, seg_hi].  Small-prime events are generated in
// ascending prime order and counting-sorted by index, which keeps every
// per-n list sorted; the cofactor (if any) is the largest prime and lands last.
SegmentOut factor_segment(uint64_t seg_lo, uint64_t seg_hi,
                          const std::vector<uint64_t>& sieve_primes) {
  const uint32_t len = static_cast<uint32_t>(seg_hi - seg_lo);
  std::vector<uint64_t> rem(len);
  for (uint32_t i = 0; i < len; ++i) rem[i] = seg_lo + 1 + i;

  struct Event {
    uint32_t idx;
    uint64_t p;
    uint8_t e;
  };
  std::vector<Event> events;
  events.reserve(static_cast<size_t>(len) * 4);

  for (uint64_t p : sieve_primes) {
    uint64_t first = ((seg_lo + 1) + p - 1) / p * p;
    for (uint64_t m = first; m <= seg_hi; m += p) {
      uint32_t idx = static_cast<uint32_t>(m - seg_lo - 1);
      uint64_t r = rem[idx];
      uint8_t e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      if (e) {
        rem[idx] = r;
        events.push_back({idx, p, e});
      }
    }
  }
  std::vector<uint32_t> counts(len, 0);
  for (const Event& ev : events) counts[ev.idx]++;
  for (uint32_t i = 0; i < len; ++i)
    if (rem[i] > 1) counts[i]++;

  SegmentOut out;
  out.offsets.resize(len);
  uint64_t total = 0;
  for (uint32_t i = 0; i < len; ++i) {
    total += counts[i];
    out.offsets[i] = total;
  }
  out.primes.resize(total);
  out.exps.resize(total);

  std::vector<uint32_t> cursor(len);
  for (uint32_t i = 0; i < len; ++i)
    cursor[i] = static_cast<uint32_t>((i == 0 ? 0 : out.offsets[i - 1]));
  for (const Event& ev : events) {
    uint32_t c = cursor[ev.idx]++;
    out.primes[c] = ev.p;
    out.exps[c] = ev.e;
  }
  for (uint32_t i = 0; i < len; ++i) {
    if (rem[i] > 1) {
      uint32_t c = cursor[i]++;
      out.primes[c] = rem[i];
      out.exps[c] = 1;
    }
  }
  return out;
}

}  // namespace

FactorWindow build_range(uint64_t lo, uint64_t hi, uint32_t segment_len) {
  if (hi <= lo) throw std::invalid_argument("build_range: need hi > lo");
  if (hi > (uint64_t(1) << 62)) throw std::range_error("build_range: hi overflows headroom");
  if (segment_len < 1024) throw std::invalid_argument("build_range: segment_len must be >= 1024");

  uint64_t root = isqrt_u64(hi);
  PrimeTable pt = primes_upto(std::max<uint64_t>(root, 2));
  // drop primes > sqrt(hi) (possible when root < 2 was clamped)
  std::vector<uint64_t> sieve_primes;
  for (uint64_t p : pt.primes)
    if (p <= root) sieve_primes.push_back(p);

  uint64_t len = hi - lo;
  uint64_t nseg = (len + segment_len - 1) / segment_len;
  std::vector<SegmentOut> segs(nseg);

#pragma omp parallel for schedule(dynamic)
  for (long long s = 0; s < static_cast<long long>(nseg); ++s) {
    uint64_t seg_lo = lo + static_cast<uint64_t>(s) * segment_len;
    uint64_t seg_hi = std::min(seg_lo + segment_len, hi);
    segs[static_cast<size_t>(s)] = factor_segment(seg_lo, seg_hi, sieve_primes);
  }

  FactorWindow w;
  w.x_lo = lo;
  w.x_hi = hi;
  uint64_t total_pairs = 0;
  for (const auto& s : segs) total_pairs += s.primes.size();
  w.offsets.reserve(len);
  w.fprimes.reserve(total_pairs);
  w.fexps.reserve(total_pairs);
  uint64_t base = 0;
  for (const auto& s : segs) {
    for (uint64_t off : s.offsets) w.offsets.push_back(base + off);
    w.fprimes.insert(w.fprimes.end(), s.primes.begin(), s.primes.end());
    w.fexps.insert(w.fexps.end(), s.exps.begin(), s.exps.end());
    base += s.primes.size();
  }
  return w;
}

FactorWindow build_window(uint64_t x, uint32_t segment_len) {
  if (x < 16) throw std::invalid_argument("build_window: x must be >= 16");
  if (x > (uint64_t(1) << 61)) throw std::range_error("build_window: 2x overflows headroom");
  return build_range(x, 2 * x, segment_len);
}

namespace {

constexpr char kMagic[4] = {'D', 'K', 'W', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
  // little-endian on all supported targets
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("window cache: truncated file");
  return v;
}

}  // namespace

void write_window(const FactorWindow& w, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_window: cannot open " + path);
  os.write(kMagic, 4);
  put(os, kVersion);
  put(os, w.x_lo);
  put(os, w.length());
  for (uint64_t off : w.offsets) put(os, off);
  for (size_t i = 0; i < w.fprimes.size(); ++i) {
    put(os, w.fprimes[i]);
    put(os, w.fexps[i]);
  }
  if (!os) throw std::runtime_error("write_window: write failed");
}

FactorWindow read_window(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_window: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("window cache: bad magic");
  uint32_t ver = get<uint32_t>(is);
  if (ver != kVersion) throw std::runtime_error("window cache: unsupported version");
  FactorWindow w;
  w.x_lo = get<uint64_t>(is);
  uint64_t len = get<uint64_t>(is);
  w.x_hi = w.x_lo + len;
  w.offsets.resize(len);
  for (uint64_t i = 0; i < len; ++i) w.offsets[i] = get<uint64_t>(is);
  uint64_t pairs = len ? w.offsets.back() : 0;
  w.fprimes.resize(pairs);
  w.fexps.resize(pairs);
  for (uint64_t i = 0; i < pairs; ++i) {
    w.fprimes[i] = get<uint64_t>(is);
    w.fexps[i] = get<uint8_t>(is);
  }
  return w;
}

FactorWindow window_cache_roundtrip(const FactorWindow& w, const std::string& path) {
  write_window(w, path);
  return read_window(path);
}

}  // namespace divcor
