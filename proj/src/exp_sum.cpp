#include "divcor/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "divcor/fft.hpp"

namespace divcor {

namespace {

struct Segment {
  double lo, hi;
  size_t src;
};

}  // namespace

ArcSet ArcSet::from_arcs(std::vector<Arc> arcs) {
  ArcSet s;
  s.arcs_ = std::move(arcs);

  std::vector<Segment> segs;
  double total = 0;
  for (size_t i = 0; i < s.arcs_.size(); ++i) {
    const Arc& arc = s.arcs_[i];
    if (arc.q == 0 || std::gcd(arc.a % std::max<uint64_t>(arc.q, 1), arc.q) != 1)
      if (!(arc.a == 0 && arc.q == 1))
        throw std::invalid_argument("ArcSet: arcs need reduced fractions");
    if (arc.halfwidth <= 0) throw std::invalid_argument("ArcSet: halfwidth must be > 0");
    double c = frac_reduce(static_cast<double>(arc.a) / static_cast<double>(arc.q));
    double lo = c - arc.halfwidth;
    double hi = c + arc.halfwidth;
    total += hi - lo;
    if (hi - lo >= 1.0) {
      segs.push_back({0.0, 1.0, i});
      continue;
    }
    if (lo < 0) {
      segs.push_back({lo + 1.0, 1.0, i});
      segs.push_back({0.0, hi, i});
    } else if (hi > 1.0) {
      segs.push_back({lo, 1.0, i});
      segs.push_back({0.0, hi - 1.0, i});
    } else {
      segs.push_back({lo, hi, i});
    }
  }
  if (segs.empty()) return s;

  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  std::vector<Segment> merged;
  merged.push_back(segs[0]);
  for (size_t i = 1; i < segs.size(); ++i) {
    Segment& cur = merged.back();
    if (segs[i].lo <= cur.hi) {
      if (segs[i].src != cur.src) s.merged_flag_ = true;
      cur.hi = std::max(cur.hi, segs[i].hi);
    } else {
      merged.push_back(segs[i]);
    }
  }
  for (const Segment& m : merged) s.merged_.emplace_back(m.lo, m.hi);
  if (total >= 1.0) {
    s.merged_.assign(1, {0.0, 1.0});
    s.merged_flag_ = true;
  }
  return s;
}

ArcSet ArcSet::full_circle() {
  ArcSet s;
  s.merged_.emplace_back(0.0, 1.0);
  return s;
}

ArcSet ArcSet::empty() { return ArcSet(); }

double ArcSet::measure() const {
  double m = 0;
  for (auto [lo, hi] : merged_) m += hi - lo;
  return std::min(m, 1.0);
}

bool ArcSet::contains(double alpha) const {
  double x = frac_reduce(alpha);
  auto it = std::upper_bound(
      merged_.begin(), merged_.end(), x,
      [](double v, const std::pair<double, double>& seg) { return v < seg.first; });
  if (it == merged_.begin()) return false;
  --it;
  return x >= it->first && x < it->second;
}

ArcSet ArcSet::complement() const {
  ArcSet out;
  double cursor = 0.0;
  for (auto [lo, hi] : merged_) {
    if (lo > cursor) out.merged_.emplace_back(cursor, lo);
    cursor = hi;
  }
  if (cursor < 1.0) out.merged_.emplace_back(cursor, 1.0);
  return out;
}

ArcSet major_arcs(uint64_t Q, double delta) {
  if (Q < 1) throw std::invalid_argument("major_arcs: Q must be >= 1");
  if (!(delta > 0 && delta < 0.5))
    throw std::invalid_argument("major_arcs: need 0 < delta < 1/2");
  std::vector<ArcSet::Arc> arcs;
  arcs.push_back({0, 1, delta});
  for (uint64_t q = 2; q <= Q; ++q)
    for (uint64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) arcs.push_back({a, q, delta});
  return ArcSet::from_arcs(std::move(arcs));
}

cplx sf_point(const ArithSeq& seq, double alpha) {
  const uint64_t n0 = seq.x_lo + 1;
  return chunked_block_csum(seq.values.size(), [&](size_t lo, size_t hi) {
    KahanCSum s;
    for (size_t i = lo; i < hi; ++i) {
      double v = seq.values[i];
      if (v == 0.0) continue;
      s.add(v * e2pi(frac_mul(n0 + i, alpha)));
    }
    return s.value();
  });
}

std::vector<cplx> sf_grid(const ArithSeq& seq, size_t N) {
  if (!is_pow2(N)) throw std::invalid_argument("sf_grid: N must be a power of two");
  if (N < 2 * seq.values.size())
    throw std::invalid_argument("sf_grid: N too small (aliasing); need N >= 2 * length");
  std::vector<cplx> buf(N, cplx(0, 0));
  for (size_t i = 0; i < seq.values.size(); ++i) buf[i] = seq.values[i];
  fft(buf, /*inverse=*/true);  // e(+ i j / N) kernel, unnormalized
  const uint64_t n0 = (seq.x_lo + 1) % N;
  for (size_t j = 0; j < N; ++j) {
    uint64_t m = static_cast<uint64_t>(
        (unsigned __int128)n0 * (j % N) % N);
    buf[j] *= e2pi(static_cast<double>(m) / static_cast<double>(N));
  }
  return buf;
}

namespace {

std::optional<RationalApprox> try_denominator(double x, uint64_t q, uint64_t Q) {
  double f = frac_mul(q, x);
  double dist = std::min(f, 1.0 - f) / static_cast<double>(q);
  if (dist > 1.0 / (static_cast<double>(q) * static_cast<double>(Q)))
    return std::nullopt;
  uint64_t a = static_cast<uint64_t>(std::llround(static_cast<double>(q) * x)) % q;
  uint64_t g = std::gcd(a, q);
  if (a == 0) g = q;  // 0/q reduces to 0/1
  return RationalApprox{a / g, q / g, dist};
}

}  // namespace

RationalApprox rational_approx(double alpha, uint64_t Q) {
  if (Q < 1) throw std::invalid_argument("rational_approx: Q must be >= 1");
  double x = frac_reduce(alpha);

  // Walk continued-fraction convergent denominators.  Convergents are the
  // best approximations of the second kind: ||q alpha|| >= ||q_i alpha|| for
  // all q < q_{i+1}, so the first convergent meeting ||q alpha|| <= 1/Q is
  // the minimal denominator overall.
  uint64_t q_prev = 0, q_cur = 1;
  double frac = x;
  for (int iter = 0; iter < 128 && q_cur <= Q; ++iter) {
    if (auto hit = try_denominator(x, q_cur, Q)) return *hit;
    if (frac < 1e-18) break;
    double inv = 1.0 / frac;
    double af = std::floor(inv);
    if (af > static_cast<double>(Q) * 2.0) break;  // next denominator overshoots
    uint64_t a = static_cast<uint64_t>(af);
    frac = inv - af;
    uint64_t q_next = a * q_cur + q_prev;
    q_prev = q_cur;
    q_cur = q_next;
  }

  // floating-point safety net: exhaustive scan with the same predicate
  for (uint64_t q = 1; q <= Q; ++q)
    if (auto hit = try_denominator(x, q, Q)) return *hit;
  throw std::logic_error("rational_approx: Dirichlet guarantee violated");
}

GreedySeparation greedy_separate(const std::vector<double>& freqs, double spacing) {
  if (spacing <= 0) throw std::invalid_argument("greedy_separate: spacing must be > 0");
  GreedySeparation out;
  out.assignment.resize(freqs.size());
  for (size_t i = 0; i < freqs.size(); ++i) {
    double f = frac_reduce(freqs[i]);
    double best = 2.0;
    size_t best_rep = 0;
    for (size_t r = 0; r < out.representatives.size(); ++r) {
      double d = circle_dist(f, out.representatives[r]);
      if (d < best) {
        best = d;
        best_rep = r;
      }
    }
    if (out.representatives.empty() || best >= spacing) {
      out.representatives.push_back(f);
      out.batch_sizes.push_back(1);
      out.assignment[i] = out.representatives.size() - 1;
    } else {
      out.batch_sizes[best_rep]++;
      out.assignment[i] = best_rep;
    }
  }
  return out;
}

CorrelationGrids make_correlation_grids(const ArithSeq& f, const ArithSeq& g,
                                        uint32_t oversample) {
  if (oversample < 8)
    throw std::invalid_argument("correlation grids: oversample must be >= 8");
  size_t maxlen = std::max(f.values.size(), g.values.size());
  size_t N = next_pow2(static_cast<size_t>(oversample) * next_pow2(maxlen));
  CorrelationGrids grids;
  grids.N = N;
  grids.F = sf_grid(f, N);
  grids.G = sf_grid(g, N);
  return grids;
}

cplx major_arc_integral_from_grids(const CorrelationGrids& grids,
                                   const ArcSet& arcs, int64_t h) {
  const size_t N = grids.N;
  if (arcs.intervals().empty()) return {0, 0};

  // every arc must be resolved by at least 8 cells per halfwidth
  for (const auto& a : arcs.arcs()) {
    if (1.0 / static_cast<double>(N) > a.halfwidth / 8.0)
      throw std::invalid_argument("major_arc_integral: grid too coarse for delta");
  }

  const double dN = static_cast<double>(N);
  const uint64_t hm = static_cast<uint64_t>(((h % static_cast<int64_t>(N)) +
                                             static_cast<int64_t>(N)) %
                                            static_cast<int64_t>(N));
  KahanCSum total;
  for (auto [lo, hi] : arcs.intervals()) {
    // cells [(j-1/2)/N, (j+1/2)/N) overlapping [lo, hi)
    int64_t j_first = static_cast<int64_t>(std::floor(lo * dN - 0.5)) + 1;
    int64_t j_last = static_cast<int64_t>(std::ceil(hi * dN + 0.5)) - 1;
    for (int64_t j = j_first; j <= j_last; ++j) {
      double cell_lo = (static_cast<double>(j) - 0.5) / dN;
      double cell_hi = (static_cast<double>(j) + 0.5) / dN;
      double w = (std::min(hi, cell_hi) - std::max(lo, cell_lo)) * dN;
      if (w <= 0) continue;
      w = std::min(w, 1.0);
      size_t jj = static_cast<size_t>((j % static_cast<int64_t>(N) +
                                       static_cast<int64_t>(N)) %
                                      static_cast<int64_t>(N));
      uint64_t m = static_cast<uint64_t>((unsigned __int128)jj * hm % N);
      cplx term = grids.F[jj] * std::conj(grids.G[jj]) *
                  e2pi(static_cast<double>(m) / dN);
      total.add(w * term);
    }
  }
  return total.value() / dN;
}

cplx major_arc_integral(const ArithSeq& f, const ArithSeq& g, const ArcSet& arcs,
                        int64_t h, uint32_t oversample) {
  CorrelationGrids grids = make_correlation_grids(f, g, oversample);
  return major_arc_integral_from_grids(grids, arcs, h);
}

const CharacterTable& CharacterTableCache::get(uint64_t q) {
  auto it = cache_.find(q);
  if (it == cache_.end())
    it = cache_.emplace(q, std::make_unique<CharacterTable>(q)).first;
  return *it->second;
}

MEDecomposition me_decompose(const ArithSeq& f, uint64_t a, uint64_t q,
                             double beta, CharacterTableCache& tables) {
  if (q == 0 || q > 10000)
    throw std::invalid_argument("me_decompose: need 1 <= q <= 10^4");
  if (q > 1 && std::gcd(a % q, q) != 1)
    throw std::invalid_argument("me_decompose: need gcd(a, q) = 1");

  MEDecomposition out;
  auto divs = divisors_from_factorization(factorize_u64(q));
  std::sort(divs.begin(), divs.end());

  KahanCSum principal;
  KahanCSum etotal;
  for (uint64_t d : divs) {
    uint64_t qd = q / d;
    uint64_t n_lo = f.x_lo / d;        // exclusive
    uint64_t n_hi = f.x_hi() / d;      // inclusive

    // M~_f(d; beta) = sum over n in (X/d, 2X/d], (n, q/d) = 1 of f(dn) e(dn beta)
    KahanCSum mt;
    for (uint64_t n = n_lo + 1; n <= n_hi; ++n) {
      if (std::gcd(n, qd) != 1) continue;
      double v = f.at(static_cast<int64_t>(d * n));
      if (v == 0.0) continue;
      mt.add(v * e2pi(frac_mul(d * n, beta)));
    }
    cplx mval = mt.value();
    out.m_terms.emplace_back(d, mval);

    auto bm = basic_multiplicative(qd);
    principal.add(static_cast<double>(bm.mobius) / static_cast<double>(bm.phi) * mval);

    if (qd > 1) {
      const CharacterTable& G = tables.get(qd);
      for (uint64_t ci = 1; ci < G.size(); ++ci) {  // non-principal only
        // W_chi = sum over (l, qd) = 1 of e(l a / qd) conj(chi(l))
        KahanCSum wsum;
        for (uint64_t l = 1; l <= qd; ++l) {
          auto m = G.eval_exponent(ci, l);
          if (!m) continue;
          uint64_t la = static_cast<uint64_t>((unsigned __int128)l * (a % qd) % qd);
          wsum.add(e2pi(static_cast<double>(la) / static_cast<double>(qd)) *
                   std::conj(G.eval(ci, l)));
        }
        // T_chi = sum over n in (X/d, 2X/d] of f(dn) chi(n) e(dn beta)
        KahanCSum tsum;
        for (uint64_t n = n_lo + 1; n <= n_hi; ++n) {
          double v = f.at(static_cast<int64_t>(d * n));
          if (v == 0.0) continue;
          cplx cn = G.eval(ci, n);
          if (cn == cplx(0, 0)) continue;
          tsum.add(v * cn * e2pi(frac_mul(d * n, beta)));
        }
        etotal.add(wsum.value() * tsum.value() / static_cast<double>(G.size()));
      }
    }
  }
  out.e_term = etotal.value();
  out.reconstructed = principal.value() + out.e_term;
  return out;
}

GallagherReport gallagher_ratio(const ArithSeq& f, double Y) {
  if (Y < 1) throw std::invalid_argument("gallagher_ratio: Y must be >= 1");
  GallagherReport rep;
  rep.Y = Y;

  const size_t len = f.values.size();
  bool all_zero = true;
  for (double v : f.values)
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return rep;

  // lhs: cell-weighted quadrature of |S_f|^2 over [-1/(2Y), 1/(2Y)]
  double w = 1.0 / (2.0 * Y);
  size_t N = next_pow2(std::max<size_t>(2 * len, static_cast<size_t>(1024.0 * Y)));
  std::vector<cplx> F = sf_grid(f, N);
  const double dN = static_cast<double>(N);
  KahanSum lhs;
  std::vector<std::pair<double, double>> pieces;
  if (w >= 0.5) {
    pieces.emplace_back(0.0, 1.0);
  } else {
    pieces.emplace_back(0.0, w);
    pieces.emplace_back(1.0 - w, 1.0);
  }
  for (auto [lo, hi] : pieces) {
    int64_t j_first = static_cast<int64_t>(std::floor(lo * dN - 0.5)) + 1;
    int64_t j_last = static_cast<int64_t>(std::ceil(hi * dN + 0.5)) - 1;
    for (int64_t j = j_first; j <= j_last; ++j) {
      double cell_lo = (static_cast<double>(j) - 0.5) / dN;
      double cell_hi = (static_cast<double>(j) + 0.5) / dN;
      double cw = (std::min(hi, cell_hi) - std::max(lo, cell_lo)) * dN;
      if (cw <= 0) continue;
      cw = std::min(cw, 1.0);
      size_t jj = static_cast<size_t>((j % static_cast<int64_t>(N) +
                                       static_cast<int64_t>(N)) %
                                      static_cast<int64_t>(N));
      lhs.add(cw * std::norm(F[jj]));
    }
  }
  rep.lhs = lhs.value() / dN;

  // rhs: exact piecewise-constant integral of |A(x)/Y|^2,
  // A(x) = sum_{x <= n <= x+Y} f(n); term n is present for x in [n-Y, n].
  struct Event {
    double pos;
    double delta;
  };
  std::vector<Event> events;
  events.reserve(2 * len);
  for (size_t i = 0; i < len; ++i) {
    double v = f.values[i];
    if (v == 0.0) continue;
    double n = static_cast<double>(f.x_lo + 1 + i);
    events.push_back({n - Y, v});
    events.push_back({n, -v});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.pos < b.pos; });
  KahanSum rhs;
  KahanSum cur;
  size_t i = 0;
  while (i < events.size()) {
    double pos = events[i].pos;
    while (i < events.size() && events[i].pos == pos) {
      cur.add(events[i].delta);
      ++i;
    }
    if (i < events.size()) {
      double width = events[i].pos - pos;
      double val = cur.value();
      rhs.add(val * val * width);
    }
  }
  rep.rhs = rhs.value() / (Y * Y);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace divcor
