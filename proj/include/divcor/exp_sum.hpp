#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "divcor/arith_fn.hpp"
#include "divcor/characters.hpp"
#include "divcor/util.hpp"

namespace divcor {

// Finite union of circle arcs around reduced fractions, normalized to [0,1)
// and merged into disjoint intervals.
class ArcSet {
 public:
  struct Arc {
    uint64_t a, q;     // reduced fraction a/q
    double halfwidth;
  };

  static ArcSet from_arcs(std::vector<Arc> arcs);
  static ArcSet full_circle();
  static ArcSet empty();

  const std::vector<Arc>& arcs() const { return arcs_; }
  // merged disjoint intervals [lo, hi) in [0, 1), wrap handled by splitting
  const std::vector<std::pair<double, double>>& intervals() const { return merged_; }

  double measure() const;
  bool contains(double alpha) const;
  bool merged_any() const { return merged_flag_; }
  size_t arc_count() const { return arcs_.size(); }

  // the minor arcs: gaps of this set in [0, 1)
  ArcSet complement() const;

 private:
  std::vector<Arc> arcs_;
  std::vector<std::pair<double, double>> merged_;
  bool merged_flag_ = false;
};

// Major arcs M_{Q,delta}: union over q <= Q, (a,q) = 1 of [a/q - delta, a/q + delta].
ArcSet major_arcs(uint64_t Q, double delta);

// S_f(alpha) = sum_n f(n) e(n alpha), direct compensated summation; the phase
// n*alpha is reduced mod 1 in extended precision before exponentiation.
cplx sf_point(const ArithSeq& seq, double alpha);

// S_f(j/N) for all j via one FFT of the zero-padded sequence with the offset
// phase applied exactly (integer arithmetic mod N).  N power of two,
// N >= 2 * window length.
std::vector<cplx> sf_grid(const ArithSeq& seq, size_t N);

struct RationalApprox {
  uint64_t a = 0;
  uint64_t q = 1;
  double distance = 0;  // || alpha - a/q ||_T
};

// Least q <= Q with ||alpha - a/q|| <= 1/(qQ) for some (a, q) = 1
// (Dirichlet approximation; existence guaranteed).
RationalApprox rational_approx(double alpha, uint64_t Q);

struct GreedySeparation {
  std::vector<double> representatives;
  std::vector<size_t> assignment;  // per input frequency: representative index
  std::vector<size_t> batch_sizes;
};

// Processes frequencies in input order; a frequency becomes a representative
// iff its circle distance to every existing representative is >= spacing,
// otherwise it joins the nearest representative's batch.
GreedySeparation greedy_separate(const std::vector<double>& freqs, double spacing);

// Main-term integral over the arcs: Riemann sum of S_f(alpha) conj(S_g(alpha))
// e(alpha h) on an oversampled FFT grid, boundary cells weighted by fractional
// coverage.  Grid spacing 1/N must be <= delta/8 for every arc halfwidth.
cplx major_arc_integral(const ArithSeq& f, const ArithSeq& g, const ArcSet& arcs,
                        int64_t h, uint32_t oversample = 8);

// Same, but reusing precomputed grids (one transform serves all h and arcs).
struct CorrelationGrids {
  size_t N = 0;
  std::vector<cplx> F, G;
};
CorrelationGrids make_correlation_grids(const ArithSeq& f, const ArithSeq& g,
                                        uint32_t oversample);
cplx major_arc_integral_from_grids(const CorrelationGrids& grids,
                                   const ArcSet& arcs, int64_t h);

// Exact splitting of S_f(a/q + beta) by (n, q) into the principal-character
// part (the M~_f(d; beta) terms) and the non-principal remainder E_f.
struct MEDecomposition {
  std::vector<std::pair<uint64_t, cplx>> m_terms;  // d | q -> M~_f(d; beta)
  cplx e_term{0, 0};
  cplx reconstructed{0, 0};  // sum_d mu(q/d)/phi(q/d) M~_f(d) + e_term
};

class CharacterTableCache {
 public:
  const CharacterTable& get(uint64_t q);

 private:
  std::map<uint64_t, std::unique_ptr<CharacterTable>> cache_;
};

MEDecomposition me_decompose(const ArithSeq& f, uint64_t a, uint64_t q,
                             double beta, CharacterTableCache& tables);

struct GallagherReport {
  double Y = 0;
  double lhs = 0;    // int_{-1/2Y}^{1/2Y} |S_f|^2
  double rhs = 0;    // int |1/Y sum_{x<=n<=x+Y} f(n)|^2 dx
  double ratio = 0;  // lhs / rhs, 0 when both vanish
};

GallagherReport gallagher_ratio(const ArithSeq& f, double Y);

}  // namespace divcor
