#include "divcor/anatomy.hpp"

#include <cmath>
#include <stdexcept>

#include "divcor/sequences.hpp"
#include "divcor/util.hpp"

namespace divcor {

Interval AnatomyParams::interval(int j) const {
  switch (j) {
    case 1: return Interval(p1, q1);
    case 2: return Interval(p2, q2);
    case 3: return Interval(p3, q3);
    default: throw std::invalid_argument("AnatomyParams::interval: j in {1,2,3}");
  }
}

bool AnatomyParams::intervals_overlap() const {
  return q1 >= p2 || q2 >= p3;
}

AnatomyParams anatomy_endpoints(double k, uint64_t X, const AnatomyOverrides& ov) {
  if (k < 2) throw std::invalid_argument("anatomy: k must be >= 2");
  if (X < 10000) throw std::invalid_argument("anatomy: X must be >= 10^4");

  AnatomyParams ap;
  ap.k = k;
  ap.X = X;
  ap.eps_prime = ov.eps_prime.value_or(0.1);

  double logX = std::log(static_cast<double>(X));
  double llX = std::log(logX);
  double lllX = std::log(llX);
  ap.psi_value = ov.psi.value_or(1.0 / lllX);

  ap.omega_cap = (1.0 + ap.eps_prime) * k * llX;
  ap.large_prime_lo = std::pow(static_cast<double>(X), 1.0 / (llX * llX));
  ap.large_omega_cap = 10.0 * k * lllX;

  if (ov.has_all_endpoints()) {
    // override endpoints are taken verbatim, no clamping
    ap.p1 = *ov.p1;
    ap.q1 = *ov.q1;
    ap.p2 = *ov.p2;
    ap.q2 = *ov.q2;
    ap.p3 = *ov.p3;
    ap.q3 = *ov.q3;
    return ap;
  }
  if (ov.p1 || ov.q1 || ov.p2 || ov.q2 || ov.p3 || ov.q3)
    throw std::invalid_argument("anatomy: endpoint overrides must be all-or-none");

  ap.p1 = std::pow(logX, ap.psi_value);
  ap.q1 = std::pow(logX, 10.0 * k * std::log(k));
  ap.p2 = std::exp(llX * llX);
  ap.q2 = std::exp(std::pow(llX, 2.5));
  ap.p3 = std::exp(std::pow(logX, 0.75));
  ap.q3 = std::exp(std::pow(logX, 5.0 / 6.0));

  double qcap = std::pow(static_cast<double>(X), 1.0 / 6.0);
  double* ps[3] = {&ap.p1, &ap.p2, &ap.p3};
  double* qs[3] = {&ap.q1, &ap.q2, &ap.q3};
  for (int j = 0; j < 3; ++j) {
    if (*qs[j] > qcap) {
      *qs[j] = qcap;
      ap.clamped[2 * j + 1] = true;
    }
    if (*ps[j] < 3.0) {
      *ps[j] = 3.0;
      ap.clamped[2 * j] = true;
    }
  }
  return ap;
}

AnatomyParams params(double k, uint64_t X, const AnatomyOverrides& ov) {
  AnatomyParams ap = anatomy_endpoints(k, X, ov);
  if (!ov.has_all_endpoints()) {
    if (ap.p1 >= ap.q1 || ap.p2 >= ap.q2 || ap.p3 >= ap.q3)
      throw std::invalid_argument(
          "anatomy: interval collapsed after clamping; supply endpoint overrides");
  } else {
    if (!(ap.p1 > 1 && ap.p1 <= ap.q1 && ap.p2 > 1 && ap.p2 <= ap.q2 &&
          ap.p3 > 1 && ap.p3 <= ap.q3))
      throw std::invalid_argument("anatomy: override endpoints need 1 < P_j <= Q_j");
  }
  return ap;
}

AnatomyOverrides desk_schedule(double k, uint64_t X) {
  (void)k;
  // fixed log-powers chosen so the minimal prime product (log X)^{0.8+1.4+2.0}
  // stays well inside (X, 2X] for X >= 2^16
  double logX = std::log(static_cast<double>(X));
  AnatomyOverrides ov;
  ov.p1 = std::pow(logX, 0.8);
  ov.q1 = std::pow(logX, 1.4);
  ov.p2 = std::pow(logX, 1.4);
  ov.q2 = std::pow(logX, 2.0);
  ov.p3 = std::pow(logX, 2.0);
  ov.q3 = std::pow(logX, 2.6);
  return ov;
}

bool in_S(const AnatomyParams& ap, const FactorView& f) {
  uint32_t total = 0;
  uint32_t large = 0;
  uint32_t in_int[3] = {0, 0, 0};
  bool sqfree[3] = {true, true, true};
  const double lo[3] = {ap.p1, ap.p2, ap.p3};
  const double hi[3] = {ap.q1, ap.q2, ap.q3};
  for (uint32_t i = 0; i < f.count; ++i) {
    double p = static_cast<double>(f.primes[i]);
    uint8_t e = f.exps[i];
    total += e;
    if (p >= ap.large_prime_lo) large += e;
    for (int j = 0; j < 3; ++j) {
      if (p >= lo[j] && p <= hi[j]) {
        in_int[j]++;
        if (e > 1) sqfree[j] = false;
      }
    }
  }
  if (total > ap.omega_cap) return false;
  if (large > ap.large_omega_cap) return false;
  for (int j = 0; j < 3; ++j)
    if (in_int[j] == 0 || !sqfree[j]) return false;
  return true;
}

namespace {

struct DiffData {
  std::vector<double> diff;  // d_k(n) on the discarded set, 0 on S
  uint64_t kept = 0, discarded = 0;
  double total_mass = 0, disc_mass = 0;
};

void diff_from_window(const FactorWindow& w, const DkTable& dkt,
                      const AnatomyParams& pk, DiffData& out, uint64_t base_idx) {
  const uint64_t len = w.length();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(len); ++i) {
    FactorView f = w.factors_by_index(static_cast<uint64_t>(i));
    out.diff[base_idx + i] = in_S(pk, f) ? 0.0 : dkt(f);
  }
  KahanSum total, disc;
  for (uint64_t i = 0; i < len; ++i) {
    total.add(dkt(w.factors_by_index(i)));
    double d = out.diff[base_idx + i];
    disc.add(d);
    // d_k never vanishes for k >= 2, so diff == 0 identifies membership
    if (d == 0.0)
      out.kept++;
    else
      out.discarded++;
  }
  out.total_mass += total.value();
  out.disc_mass += disc.value();
}

DiscardedMassReport dm_finish(DiffData& dd, const ArithSeq& g, double k, double l,
                              uint64_t X, uint64_t H) {
  DiscardedMassReport rep;
  rep.k = k;
  rep.l = l;
  rep.X = X;
  rep.H = H;
  const uint64_t len = dd.diff.size();

  // sum over |h| <= H of sum_n diff(n) d_l(n+h); g covers (X-H, 2X+H]
  KahanSum lemma;
  for (int64_t h = -static_cast<int64_t>(H); h <= static_cast<int64_t>(H); ++h) {
    int64_t shift = static_cast<int64_t>(X) + 1 + h -
                    (static_cast<int64_t>(g.x_lo) + 1);
    double part = chunked_block_sum(len, [&](size_t lo_, size_t hi_) {
      KahanSum s;
      for (size_t i = lo_; i < hi_; ++i)
        s.add(dd.diff[i] *
              g.values[static_cast<size_t>(static_cast<int64_t>(i) + shift)]);
      return s.value();
    });
    lemma.add(part);
  }
  rep.lemma_sum = lemma.value();

  double logX = std::log(static_cast<double>(X));
  rep.lemma_normalized =
      rep.lemma_sum / (static_cast<double>(H) * static_cast<double>(X) *
                       std::pow(logX, k + l - 2.0));
  rep.mass_fraction = dd.total_mass > 0 ? dd.disc_mass / dd.total_mass : 0.0;
  rep.kept = dd.kept;
  rep.discarded = dd.discarded;
  return rep;
}

}  // namespace

DiscardedMassReport discarded_mass(const FactorWindow& window, double k, double l,
                                   const AnatomyParams& params_k,
                                   const AnatomyParams& params_l, uint64_t H) {
  if (H > window.length() / 2)
    throw std::invalid_argument("discarded_mass: H too large for window");
  (void)params_l;  // carried in report metadata by callers; the lemma statistic
                   // restricts only the d_k side

  DkTable dkt(k);
  DiffData dd;
  dd.diff.resize(window.length());
  diff_from_window(window, dkt, params_k, dd, 0);

  ArithSeq g = make_sequence_streamed(window.x_lo - H, window.x_hi + H,
                                      SequenceSpec::dk_spec(l));
  return dm_finish(dd, g, k, l, window.x_lo, H);
}

DiscardedMassReport discarded_mass_streamed(double k, double l,
                                            const AnatomyParams& params_k,
                                            const AnatomyParams& params_l,
                                            uint64_t X, uint64_t H,
                                            uint32_t segment_len) {
  if (H > X / 2) throw std::invalid_argument("discarded_mass: H too large");
  (void)params_l;

  DkTable dkt(k);
  DiffData dd;
  dd.diff.resize(X);
  for (uint64_t base = X; base < 2 * X; base += segment_len) {
    uint64_t top = std::min<uint64_t>(base + segment_len, 2 * X);
    FactorWindow w = build_range(base, top);
    diff_from_window(w, dkt, params_k, dd, base - X);
  }
  ArithSeq g = make_sequence_streamed(X - H, 2 * X + H, SequenceSpec::dk_spec(l));
  return dm_finish(dd, g, k, l, X, H);
}

}  // namespace divcor
