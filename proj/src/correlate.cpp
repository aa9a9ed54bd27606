#include "divcor/correlate.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "divcor/fft.hpp"
#include "divcor/sequences.hpp"
#include "divcor/singular.hpp"
#include "divcor/util.hpp"

namespace divcor {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<double> correlation_naive(const ArithSeq& f, const ArithSeq& g,
                                      uint64_t h_max) {
  if (h_max > f.length() && f.length() > 0)
    throw std::range_error("correlation: h_max exceeds window length");
  const int64_t off = static_cast<int64_t>(f.x_lo) - static_cast<int64_t>(g.x_lo);
  const int64_t len_f = static_cast<int64_t>(f.length());
  const int64_t len_g = static_cast<int64_t>(g.length());
  std::vector<double> corr(2 * h_max + 1, 0.0);

  for (int64_t h = -static_cast<int64_t>(h_max); h <= static_cast<int64_t>(h_max); ++h) {
    int64_t s = h + off;
    int64_t i_lo = std::max<int64_t>(0, -s);
    int64_t i_hi = std::min<int64_t>(len_f, len_g - s);
    if (i_lo >= i_hi) continue;
    double v = chunked_block_sum(
        static_cast<size_t>(i_hi - i_lo),
        [&](size_t lo, size_t hi) {
          KahanSum acc;
          const double* fp = f.values.data() + i_lo;
          const double* gp = g.values.data() + i_lo + s;
          for (size_t i = lo; i < hi; ++i) acc.add(fp[i] * gp[i]);
          return acc.value();
        });
    corr[static_cast<size_t>(h + static_cast<int64_t>(h_max))] = v;
  }
  return corr;
}

std::vector<double> correlation_fft(const ArithSeq& f, const ArithSeq& g,
                                    uint64_t h_max) {
  if (h_max > f.length() && f.length() > 0)
    throw std::range_error("correlation: h_max exceeds window length");
  const int64_t off = static_cast<int64_t>(f.x_lo) - static_cast<int64_t>(g.x_lo);
  const int64_t H = static_cast<int64_t>(h_max);
  const size_t len_f = f.length();
  const size_t len_g = g.length();

  size_t L = std::max(next_pow2(2 * h_max + 1),
                      std::min<size_t>(size_t(1) << 20, next_pow2(std::max<size_t>(len_f, 1))));
  size_t NF = 2 * L;

  std::vector<double> corr(2 * h_max + 1, 0.0);
  std::vector<KahanSum> acc(2 * h_max + 1);

  std::vector<cplx> A(NF), B(NF);
  for (size_t base = 0; base < len_f; base += L) {
    size_t seg = std::min(L, len_f - base);
    std::fill(A.begin(), A.end(), cplx(0, 0));
    std::fill(B.begin(), B.end(), cplx(0, 0));
    for (size_t u = 0; u < seg; ++u) A[u] = f.values[base + u];
    int64_t t0 = static_cast<int64_t>(base) + off - H;
    for (size_t w = 0; w < L + 2 * h_max; ++w) {
      int64_t gi = t0 + static_cast<int64_t>(w);
      if (gi >= 0 && gi < static_cast<int64_t>(len_g))
        B[w] = g.values[static_cast<size_t>(gi)];
    }
    fft(A, false);
    fft(B, false);
    for (size_t m = 0; m < NF; ++m) A[m] = std::conj(A[m]) * B[m];
    fft(A, true);
    for (uint64_t r = 0; r <= 2 * h_max; ++r)
      acc[r].add(A[r].real() / static_cast<double>(NF));
  }
  for (uint64_t r = 0; r <= 2 * h_max; ++r) corr[r] = acc[r].value();
  return corr;
}

namespace {

CorrelationReport theorem1_impl(uint64_t X, uint64_t H, double k, double l,
                                bool lambda_mode, const Theorem1Options& opt) {
  if (H < 1) throw std::invalid_argument("theorem1_report: H must be >= 1");
  if (X < (1u << 16)) throw std::invalid_argument("theorem1_report: X must be >= 2^16");

  CorrelationReport rep;
  rep.X = X;
  rep.H = H;
  rep.k = k;
  rep.l = l;
  rep.lambda_mode = lambda_mode;
  rep.restricted = opt.restrict_S;
  rep.extended_window = opt.extended_window;

  auto t0 = std::chrono::steady_clock::now();
  const uint64_t g_hi = opt.extended_window ? 2 * X + H : 2 * X;
  ArithSeq fseq, gseq;
  if (lambda_mode) {
    fseq = make_sequence_streamed(X, 2 * X, SequenceSpec::vm_tilde(), opt.segment_len);
    gseq = make_sequence_streamed(X, g_hi, SequenceSpec::dk_spec(k), opt.segment_len);
  } else if (opt.restrict_S) {
    if (!opt.schedule)
      throw std::invalid_argument("theorem1_report: restrict_S needs a schedule");
    AnatomyParams apk = params(k, X, *opt.schedule);
    AnatomyParams apl = params(l, X, *opt.schedule);
    fseq = make_sequence_streamed(X, 2 * X, SequenceSpec::dk_restricted(k, apk),
                                  opt.segment_len);
    gseq = make_sequence_streamed(X, g_hi, SequenceSpec::dk_restricted(l, apl),
                                  opt.segment_len);
  } else {
    fseq = make_sequence_streamed(X, 2 * X, SequenceSpec::dk_spec(k), opt.segment_len);
    gseq = make_sequence_streamed(X, g_hi, SequenceSpec::dk_spec(l), opt.segment_len);
  }
  rep.sieve_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<double> corr = correlation_fft(fseq, gseq, H);
  rep.corr_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  double logX = std::log(static_cast<double>(X));
  double exponent = lambda_mode ? (k - 1.0) : (k + l - 2.0);
  double scale = static_cast<double>(X) * std::pow(logX, exponent);

  std::vector<double> mains(H + 1, 0.0);  // by |h|, constants symmetric in h
  for (uint64_t ha = 1; ha <= H; ++ha) {
    SingularConstant c = lambda_mode
                             ? constant_ld(k, static_cast<int64_t>(ha), opt.tol)
                             : constant_dd(k, l, static_cast<int64_t>(ha), opt.tol);
    mains[ha] = c.value * scale;
  }
  rep.const_seconds = seconds_since(t0);

  KahanSum dev;
  std::vector<double> emp_v, mt_v;
  for (int64_t h = -static_cast<int64_t>(H); h <= static_cast<int64_t>(H); ++h) {
    if (h == 0) continue;
    CorrelationRow row;
    row.h = h;
    row.empirical = corr[static_cast<size_t>(h + static_cast<int64_t>(H))];
    row.main_term = mains[static_cast<uint64_t>(std::abs(h))];
    row.ratio = row.main_term != 0 ? row.empirical / row.main_term : 0.0;
    rep.rows.push_back(row);
    dev.add(std::abs(row.empirical - row.main_term));
    emp_v.push_back(row.empirical);
    mt_v.push_back(row.main_term);
  }
  rep.deviation = dev.value() / (static_cast<double>(H) * scale);
  rep.pearson_h_profile = pearson(emp_v, mt_v);
  return rep;
}

}  // namespace

CorrelationReport theorem1_report(uint64_t X, uint64_t H, double k, double l,
                                  const Theorem1Options& opt) {
  return theorem1_impl(X, H, k, l, false, opt);
}

CorrelationReport theorem1_report_lambda(uint64_t X, uint64_t H, double k,
                                         const Theorem1Options& opt) {
  return theorem1_impl(X, H, k, 1.0, true, opt);
}

MinorArcEnergy minor_arc_energy(const ArithSeq& f, const ArithSeq& g, uint64_t Q,
                                double delta, uint64_t h_max, uint32_t oversample) {
  MinorArcEnergy out;
  ArcSet arcs = major_arcs(Q, delta);
  CorrelationGrids grids = make_correlation_grids(f, g, oversample);
  std::vector<double> corr = correlation_fft(f, g, h_max);

  out.remainder_mod.resize(2 * h_max + 1);
  KahanSum agg;
  for (int64_t h = -static_cast<int64_t>(h_max); h <= static_cast<int64_t>(h_max); ++h) {
    cplx mt = major_arc_integral_from_grids(grids, arcs, h);
    cplx rem = cplx(corr[static_cast<size_t>(h + static_cast<int64_t>(h_max))], 0.0) - mt;
    double mod = std::abs(rem);
    out.remainder_mod[static_cast<size_t>(h + static_cast<int64_t>(h_max))] = mod;
    if (h != 0) agg.add(mod * mod);
  }
  out.aggregate_S = agg.value();
  double Xd = static_cast<double>(f.length());
  out.aggregate_normalized = out.aggregate_S / (static_cast<double>(h_max) * Xd * Xd);
  return out;
}

MajorArcReport major_arc_report(uint64_t X, uint64_t H, double k, double l,
                                uint64_t Q, double delta,
                                const AnatomyOverrides& schedule,
                                uint32_t oversample, double tol) {
  MajorArcReport rep;
  rep.X = X;
  rep.H = H;
  rep.Q = Q;
  rep.k = k;
  rep.l = l;
  rep.delta = delta;

  FactorWindow fw = build_window(X);
  AnatomyParams apk = params(k, X, schedule);
  AnatomyParams apl = params(l, X, schedule);
  ArithSeq fseq = make_sequence(fw, SequenceSpec::dk_restricted(k, apk));
  ArithSeq gseq = make_sequence(fw, SequenceSpec::dk_restricted(l, apl));

  ArcSet arcs = major_arcs(Q, delta);
  CorrelationGrids grids = make_correlation_grids(fseq, gseq, oversample);

  double logX = std::log(static_cast<double>(X));
  double scale = static_cast<double>(X) * std::pow(logX, k + l - 2.0);

  std::vector<double> mt_v, main_v;
  for (int64_t h = -static_cast<int64_t>(H); h <= static_cast<int64_t>(H); ++h) {
    if (h == 0) continue;
    cplx mt = major_arc_integral_from_grids(grids, arcs, h);
    SingularConstant c = constant_dd(k, l, h, tol);
    MajorArcRow row;
    row.h = h;
    row.mt_real = mt.real();
    row.mt_imag = mt.imag();
    row.main_term = c.value * scale;
    row.ratio = row.main_term != 0 ? mt.real() / row.main_term : 0.0;
    rep.rows.push_back(row);
    mt_v.push_back(mt.real());
    main_v.push_back(row.main_term);
  }
  rep.pearson = pearson(mt_v, main_v);
  return rep;
}

}  // namespace divcor
