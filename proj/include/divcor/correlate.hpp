#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "divcor/anatomy.hpp"
#include "divcor/arith_fn.hpp"
#include "divcor/exp_sum.hpp"

namespace divcor {

// Correlations sum_n f(n) g(n+h) for h in [-h_max, h_max]; index h + h_max.
// g follows the extension-by-zero convention outside its support.
std::vector<double> correlation_naive(const ArithSeq& f, const ArithSeq& g,
                                      uint64_t h_max);

// Same values via segmented FFT cross-correlation; matches the naive path to
// 1e-9 relative.
std::vector<double> correlation_fft(const ArithSeq& f, const ArithSeq& g,
                                    uint64_t h_max);

struct CorrelationRow {
  int64_t h = 0;
  double empirical = 0;
  double main_term = 0;
  double ratio = 0;
};

struct CorrelationReport {
  uint64_t X = 0, H = 0;
  double k = 0, l = 0;
  bool lambda_mode = false;
  bool restricted = false;
  bool extended_window = true;
  std::vector<CorrelationRow> rows;  // 0 < |h| <= H
  double deviation = 0;              // Delta of the main theorem's statistic
  double pearson_h_profile = 0;      // corr(empirical, main term) across h
  double sieve_seconds = 0, corr_seconds = 0, const_seconds = 0;
};

struct Theorem1Options {
  bool restrict_S = false;
  std::optional<AnatomyOverrides> schedule;  // required when restrict_S
  bool extended_window = true;  // factor g over (X, 2X+H] instead of zero-extending
  double tol = 1e-6;            // singular-constant tolerance
  uint32_t segment_len = 1u << 20;
};

// Desk-scale version of the main correlation statistic: empirical shifted
// correlations against C * X (log X)^{k+l-2} rows plus the normalized
// aggregate deviation.
CorrelationReport theorem1_report(uint64_t X, uint64_t H, double k, double l,
                                  const Theorem1Options& opt = {});

// Lambda-side variant: sum_n tildeLambda(n) d_k(n+h) against C_{k,h} X (log X)^{k-1}.
CorrelationReport theorem1_report_lambda(uint64_t X, uint64_t H, double k,
                                         const Theorem1Options& opt = {});

struct MinorArcEnergy {
  std::vector<double> remainder_mod;  // |full - major-arc| per h in [-H, H]
  double aggregate_S = 0;             // sum over 0 < |h| <= H of |remainder|^2
  double aggregate_normalized = 0;    // / (H X^2)
};

MinorArcEnergy minor_arc_energy(const ArithSeq& f, const ArithSeq& g, uint64_t Q,
                                double delta, uint64_t h_max, uint32_t oversample);

struct MajorArcRow {
  int64_t h;
  double mt_real;
  double mt_imag;
  double main_term;
  double ratio;
};

struct MajorArcReport {
  uint64_t X = 0, H = 0, Q = 0;
  double k = 0, l = 0, delta = 0;
  std::vector<MajorArcRow> rows;
  double pearson = 0;
};

// Numerical main-term integrals over M_{Q,delta} for f_k = d_k 1_S against the
// singular-series prediction, per h.
MajorArcReport major_arc_report(uint64_t X, uint64_t H, double k, double l,
                                uint64_t Q, double delta,
                                const AnatomyOverrides& schedule,
                                uint32_t oversample = 8, double tol = 1e-6);

}  // namespace divcor
