#include "divcor/sequences.hpp"

#include <algorithm>
#include <stdexcept>

namespace divcor {

SequenceSpec SequenceSpec::indicator() { return {"indicator", 1.0, {}, {}}; }

SequenceSpec SequenceSpec::dk_spec(double k) { return {"dk", k, {}, {}}; }

SequenceSpec SequenceSpec::dk_restricted(double k, AnatomyParams ap) {
  return {"dk_restricted", k, std::move(ap), {}};
}

SequenceSpec SequenceSpec::vm_tilde() { return {"vm_tilde", 1.0, {}, {}}; }

SequenceSpec SequenceSpec::tilde_dk_spec(double k, MajorantParams mp) {
  return {"tilde_dk", k, {}, std::move(mp)};
}

SequenceSpec SequenceSpec::gy_nu_spec(MajorantParams mp) {
  return {"gy_nu", 1.0, {}, std::move(mp)};
}

ArithSeq make_sequence(const FactorWindow& window, const SequenceSpec& spec) {
  ArithSeq seq;
  seq.x_lo = window.x_lo;
  seq.values.resize(window.length());
  const uint64_t len = window.length();

  if (spec.name == "indicator") {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i)
      seq.values[i] = 1.0;
  } else if (spec.name == "dk") {
    DkTable t(spec.k);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i)
      seq.values[i] = t(window.factors_by_index(static_cast<uint64_t>(i)));
  } else if (spec.name == "dk_restricted") {
    if (!spec.anatomy) throw std::invalid_argument("dk_restricted needs anatomy params");
    DkTable t(spec.k);
    const AnatomyParams& ap = *spec.anatomy;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i) {
      uint64_t n = window.x_lo + 1 + static_cast<uint64_t>(i);
      // S_{k,X} lives inside (X, 2X]
      if (n <= ap.X || n > 2 * ap.X) {
        seq.values[i] = 0.0;
        continue;
      }
      FactorView f = window.factors_by_index(static_cast<uint64_t>(i));
      seq.values[i] = in_S(ap, f) ? t(f) : 0.0;
    }
  } else if (spec.name == "vm_tilde") {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i) {
      uint64_t n = window.x_lo + 1 + static_cast<uint64_t>(i);
      seq.values[i] = von_mangoldt_tilde(window.factors_by_index(static_cast<uint64_t>(i)), n);
    }
  } else if (spec.name == "tilde_dk") {
    if (!spec.majorant) throw std::invalid_argument("tilde_dk needs majorant params");
    const MajorantParams& mp = *spec.majorant;
    DkTable dkm1(mp.k - 1.0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i) {
      uint64_t n = window.x_lo + 1 + static_cast<uint64_t>(i);
      seq.values[i] = tilde_dk(mp, dkm1, window.factors_by_index(static_cast<uint64_t>(i)), n);
    }
  } else if (spec.name == "gy_nu") {
    if (!spec.majorant) throw std::invalid_argument("gy_nu needs majorant params");
    const MajorantParams& mp = *spec.majorant;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(len); ++i) {
      uint64_t n = window.x_lo + 1 + static_cast<uint64_t>(i);
      seq.values[i] = gy_nu(mp, window.factors_by_index(static_cast<uint64_t>(i)), n);
    }
  } else {
    throw std::invalid_argument("make_sequence: unknown spec name '" + spec.name + "'");
  }
  return seq;
}

ArithSeq make_sequence_streamed(uint64_t lo, uint64_t hi, const SequenceSpec& spec,
                                uint32_t segment_len) {
  if (hi <= lo) throw std::invalid_argument("make_sequence_streamed: need hi > lo");
  ArithSeq seq;
  seq.x_lo = lo;
  seq.values.resize(hi - lo);
  for (uint64_t base = lo; base < hi; base += segment_len) {
    uint64_t top = std::min<uint64_t>(base + segment_len, hi);
    FactorWindow w = build_range(base, top);
    ArithSeq part = make_sequence(w, spec);
    std::copy(part.values.begin(), part.values.end(),
              seq.values.begin() + (base - lo));
  }
  return seq;
}

}  // namespace divcor
