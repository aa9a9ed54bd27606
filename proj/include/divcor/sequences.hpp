#pragma once

#include <optional>
#include <string>

#include "divcor/anatomy.hpp"
#include "divcor/arith_fn.hpp"
#include "divcor/majorants.hpp"

namespace divcor {

// Named function specs materializable over a window:
//   indicator | dk(k) | dk_restricted(k, anatomy) | vm_tilde | tilde_dk(k) | gy_nu
struct SequenceSpec {
  std::string name;
  double k = 2.0;
  std::optional<AnatomyParams> anatomy;    // for dk_restricted
  std::optional<MajorantParams> majorant;  // for tilde_dk / gy_nu

  static SequenceSpec indicator();
  static SequenceSpec dk_spec(double k);
  static SequenceSpec dk_restricted(double k, AnatomyParams ap);
  static SequenceSpec vm_tilde();
  static SequenceSpec tilde_dk_spec(double k, MajorantParams mp);
  static SequenceSpec gy_nu_spec(MajorantParams mp);
};

// Dense materialization over the window; parallel over chunks, deterministic.
ArithSeq make_sequence(const FactorWindow& window, const SequenceSpec& spec);

// Same values over (lo, hi] without keeping factorizations: factors one
// segment at a time and discards it.  Peak memory is the values plus one
// segment, which is what makes 2^26-scale runs fit in desk RAM.
ArithSeq make_sequence_streamed(uint64_t lo, uint64_t hi, const SequenceSpec& spec,
                                uint32_t segment_len = 1u << 21);

}  // namespace divcor
