#include "divcor/goldens.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "divcor/anatomy.hpp"
#include "divcor/characters.hpp"
#include "divcor/correlate.hpp"
#include "divcor/exp_sum.hpp"
#include "divcor/factor_sieve.hpp"
#include "divcor/majorants.hpp"
#include "divcor/sequences.hpp"

namespace divcor {

namespace {

void note(const std::function<void(const std::string&)>& progress,
          const std::string& msg) {
  if (progress) progress(msg);
}

}  // namespace

GoldenSet compute_goldens(const std::function<void(const std::string&)>& progress) {
  GoldenSet g;

  // Gallagher-lemma ratio for d_2 on (2^16, 2^17], Y = 256
  note(progress, "gallagher d2 x=2^16 Y=256");
  {
    uint64_t X = 1u << 16;
    ArithSeq d2 = make_sequence_streamed(X, 2 * X, SequenceSpec::dk_spec(2));
    GallagherReport r = gallagher_ratio(d2, 256.0);
    g.values["gallagher_d2_x65536_y256.ratio"] = r.ratio;
  }

  // log-free mean value theorem ratio: q = 3, a(n) = d_2(n) on (10^3, 2*10^3], T = 50
  note(progress, "mvt q=3 x=1000 T=50");
  {
    uint64_t X = 1000, Y = 1000;
    ArithSeq d2 = make_sequence_streamed(X, X + Y, SequenceSpec::dk_spec(2));
    CharacterTable g3(3);
    double step = 0.9 / (4.0 * std::log(2.0 * static_cast<double>(X)));
    MvtReport r = mvt_report(g3, X, Y, d2.values, 2.0, 50.0, step);
    g.values["mvt_q3_x1000_y1000_t50.ratio"] = r.ratio;
  }

  // twisted short sums of d_2 1_S at X = 2^22, chi nonprincipal mod 3,
  // Y' = 2^14, 64 sweep points
  note(progress, "twisted sweep x=2^22");
  {
    uint64_t X = 1ull << 22;
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    ArithSeq f = make_sequence_streamed(X, 2 * X, SequenceSpec::dk_restricted(2.0, ap));
    CharacterTable g3(3);
    CharRef chi{&g3, 1};
    double Yp = 16384.0;
    double x0 = static_cast<double>(X) + 1.0;
    double x1 = 2.0 * static_cast<double>(X) - Yp - 1.0;
    double sweep = twisted_short_sum_sweep(f, 1, chi, x0, x1, 64, Yp);
    g.values["twisted_d2s_x4194304_q3_yp16384.sweep_max"] = sweep;
    // untwisted reference: same sum against the principal character mod 1
    CharacterTable g1(1);
    CharRef one{&g1, 0};
    double untw = 0.0;
    for (uint32_t i = 0; i < 64; ++i) {
      double x = x0 + (x1 - x0) * i / 63.0;
      untw = std::max(untw, std::abs(twisted_short_sum(f, 1, one, x, Yp)));
    }
    g.values["twisted_d2s_x4194304_untwisted.norm_max"] = untw;
  }

  // short-interval profile of tilde d_2 at X = 2^24, H1 = 4096, q = 3, a = 1
  note(progress, "short-interval profile x=2^24");
  {
    uint64_t X = 1ull << 24;
    MajorantParams mp = majorant_params(2.0, X);
    ArithSeq td = make_sequence_streamed(X, 2 * X, SequenceSpec::tilde_dk_spec(2.0, mp));
    ShortIntervalProfile prof =
        short_interval_profile(td, 4096, 3, 1, 2000, 20240901ull, 2.0);
    g.values["short_profile_td2_x16777216_h4096_q3.p50"] = prof.p50;
    g.values["short_profile_td2_x16777216_h4096_q3.p90"] = prof.p90;
    g.values["short_profile_td2_x16777216_h4096_q3.p99"] = prof.p99;
    g.values["short_profile_td2_x16777216_h4096_q3.p100"] = prof.p100;
  }

  // discarded-mass trend, k = l = 2, H = 64, desk schedule
  for (uint64_t X : {uint64_t(1) << 20, uint64_t(1) << 23, uint64_t(1) << 26}) {
    note(progress, "discarded mass x=" + std::to_string(X));
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    DiscardedMassReport rep = discarded_mass_streamed(2.0, 2.0, ap, ap, X, 64);
    std::string tag = "discarded_x" + std::to_string(X) + "_h64";
    g.values[tag + ".fraction"] = rep.mass_fraction;
    g.values[tag + ".lemma_normalized"] = rep.lemma_normalized;
  }

  // majorant ratio at X = 2^24 (the spec's pinned example scale)
  note(progress, "majorize x=2^24");
  {
    uint64_t X = 1ull << 24;
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    MajorantParams mp = majorant_params(2.0, X);
    MajorizeReport rep = majorize_check_streamed(2.0, ap, mp);
    g.values["majorize_d2_x16777216.max_ratio"] = rep.max_ratio;
  }

  // minor-arc remainder aggregate: d_2 1_S at X = 2^18, Q = 8, delta = Q^3/X, H = 32
  note(progress, "minor-arc aggregate x=2^18");
  {
    uint64_t X = 1u << 18;
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    ArithSeq f = make_sequence_streamed(X, 2 * X, SequenceSpec::dk_restricted(2.0, ap));
    MinorArcEnergy e = minor_arc_energy(f, f, 8, 512.0 / static_cast<double>(X), 32, 8);
    g.values["minor_arc_d2s_x262144_q8_h32.aggregate_norm"] = e.aggregate_normalized;
  }

  // window cache size regression
  note(progress, "window cache size x=10^6");
  {
    FactorWindow w = build_window(1000000);
    std::string path = "golden_window_probe.dkw";
    write_window(w, path);
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    g.values["window_cache_x1000000.file_bytes"] = static_cast<double>(in.tellg());
    in.close();
    std::remove(path.c_str());
  }

  // anatomy endpoint formulas at the spec's reference point
  {
    AnatomyParams ap = anatomy_endpoints(2.0, 100000000ull);
    g.values["anatomy_k2_x1e8.p1"] = ap.p1;
    g.values["anatomy_k2_x1e8.q1"] = ap.q1;
  }

  return g;
}

GoldenSet load_goldens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_goldens: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("schema") || j["schema"] != 1)
    throw std::runtime_error("load_goldens: unsupported schema");
  GoldenSet g;
  for (auto& [key, val] : j["values"].items())
    g.values[key] = val.get<double>();
  return g;
}

void save_goldens(const GoldenSet& g, const std::string& path) {
  nlohmann::json j;
  j["schema"] = 1;
  j["values"] = nlohmann::json::object();
  for (const auto& [key, val] : g.values) j["values"][key] = val;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_goldens: cannot open " + path);
  out << j.dump(2) << "\n";
}

std::vector<GoldenMismatch> compare_goldens(const GoldenSet& expected,
                                            const GoldenSet& actual) {
  std::vector<GoldenMismatch> bad;
  for (const auto& [name, want] : expected.values) {
    auto it = actual.values.find(name);
    if (it == actual.values.end()) {
      bad.push_back({name, want, std::nan("")});
      continue;
    }
    double got = it->second;
    double scale = std::max(std::abs(want), 1e-9);
    if (std::abs(got - want) > 1e-9 * scale) bad.push_back({name, want, got});
  }
  return bad;
}

}  // namespace divcor
