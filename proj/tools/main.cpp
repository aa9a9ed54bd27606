// divcor: desk-scale experiments on shifted correlations of divisor-type
// sequences (windows, singular constants, circle-method reports).

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "divcor/anatomy.hpp"
#include "divcor/characters.hpp"
#include "divcor/correlate.hpp"
#include "divcor/exp_sum.hpp"
#include "divcor/factor_sieve.hpp"
#include "divcor/goldens.hpp"
#include "divcor/majorants.hpp"
#include "divcor/report_json.hpp"
#include "divcor/sequences.hpp"
#include "divcor/singular.hpp"
#include "divcor/util.hpp"
#include "divcor/verify_suites.hpp"

using json = nlohmann::json;
using namespace divcor;

namespace {

struct CommonOpts {
  int threads = 0;
  std::string out = "-";
  std::string format = "json";
  std::string cache_dir = ".";
};

struct ScheduleOpts {
  bool desk = false;
  std::optional<double> p1, q1, p2, q2, p3, q3, psi, eps_prime;

  AnatomyOverrides overrides(double k, uint64_t X) const {
    AnatomyOverrides ov;
    if (desk) ov = desk_schedule(k, X);
    if (p1) ov.p1 = p1;
    if (q1) ov.q1 = q1;
    if (p2) ov.p2 = p2;
    if (q2) ov.q2 = q2;
    if (p3) ov.p3 = p3;
    if (q3) ov.q3 = q3;
    ov.psi = psi;
    ov.eps_prime = eps_prime;
    return ov;
  }
};

void add_schedule_flags(CLI::App* cmd, ScheduleOpts& s) {
  cmd->add_flag("--desk-schedule", s.desk,
                "use the fixed log-power interval schedule");
  cmd->add_option("--p1", s.p1, "anatomy interval 1 lower endpoint");
  cmd->add_option("--q1", s.q1, "anatomy interval 1 upper endpoint");
  cmd->add_option("--p2", s.p2, "anatomy interval 2 lower endpoint");
  cmd->add_option("--q2", s.q2, "anatomy interval 2 upper endpoint");
  cmd->add_option("--p3", s.p3, "anatomy interval 3 lower endpoint");
  cmd->add_option("--q3", s.q3, "anatomy interval 3 upper endpoint");
  cmd->add_option("--psi", s.psi, "psi exponent for P_1");
  cmd->add_option("--eps-prime", s.eps_prime, "epsilon' in the Omega cap");
}

// Envelope with a deterministic content hash; the timestamp and any runtime
// measurements live only in meta, outside the hashed body.
int emit(const CommonOpts& common, const std::string& command, const json& config,
         const json& result, const std::string& csv,
         const json& meta_extra = json::object()) {
  if (common.format == "csv") {
    if (common.out == "-") {
      std::cout << csv;
    } else {
      std::ofstream f(common.out);
      if (!f) {
        std::cerr << "cannot open " << common.out << "\n";
        return 2;
      }
      f << csv;
    }
    return 0;
  }
  json body = {{"schema", 1}, {"command", command}, {"config", config},
               {"result", result}};
  std::string content = body.dump();
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(content.data(), content.size())));
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  body["meta"] = {{"timestamp", stamp}, {"content_hash", hash}};
  for (auto& [key, val] : meta_extra.items()) body["meta"][key] = val;
  std::string text = body.dump(2) + "\n";
  if (common.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(common.out);
    if (!f) {
      std::cerr << "cannot open " << common.out << "\n";
      return 2;
    }
    f << text;
  }
  return 0;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divcor: divisor-correlation laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; flags win");
  app.allow_config_extras(true);

  CommonOpts common;
  app.add_option("--threads", common.threads, "worker thread count (0 = auto)");
  app.add_option("--out", common.out, "output path, '-' for stdout");
  app.add_option("--format", common.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--cache-dir", common.cache_dir, "window cache directory")
      ->envname("DIVCOR_CACHE_DIR");

  // ---- sieve ----
  auto* sieve = app.add_subcommand("sieve", "build and cache a factor window");
  uint64_t sv_x = 1u << 20;
  uint32_t sv_seg = 1u << 20;
  sieve->add_option("--x", sv_x, "window start; covers (x, 2x]")->required();
  sieve->add_option("--segment-len", sv_seg, "sieve segment length");

  // ---- correlate ----
  auto* corr = app.add_subcommand("correlate", "shifted-correlation report");
  uint64_t co_x = 1u << 20, co_h = 64;
  double co_k = 2, co_l = 2, co_tol = 1e-6;
  bool co_lambda = false, co_restrict = false, co_noextend = false;
  ScheduleOpts co_sched;
  corr->add_option("--x", co_x)->required();
  corr->add_option("--h-max", co_h, "max |h|");
  corr->add_option("--k", co_k);
  corr->add_option("--l", co_l);
  corr->add_option("--tol", co_tol, "singular-constant tolerance");
  corr->add_flag("--lambda", co_lambda, "correlate tilde-Lambda against d_k");
  corr->add_flag("--restrict-s", co_restrict, "restrict d_k to S_{k,X}");
  corr->add_flag("--no-extend", co_noextend,
                 "zero-extend g beyond 2X instead of factoring (X, 2X+H]");
  add_schedule_flags(corr, co_sched);

  // ---- singular ----
  auto* sing = app.add_subcommand("singular", "singular-series constants table");
  double sg_k = 2, sg_l = 2, sg_tol = 1e-6;
  uint64_t sg_hmax = 24;
  bool sg_lambda = false;
  sing->add_option("--k", sg_k);
  sing->add_option("--l", sg_l);
  sing->add_option("--h-max", sg_hmax);
  sing->add_option("--tol", sg_tol);
  sing->add_flag("--lambda", sg_lambda, "Lambda-side constants C_{k,h}");

  // ---- major-arc ----
  auto* marc = app.add_subcommand("major-arc", "major-arc integrals vs constants");
  uint64_t ma_x = 1u << 18, ma_h = 16, ma_q = 0;
  double ma_k = 2, ma_l = 2, ma_delta = 0, ma_tol = 1e-6;
  uint32_t ma_oversample = 8;
  bool ma_minor = false;
  ScheduleOpts ma_sched;
  marc->add_option("--x", ma_x)->required();
  marc->add_option("--h-max", ma_h);
  marc->add_option("--k", ma_k);
  marc->add_option("--l", ma_l);
  marc->add_option("--q", ma_q, "arc order Q (default floor(log X))");
  marc->add_option("--delta", ma_delta, "arc halfwidth (default log^3 X / X)");
  marc->add_option("--oversample", ma_oversample);
  marc->add_option("--tol", ma_tol);
  marc->add_flag("--minor", ma_minor, "report minor-arc remainders instead");
  add_schedule_flags(marc, ma_sched);

  // ---- anatomy ----
  auto* anat = app.add_subcommand("anatomy", "S_{k,X} parameters and discarded mass");
  uint64_t an_x = 1u << 20, an_h = 64;
  double an_k = 2, an_l = 2;
  ScheduleOpts an_sched;
  anat->add_option("--x", an_x)->required();
  anat->add_option("--k", an_k);
  anat->add_option("--l", an_l);
  anat->add_option("--h-max", an_h, "shift range H for the discarded-mass sum");
  add_schedule_flags(anat, an_sched);

  // ---- majorant ----
  auto* majo = app.add_subcommand("majorant",
                                  "majorization check and short-interval profile");
  uint64_t mj_x = 1u << 20, mj_h1 = 4096, mj_q = 3, mj_a = 1, mj_samples = 2000,
           mj_seed = 20240901ull;
  double mj_k = 2;
  ScheduleOpts mj_sched;
  majo->add_option("--x", mj_x)->required();
  majo->add_option("--k", mj_k);
  majo->add_option("--h1", mj_h1, "short-interval length");
  majo->add_option("--q", mj_q, "progression modulus");
  majo->add_option("--a", mj_a, "progression residue");
  majo->add_option("--samples", mj_samples);
  majo->add_option("--seed", mj_seed);
  add_schedule_flags(majo, mj_sched);

  // ---- verify ----
  auto* veri = app.add_subcommand("verify", "run invariant suites by name");
  std::vector<std::string> ve_suites;
  std::string ve_golden = "golden/v1/regressions.json";
  veri->add_option("--suite", ve_suites, "suite name(s), or 'all'")->required();
  veri->add_option("--golden-dir", ve_golden, "path to regressions.json");

  // ---- oracle ----
  auto* orac = app.add_subcommand("oracle", "recompute golden regression values");
  bool or_iknow = false;
  std::string or_golden = "golden/v1/regressions.json";
  orac->add_flag("--i-know", or_iknow, "rewrite the golden file in place");
  orac->add_option("--golden-dir", or_golden, "path to regressions.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_thread_count(common.threads);

  try {
    if (sieve->parsed()) {
      FactorWindow w = build_window(sv_x, sv_seg);
      std::string path = common.cache_dir + "/window_" + std::to_string(sv_x) + ".dkw";
      FactorWindow back = window_cache_roundtrip(w, path);
      if (!(back == w)) {
        std::cerr << "cache roundtrip mismatch\n";
        return 1;
      }
      std::ifstream in(path, std::ios::binary | std::ios::ate);
      json result = {{"x", sv_x},
                     {"length", w.length()},
                     {"pairs", w.fprimes.size()},
                     {"file_bytes", static_cast<uint64_t>(in.tellg())},
                     {"path", path}};
      json config = {{"x", sv_x}, {"segment_len", sv_seg}};
      return emit(common, "sieve", config, result, result.dump(2) + "\n");
    }

    if (corr->parsed()) {
      Theorem1Options opt;
      opt.tol = co_tol;
      opt.restrict_S = co_restrict;
      opt.extended_window = !co_noextend;
      if (co_restrict) opt.schedule = co_sched.overrides(co_k, co_x);
      CorrelationReport rep = co_lambda
                                  ? theorem1_report_lambda(co_x, co_h, co_k, opt)
                                  : theorem1_report(co_x, co_h, co_k, co_l, opt);
      json config = {{"x", co_x},       {"h_max", co_h},
                     {"k", co_k},       {"l", co_l},
                     {"tol", co_tol},   {"lambda", co_lambda},
                     {"restrict_s", co_restrict}, {"extended", !co_noextend}};
      std::ostringstream csv;
      csv << "h,empirical,main_term,ratio\n";
      for (const auto& row : rep.rows)
        csv << row.h << "," << fmt_double(row.empirical) << ","
            << fmt_double(row.main_term) << "," << fmt_double(row.ratio) << "\n";
      json result = to_json(rep);
      json timing = result["timing"];
      result.erase("timing");
      if (co_restrict) {
        result["params_k"] = to_json(params(co_k, co_x, *opt.schedule));
        if (!co_lambda) result["params_l"] = to_json(params(co_l, co_x, *opt.schedule));
      }
      return emit(common, "correlate", config, result, csv.str(),
                  {{"timing", timing}});
    }

    if (sing->parsed()) {
      json rows = json::array();
      std::ostringstream csv;
      csv << "h,value,product,p_max,tail_bound\n";
      for (uint64_t h = 1; h <= sg_hmax; ++h) {
        SingularConstant c = sg_lambda
                                 ? constant_ld(sg_k, static_cast<int64_t>(h), sg_tol)
                                 : constant_dd(sg_k, sg_l, static_cast<int64_t>(h), sg_tol);
        rows.push_back(to_json(c));
        csv << h << "," << fmt_double(c.value) << "," << fmt_double(c.product) << ","
            << c.p_max << "," << fmt_double(c.tail_bound) << "\n";
      }
      json config = {{"k", sg_k}, {"l", sg_l}, {"h_max", sg_hmax},
                     {"tol", sg_tol}, {"lambda", sg_lambda}};
      return emit(common, "singular", config, {{"rows", rows}}, csv.str());
    }

    if (marc->parsed()) {
      double logX = std::log(static_cast<double>(ma_x));
      uint64_t Q = ma_q ? ma_q : static_cast<uint64_t>(logX);
      double delta = ma_delta > 0 ? ma_delta
                                  : logX * logX * logX / static_cast<double>(ma_x);
      AnatomyOverrides ov = ma_sched.overrides(ma_k, ma_x);
      json config = {{"x", ma_x}, {"h_max", ma_h}, {"k", ma_k}, {"l", ma_l},
                     {"q", Q},    {"delta", delta}, {"minor", ma_minor},
                     {"oversample", ma_oversample}};
      if (ma_minor) {
        AnatomyParams apk = params(ma_k, ma_x, ov);
        ArithSeq f = make_sequence_streamed(ma_x, 2 * ma_x,
                                            SequenceSpec::dk_restricted(ma_k, apk));
        AnatomyParams apl = params(ma_l, ma_x, ov);
        ArithSeq g = make_sequence_streamed(ma_x, 2 * ma_x,
                                            SequenceSpec::dk_restricted(ma_l, apl));
        MinorArcEnergy e = minor_arc_energy(f, g, Q, delta, ma_h, ma_oversample);
        json result = to_json(e, ma_h);
        result["params_k"] = to_json(apk);
        result["params_l"] = to_json(apl);
        std::ostringstream csv;
        csv << "h,remainder_mod\n";
        for (size_t i = 0; i < e.remainder_mod.size(); ++i)
          csv << (static_cast<int64_t>(i) - static_cast<int64_t>(ma_h)) << ","
              << fmt_double(e.remainder_mod[i]) << "\n";
        return emit(common, "major-arc", config, result, csv.str());
      }
      MajorArcReport rep = major_arc_report(ma_x, ma_h, ma_k, ma_l, Q, delta, ov,
                                            ma_oversample, ma_tol);
      json result = to_json(rep);
      result["params"] = to_json(params(ma_k, ma_x, ov));
      std::ostringstream csv;
      csv << "h,mt_real,mt_imag,main_term,ratio\n";
      for (const auto& row : rep.rows)
        csv << row.h << "," << fmt_double(row.mt_real) << "," << fmt_double(row.mt_imag)
            << "," << fmt_double(row.main_term) << "," << fmt_double(row.ratio) << "\n";
      return emit(common, "major-arc", config, result, csv.str());
    }

    if (anat->parsed()) {
      AnatomyOverrides ov = an_sched.overrides(an_k, an_x);
      AnatomyParams apk = params(an_k, an_x, ov);
      AnatomyParams apl = params(an_l, an_x, ov);
      DiscardedMassReport rep =
          discarded_mass_streamed(an_k, an_l, apk, apl, an_x, an_h);
      json result = {{"params_k", to_json(apk)},
                     {"params_l", to_json(apl)},
                     {"discarded_mass", to_json(rep)}};
      json config = {{"x", an_x}, {"k", an_k}, {"l", an_l}, {"h_max", an_h}};
      return emit(common, "anatomy", config, result, result.dump(2) + "\n");
    }

    if (majo->parsed()) {
      AnatomyOverrides ov = mj_sched.overrides(mj_k, mj_x);
      AnatomyParams ap = params(mj_k, mj_x, ov);
      MajorantParams mp = majorant_params(mj_k, mj_x,
                                          ov.eps_prime ? *ov.eps_prime : 0.1);
      MajorizeReport mrep = majorize_check_streamed(mj_k, ap, mp);
      ArithSeq td = make_sequence_streamed(mj_x, 2 * mj_x,
                                           SequenceSpec::tilde_dk_spec(mj_k, mp));
      ShortIntervalProfile prof =
          short_interval_profile(td, mj_h1, mj_q, mj_a, mj_samples, mj_seed, mj_k);
      json result = {{"params", to_json(ap)},
                     {"majorant", to_json(mp)},
                     {"majorize", to_json(mrep)},
                     {"profile", to_json(prof)}};
      json config = {{"x", mj_x},       {"k", mj_k},   {"h1", mj_h1},
                     {"q", mj_q},       {"a", mj_a},   {"samples", mj_samples},
                     {"seed", mj_seed}};
      return emit(common, "majorant", config, result, result.dump(2) + "\n");
    }

    if (veri->parsed()) {
      std::vector<std::string> names = ve_suites;
      if (names.size() == 1 && names[0] == "all") names = suite_names();
      json rows = json::array();
      json seconds = json::object();
      bool all_pass = true;
      for (const std::string& name : names) {
        SuiteResult r = run_suite(name, ve_golden);
        rows.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        seconds[r.name] = r.seconds;
        all_pass = all_pass && r.pass;
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail
                  << ")\n";
      }
      json config = {{"suites", names}};
      int code = emit(common, "verify", config,
                      {{"suites", rows}, {"all_pass", all_pass}},
                      rows.dump(2) + "\n", {{"seconds", seconds}});
      return code != 0 ? code : (all_pass ? 0 : 1);
    }

    if (orac->parsed()) {
      GoldenSet fresh = compute_goldens(
          [](const std::string& msg) { std::cerr << "[oracle] " << msg << "\n"; });
      json vals = json::object();
      for (const auto& [name, v] : fresh.values) vals[name] = v;
      if (or_iknow) {
        save_goldens(fresh, or_golden);
        std::cerr << "golden file rewritten: " << or_golden << "\n";
        return emit(common, "oracle", {{"refresh", true}}, {{"values", vals}}, "");
      }
      GoldenSet expected = load_goldens(or_golden);
      auto bad = compare_goldens(expected, fresh);
      json mism = json::array();
      for (const auto& m : bad)
        mism.push_back(
            {{"name", m.name}, {"expected", m.expected}, {"actual", m.actual}});
      int code = emit(common, "oracle", {{"refresh", false}},
                      {{"values", vals}, {"mismatches", mism}}, "");
      if (code != 0) return code;
      return bad.empty() ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
