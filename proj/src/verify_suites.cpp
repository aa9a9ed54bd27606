#include "divcor/verify_suites.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "divcor/anatomy.hpp"
#include "divcor/characters.hpp"
#include "divcor/correlate.hpp"
#include "divcor/exp_sum.hpp"
#include "divcor/fft.hpp"
#include "divcor/goldens.hpp"
#include "divcor/majorants.hpp"
#include "divcor/sequences.hpp"
#include "divcor/singular.hpp"
#include "divcor/util.hpp"

namespace divcor {

namespace {

constexpr uint64_t kSeed = 0xD15C0ull;

// h-profile Pearson floor for the 2^26 run, recalibrated once from the first
// verified run (observed 0.99823) and pinned with margin.
constexpr double kTheorem1PearsonThreshold = 0.995;

ArithSeq random_seq(uint64_t x_lo, size_t len, uint64_t seed) {
  ArithSeq s;
  s.x_lo = x_lo;
  s.values.resize(len);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (auto& v : s.values) v = dist(rng);
  return s;
}

struct Failure {
  std::ostringstream msg;
  bool failed = false;
  void fail(const std::string& what) {
    if (failed) msg << "; ";
    msg << what;
    failed = true;
  }
};

SuiteResult finish(const std::string& name, Failure& f,
                   std::chrono::steady_clock::time_point t0,
                   const std::string& ok_detail) {
  SuiteResult r;
  r.name = name;
  r.pass = !f.failed;
  r.detail = f.failed ? f.msg.str() : ok_detail;
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SuiteResult suite_fft_vs_naive() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double worst = 0;
  for (size_t len : {size_t(1000), size_t(10000), size_t(100000)}) {
    ArithSeq a = random_seq(1u << 20, len, kSeed + len);
    ArithSeq b = random_seq((1u << 20) - 64, len + 128, kSeed + len + 1);
    auto naive = correlation_naive(a, b, 128);
    auto fast = correlation_fft(a, b, 128);
    for (size_t i = 0; i < naive.size(); ++i) {
      double rel = std::abs(naive[i] - fast[i]) / std::max(1.0, std::abs(naive[i]));
      worst = std::max(worst, rel);
    }
  }
  if (worst > 1e-9) f.fail("fft/naive relative deviation " + std::to_string(worst));
  std::ostringstream ok;
  ok << "max relative deviation " << worst;
  return finish("fft-vs-naive", f, t0, ok.str());
}

SuiteResult suite_parseval() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double worst = 0;
  for (size_t len : {size_t(4096), size_t(50000)}) {
    ArithSeq a = random_seq(99991, len, kSeed + 7 * len);
    size_t N = next_pow2(2 * len);
    std::vector<cplx> grid = sf_grid(a, N);
    KahanSum power;
    for (auto& z : grid) power.add(std::norm(z));
    double lhs = power.value() / static_cast<double>(N);
    double rhs = a.l2_norm_sq();
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  if (worst > 1e-9) f.fail("Parseval relative deviation " + std::to_string(worst));
  std::ostringstream ok;
  ok << "max relative deviation " << worst;
  return finish("parseval", f, t0, ok.str());
}

SuiteResult suite_sam_closure() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double worst = 0;
  ArithSeq a = random_seq(8192, 8192, kSeed + 11);
  ArithSeq b = random_seq(8192, 8192, kSeed + 12);
  CorrelationGrids grids = make_correlation_grids(a, b, 8);
  auto direct = correlation_naive(a, b, 8);
  for (int64_t h = -8; h <= 8; ++h) {
    cplx full = major_arc_integral_from_grids(grids, ArcSet::full_circle(), h);
    double want = direct[static_cast<size_t>(h + 8)];
    double rel = std::abs(full - cplx(want, 0)) / std::max(1.0, std::abs(want));
    worst = std::max(worst, rel);
  }
  if (worst > 1e-6) f.fail("full-circle closure deviation " + std::to_string(worst));
  std::ostringstream ok;
  ok << "max relative deviation " << worst;
  return finish("sam-closure", f, t0, ok.str());
}

SuiteResult suite_me_decompose() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  CharacterTableCache tables;
  ArithSeq a = random_seq(4096, 4096, kSeed + 21);
  double l1 = a.l1_norm();
  double X = static_cast<double>(a.x_lo);
  double worst = 0;
  for (uint64_t q = 1; q <= 12; ++q) {
    for (uint64_t aa = 0; aa < q; ++aa) {
      if (q > 1 && std::gcd(aa, q) != 1) continue;
      if (q > 1 && aa == 0) continue;
      for (double beta : {0.0, 1.0 / (3.0 * X), -1.0 / (3.0 * X)}) {
        MEDecomposition dec = me_decompose(a, aa, q, beta, tables);
        cplx s = sf_point(a, static_cast<double>(aa) / static_cast<double>(q) + beta);
        worst = std::max(worst, std::abs(dec.reconstructed - s) / l1);
      }
    }
  }
  if (worst > 1e-8) f.fail("reconstruction deviation " + std::to_string(worst) + " * l1");
  std::ostringstream ok;
  ok << "max deviation " << worst << " * l1";
  return finish("me-decompose", f, t0, ok.str());
}

SuiteResult suite_singular_anchors() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;

  double inv_zeta2 = 1.0 / zeta_reference(2.0);
  for (int64_t h = 1; h <= 24; ++h) {
    SingularConstant c = constant_dd(2, 2, h, 1e-6);
    double sigma = 0;
    for (int64_t d = 1; d <= h; ++d)
      if (h % d == 0) sigma += 1.0 / static_cast<double>(d);
    double want = inv_zeta2 * sigma;
    if (std::abs(c.product - want) > 1e-4)
      f.fail("Ingham anchor off at h=" + std::to_string(h));
  }

  double tref = zeta_reference(2.0) * zeta_reference(3.0) / zeta_reference(6.0);
  SingularConstant t = constant_ld(2, 1, 1e-6);
  if (std::abs(t.product - tref) > 1e-4) f.fail("Titchmarsh anchor off");

  // closed form vs p-adic oracle
  const std::pair<double, double> kl[] = {{2, 2}, {3, 2}, {2.5, 2.5}};
  for (uint64_t p : {2, 3, 5, 7}) {
    uint32_t E = p == 2 ? 20 : p == 3 ? 12 : p == 5 ? 8 : 7;
    // numeric cap-loss allowance: truncated coefficient tails from E-1
    auto tail_allow = [&](double kk, double ll) {
      double u = 1.0 / static_cast<double>(p);
      DkTable tk(kk), tl(ll);
      double sk = 0, sl = 0;
      for (uint32_t a2 = E - 1; a2 <= 64; ++a2) {
        sk += tk.at(static_cast<uint8_t>(a2)) * std::pow(u, static_cast<double>(a2));
        sl += tl.at(static_cast<uint8_t>(a2)) * std::pow(u, static_cast<double>(a2));
      }
      double big = std::max(tk.at(20), tl.at(20));
      return 4.0 * big * (sk + sl) + 1e-12;
    };
    for (int64_t h = -12; h <= 12; ++h) {
      if (h == 0) continue;
      for (auto [kk, ll] : kl) {
        double closed = local_factor_dd(kk, ll, p, h, 1e-13).value;
        double oracle = local_oracle(OracleMode::dd, kk, ll, p, h, E);
        if (std::abs(closed - oracle) > tail_allow(kk, ll))
          f.fail("dd oracle mismatch p=" + std::to_string(p) +
                 " h=" + std::to_string(h));
      }
      for (double kk : {2.0, 3.0, 2.5}) {
        double closed = local_factor_ld(kk, p, h, 1e-13).value;
        double oracle = local_oracle(OracleMode::ld, kk, 0, p, h, E);
        if (std::abs(closed - oracle) >
            static_cast<double>(p) * tail_allow(kk, kk))
          f.fail("ld oracle mismatch p=" + std::to_string(p) +
                 " h=" + std::to_string(h));
      }
    }
  }
  return finish("singular-anchors", f, t0,
                "Ingham h=1..24, Titchmarsh, oracle sweep p in {2,3,5,7}");
}

SuiteResult suite_rational_approx() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  std::mt19937_64 rng(kSeed + 31);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    double alpha = dist(rng);
    uint64_t Q = 1 + rng() % 200;
    RationalApprox ra = rational_approx(alpha, Q);
    if (ra.q > Q) {
      f.fail("q exceeds Q");
      break;
    }
    if (ra.distance > 1.0 / (static_cast<double>(ra.q) * static_cast<double>(Q)) + 1e-15) {
      f.fail("postcondition distance violated");
      break;
    }
    uint64_t qmin = 0;
    for (uint64_t q = 1; q <= Q; ++q) {
      double fr = frac_mul(q, alpha);
      double d = std::min(fr, 1.0 - fr) / static_cast<double>(q);
      if (d <= 1.0 / (static_cast<double>(q) * static_cast<double>(Q))) {
        qmin = q;
        break;
      }
    }
    if (ra.q != qmin) {
      f.fail("minimality mismatch at alpha=" + std::to_string(alpha));
      break;
    }
  }
  return finish("rational-approx", f, t0, "10^4 random alpha, Q <= 200, exact match");
}

SuiteResult suite_orthogonality() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double worst = 0;
  for (uint64_t q = 1; q <= 200; ++q) {
    CharacterTable G(q);
    size_t phi = G.size();
    // cache values chi_i(n)
    std::vector<std::vector<cplx>> vals(phi, std::vector<cplx>(q));
    for (size_t i = 0; i < phi; ++i)
      for (uint64_t n = 1; n <= q; ++n) vals[i][n % q] = G.eval(i, n);

    for (size_t i = 0; i < phi; ++i)
      for (size_t j = i; j < phi; ++j) {
        KahanCSum s;
        for (uint64_t n = 0; n < q; ++n) s.add(vals[i][n] * std::conj(vals[j][n]));
        cplx expect = (i == j) ? cplx(static_cast<double>(phi), 0) : cplx(0, 0);
        worst = std::max(worst, std::abs(s.value() - expect));
      }
    for (uint64_t m = 0; m < q; ++m)
      for (uint64_t n = m; n < q; ++n) {
        KahanCSum s;
        for (size_t i = 0; i < phi; ++i) s.add(vals[i][m] * std::conj(vals[i][n]));
        bool hit = (m == n) && (q == 1 || std::gcd(m, q) == 1);
        cplx expect = hit ? cplx(static_cast<double>(phi), 0) : cplx(0, 0);
        worst = std::max(worst, std::abs(s.value() - expect));
      }
  }
  if (worst > 1e-10) f.fail("orthogonality deviation " + std::to_string(worst));
  std::ostringstream ok;
  ok << "max deviation " << worst << " over q <= 200, both directions";
  return finish("orthogonality", f, t0, ok.str());
}

SuiteResult suite_conductors() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  for (uint64_t q = 1; q <= 60; ++q) {
    CharacterTable G(q);
    auto divs = divisors_from_factorization(factorize_u64(q));
    std::sort(divs.begin(), divs.end());
    for (uint64_t ci = 0; ci < G.size(); ++ci) {
      uint64_t got = G.conductor(ci);
      // oracle: least f | q with chi constant on classes mod f (coprime to q)
      uint64_t want = q;
      for (uint64_t fdiv : divs) {
        bool ok = true;
        for (uint64_t m = 1; m <= q && ok; ++m) {
          if (std::gcd(m, q) != 1) continue;
          for (uint64_t n = m + fdiv; n <= q && ok; n += fdiv)
            if (std::gcd(n, q) == 1 && std::abs(G.eval(ci, m) - G.eval(ci, n)) > 1e-9)
              ok = false;
        }
        if (ok) {
          want = fdiv;
          break;
        }
      }
      if (got != want || q % got != 0) {
        f.fail("conductor mismatch q=" + std::to_string(q));
        break;
      }
    }
  }
  return finish("conductors", f, t0, "brute-force match for q <= 60");
}

SuiteResult suite_gauss_sums() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double worst = 0;
  for (uint64_t q = 2; q <= 100; ++q) {
    CharacterTable G(q);
    for (uint64_t ci = 0; ci < G.size(); ++ci) {
      if (G.conductor(ci) != q) continue;
      double dev = std::abs(std::norm(G.gauss_sum(ci)) - static_cast<double>(q));
      worst = std::max(worst, dev);
    }
  }
  if (worst > 1e-9) f.fail("|tau|^2 deviation " + std::to_string(worst));
  std::ostringstream ok;
  ok << "max | |tau|^2 - q | = " << worst << " over primitive chi, q <= 100";
  return finish("gauss-sums", f, t0, ok.str());
}

SuiteResult suite_arc_membership() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  ArcSet arcs = major_arcs(10, 3e-4);
  std::mt19937_64 rng(kSeed + 41);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    double alpha = dist(rng);
    bool inside = false;
    bool near_edge = false;
    for (uint64_t q = 1; q <= 10; ++q)
      for (uint64_t a = 0; a < q; ++a) {
        if (std::gcd(a == 0 ? 1 : a, q) != 1) continue;
        double d = circle_dist(alpha, static_cast<double>(a) / q);
        if (d <= 3e-4) inside = true;
        if (std::abs(d - 3e-4) < 1e-12) near_edge = true;
      }
    if (!near_edge && arcs.contains(alpha) != inside) {
      f.fail("membership mismatch at alpha=" + std::to_string(alpha));
      break;
    }
  }
  double width_sum = 0;
  for (auto [lo, hi] : arcs.intervals()) width_sum += hi - lo;
  if (std::abs(arcs.measure() - width_sum) > 1e-15) f.fail("measure mismatch");
  return finish("arc-membership", f, t0, "10^4 random points vs brute force");
}

SuiteResult suite_majorant() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  // pointwise tkdk over a full 2^22 window (majorize_check throws on violation)
  {
    uint64_t X = 1ull << 22;
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    MajorantParams mp = majorant_params(2.0, X);
    try {
      MajorizeReport rep = majorize_check_streamed(2.0, ap, mp);
      if (rep.s_size == 0) f.fail("S empty at 2^22");
    } catch (const std::exception& e) {
      f.fail(std::string("pointwise check threw: ") + e.what());
    }
  }
  // ratio trend at k = 2 across three decades
  std::ostringstream detail;
  detail << "max ratios:";
  for (uint64_t X : {uint64_t(1) << 20, uint64_t(1) << 23, uint64_t(1) << 26}) {
    AnatomyParams ap = params(2.0, X, desk_schedule(2.0, X));
    MajorantParams mp = majorant_params(2.0, X);
    MajorizeReport rep = majorize_check_streamed(2.0, ap, mp);
    detail << " X=2^" << static_cast<int>(std::log2(static_cast<double>(X)))
           << ": " << rep.max_ratio << " (bound " << rep.bound << ")";
    if (!(rep.max_ratio < rep.bound))
      f.fail("ratio bound exceeded at X=" + std::to_string(X));
    if (rep.s_size == 0) f.fail("S empty at X=" + std::to_string(X));
  }
  return finish("majorant", f, t0, detail.str());
}

SuiteResult suite_theorem1_trend() {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  Theorem1Options opt;
  opt.tol = 1e-6;
  std::ostringstream detail;
  detail << "deviations:";
  double prev = std::numeric_limits<double>::infinity();
  double pearson_final = 0;
  for (uint64_t X : {uint64_t(1) << 20, uint64_t(1) << 23, uint64_t(1) << 26}) {
    CorrelationReport rep = theorem1_report(X, 64, 2, 2, opt);
    detail << " X=2^" << static_cast<int>(std::log2(static_cast<double>(X)))
           << ": " << rep.deviation;
    if (rep.deviation > prev)
      f.fail("deviation increased at X=" + std::to_string(X));
    prev = rep.deviation;
    pearson_final = rep.pearson_h_profile;
  }
  detail << "; pearson(2^26) = " << pearson_final;
  if (pearson_final < kTheorem1PearsonThreshold)
    f.fail("h-profile Pearson below threshold");
  return finish("theorem1-trend", f, t0, detail.str());
}

SuiteResult suite_goldens(const std::string& golden_path) {
  auto t0 = std::chrono::steady_clock::now();
  Failure f;
  GoldenSet expected = load_goldens(golden_path);
  GoldenSet actual = compute_goldens();
  auto bad = compare_goldens(expected, actual);
  for (const auto& m : bad)
    f.fail(m.name + ": expected " + std::to_string(m.expected) + ", got " +
           std::to_string(m.actual));
  // trend asserts on the freshly computed values
  double f20 = actual.values.at("discarded_x1048576_h64.fraction");
  double f23 = actual.values.at("discarded_x8388608_h64.fraction");
  double f26 = actual.values.at("discarded_x67108864_h64.fraction");
  if (!(f23 <= f20 * 1.10 && f26 <= f23 * 1.10))
    f.fail("discarded-mass fraction trend not non-increasing within 10% slack");
  double tw = actual.values.at("twisted_d2s_x4194304_q3_yp16384.sweep_max");
  double un = actual.values.at("twisted_d2s_x4194304_untwisted.norm_max");
  if (!(tw <= 0.2 * un)) f.fail("twisted sweep not small next to untwisted sum");
  double p50 = actual.values.at("short_profile_td2_x16777216_h4096_q3.p50");
  double p99 = actual.values.at("short_profile_td2_x16777216_h4096_q3.p99");
  if (!(p99 < 10.0 * p50)) f.fail("p99 touches heavy-tail guard (>= 10 * median)");
  std::ostringstream ok;
  ok << expected.values.size() << " pinned values stable to 1e-9; trends hold";
  return finish("goldens", f, t0, ok.str());
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"fft-vs-naive",   "parseval",        "sam-closure", "me-decompose",
          "singular-anchors", "rational-approx", "orthogonality", "conductors",
          "gauss-sums",     "arc-membership",  "majorant",    "theorem1-trend",
          "goldens"};
}

SuiteResult run_suite(const std::string& name, const std::string& golden_path) {
  if (name == "fft-vs-naive") return suite_fft_vs_naive();
  if (name == "parseval") return suite_parseval();
  if (name == "sam-closure") return suite_sam_closure();
  if (name == "me-decompose") return suite_me_decompose();
  if (name == "singular-anchors") return suite_singular_anchors();
  if (name == "rational-approx") return suite_rational_approx();
  if (name == "orthogonality") return suite_orthogonality();
  if (name == "conductors") return suite_conductors();
  if (name == "gauss-sums") return suite_gauss_sums();
  if (name == "arc-membership") return suite_arc_membership();
  if (name == "majorant") return suite_majorant();
  if (name == "theorem1-trend") return suite_theorem1_trend();
  if (name == "goldens") return suite_goldens(golden_path);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace divcor
