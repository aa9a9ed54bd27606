#include "divcor/characters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace divcor {

namespace {

uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  unsigned __int128 acc = 1, bb = b % m;
  while (e) {
    if (e & 1) acc = acc * bb % m;
    bb = bb * bb % m;
    e >>= 1;
  }
  return static_cast<uint64_t>(acc);
}

// primitive root mod p^e for odd prime p
uint64_t primitive_root_pe(uint64_t p, uint8_t e) {
  auto pm1_fac = factorize_u64(p - 1);
  uint64_t g = 0;
  for (uint64_t cand = 2; cand < p; ++cand) {
    bool ok = true;
    for (auto [r, re] : pm1_fac) {
      (void)re;
      if (powmod(cand, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = cand;
      break;
    }
  }
  if (g == 0) throw std::logic_error("primitive root search failed");
  if (e == 1) return g;
  // lift: g is a primitive root mod p^e unless g^{p-1} = 1 mod p^2
  uint64_t p2 = p * p;
  if (powmod(g, p - 1, p2) == 1) g += p;
  return g;
}

}  // namespace

CharacterTable::CharacterTable(uint64_t q) : q_(q) {
  if (q == 0) throw std::invalid_argument("character_group: q must be >= 1");
  if (q > 1000000) throw std::invalid_argument("character_group: q must be <= 10^6");

  auto fac = factorize_u64(q);
  phi_ = 1;
  for (auto [p, e] : fac) {
    uint64_t pe = 1;
    for (uint8_t i = 0; i < e; ++i) pe *= p;

    if (p == 2) {
      if (e == 1) continue;  // trivial group
      if (e == 2) {
        Component c;
        c.pe = 4;
        c.order = 2;
        c.dlog.assign(4, -1);
        c.dlog[1] = 0;
        c.dlog[3] = 1;
        comps_.push_back(std::move(c));
        phi_ *= 2;
      } else {
        // (Z/2^e)^* = <-1> x <5>
        uint64_t half = pe >> 2;  // order of 5 is 2^{e-2}
        Component cm, cf;
        cm.pe = pe;
        cm.order = 2;
        cm.dlog.assign(pe, -1);
        cf.pe = pe;
        cf.order = half;
        cf.dlog.assign(pe, -1);
        for (int s = 0; s < 2; ++s) {
          uint64_t x = s ? pe - 1 : 1;  // (-1)^s
          for (uint64_t t = 0; t < half; ++t) {
            cm.dlog[x] = s;
            cf.dlog[x] = static_cast<int64_t>(t);
            x = static_cast<uint64_t>((unsigned __int128)x * 5 % pe);
          }
        }
        comps_.push_back(std::move(cm));
        comps_.push_back(std::move(cf));
        phi_ *= 2 * half;
      }
      continue;
    }

    Component c;
    c.pe = pe;
    c.order = pe / p * (p - 1);
    c.dlog.assign(pe, -1);
    uint64_t g = primitive_root_pe(p, e);
    uint64_t x = 1;
    uint64_t order = c.order;
    for (uint64_t j = 0; j < order; ++j) {
      c.dlog[x] = static_cast<int64_t>(j);
      x = static_cast<uint64_t>((unsigned __int128)x * g % pe);
    }
    comps_.push_back(std::move(c));
    phi_ *= order;
  }

  L_ = 1;
  for (const auto& c : comps_) L_ = std::lcm(L_, c.order);
  roots_.resize(L_);
  for (uint64_t m = 0; m < L_; ++m)
    roots_[m] = e2pi(static_cast<double>(m) / static_cast<double>(L_));

  radix_.resize(comps_.size() + 1);
  radix_[0] = 1;
  for (size_t i = 0; i < comps_.size(); ++i)
    radix_[i + 1] = radix_[i] * comps_[i].order;
}

std::vector<uint64_t> CharacterTable::decode(uint64_t char_index) const {
  if (char_index >= phi_)
    throw std::out_of_range("CharacterTable: character index out of range");
  std::vector<uint64_t> c(comps_.size());
  for (size_t i = 0; i < comps_.size(); ++i)
    c[i] = (char_index / radix_[i]) % comps_[i].order;
  return c;
}

std::optional<uint64_t> CharacterTable::eval_exponent(uint64_t char_index,
                                                      uint64_t n) const {
  std::vector<uint64_t> c = decode(char_index);
  uint64_t nm = n % q_;
  if (q_ > 1 && std::gcd(nm, q_) != 1) return std::nullopt;
  uint64_t acc = 0;
  for (size_t i = 0; i < comps_.size(); ++i) {
    int64_t dl = comps_[i].dlog[n % comps_[i].pe];
    if (dl < 0) return std::nullopt;
    // contribution c_i * dlog_i * (L / order_i) mod L; factors stay < 2^40
    uint64_t term = c[i] * (L_ / comps_[i].order) % L_;
    term = term * (static_cast<uint64_t>(dl) % comps_[i].order) % L_;
    acc = (acc + term) % L_;
  }
  return acc;
}

cplx CharacterTable::eval(uint64_t char_index, uint64_t n) const {
  auto m = eval_exponent(char_index, n);
  if (!m) return {0.0, 0.0};
  return roots_[*m];
}

uint64_t CharacterTable::conductor(uint64_t char_index) const {
  auto qdivs = divisors_from_factorization(factorize_u64(q_));
  std::sort(qdivs.begin(), qdivs.end());
  for (uint64_t f : qdivs) {
    bool induced = true;
    for (uint64_t n = 1; n <= q_ && induced; n += f) {
      if (std::gcd(n, q_) != 1) continue;
      auto m = eval_exponent(char_index, n);
      if (!m || *m != 0) induced = false;
    }
    if (induced) return f;
  }
  return q_;  // unreachable: f = q always passes
}

cplx CharacterTable::gauss_sum(uint64_t char_index) const {
  KahanCSum acc;
  for (uint64_t l = 1; l <= q_; ++l) {
    auto m = eval_exponent(char_index, l);
    if (!m) continue;
    acc.add(e2pi(static_cast<double>(l % q_) / static_cast<double>(q_)) * roots_[*m]);
  }
  return acc.value();
}

cplx dirichlet_poly_eval(const DirichletPoly& poly, const CharRef& chi, double t) {
  KahanCSum acc;
  for (const auto& [n, a] : poly.coeffs) {
    cplx cv = chi(n);
    if (cv == cplx(0.0, 0.0)) continue;
    double dn = static_cast<double>(n);
    double ln = std::log(dn);
    cplx phase(std::cos(-t * ln), std::sin(-t * ln));
    acc.add(a * cv * phase / std::sqrt(dn));
  }
  return acc.value();
}

MvtReport mvt_report(const CharacterTable& G, uint64_t X, uint64_t Y,
                     const std::vector<double>& a, double fp, double T,
                     double step) {
  if (a.size() != Y) throw std::invalid_argument("mvt_report: need one a(n) per n in (X, X+Y]");
  double max_step = 1.0 / (4.0 * std::log(2.0 * static_cast<double>(X)));
  if (step > max_step)
    throw std::invalid_argument("mvt_report: quadrature step too coarse");

  MvtReport rep;
  rep.q = G.modulus();
  rep.X = X;
  rep.Y = Y;
  rep.T = T;
  rep.step = step;

  // precompute per-n data for nonzero coefficients
  std::vector<double> w, ln;
  std::vector<uint64_t> ns;
  for (uint64_t i = 0; i < Y; ++i) {
    if (a[i] == 0.0) continue;
    uint64_t n = X + 1 + i;
    ns.push_back(n);
    w.push_back(a[i] / std::sqrt(static_cast<double>(n)));
    ln.push_back(std::log(static_cast<double>(n)));
  }

  uint64_t npts = static_cast<uint64_t>(std::ceil(2.0 * T / step)) + 1;
  double dt = 2.0 * T / static_cast<double>(npts - 1);

  KahanSum lhs;
  for (uint64_t ci = 0; ci < G.size(); ++ci) {
    // character values on the support
    std::vector<cplx> cv(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) cv[i] = G.eval(ci, ns[i]);

    double part = chunked_block_sum(npts, [&](size_t lo, size_t hi) {
      KahanSum s;
      for (size_t j = lo; j < hi; ++j) {
        double t = -T + dt * static_cast<double>(j);
        KahanCSum p;
        for (size_t i = 0; i < ns.size(); ++i) {
          double ang = -t * ln[i];
          p.add(w[i] * cv[i] * cplx(std::cos(ang), std::sin(ang)));
        }
        double v = std::norm(p.value());
        double wgt = (j == 0 || j + 1 == npts) ? 0.5 : 1.0;
        s.add(wgt * v * dt);
      }
      return s.value();
    }, 256);
    lhs.add(part);
  }
  rep.lhs = lhs.value();

  KahanSum a2;
  for (double v : a) a2.add(v * v);
  double phi = static_cast<double>(G.size());
  double qd = static_cast<double>(G.modulus());
  rep.rhs_term1 = phi * T / static_cast<double>(X) * a2.value();

  PrimeTable pt = primes_upto(2 * X);
  double prod = 1.0;
  for (uint64_t p : pt.primes) {
    if (G.modulus() % p == 0) continue;
    prod *= 1.0 + (2.0 * fp - 2.0) / static_cast<double>(p);
  }
  rep.rhs_term2 = static_cast<double>(Y) * (phi / qd) * (phi / qd) * prod;

  double denom = rep.rhs_term1 + rep.rhs_term2;
  rep.ratio = denom > 0 ? rep.lhs / denom : 0.0;
  return rep;
}

cplx twisted_short_sum(const ArithSeq& seq, uint64_t d, const CharRef& chi,
                       double x, double Yp) {
  if (d == 0) throw std::invalid_argument("twisted_short_sum: d must be >= 1");
  uint64_t n_lo = static_cast<uint64_t>(std::ceil(x));
  uint64_t n_hi = static_cast<uint64_t>(std::floor(x + Yp));
  if (n_lo > n_hi) return {0.0, 0.0};
  if (d * n_lo <= seq.x_lo || d * n_hi > seq.x_hi())
    throw std::out_of_range("twisted_short_sum: d*n leaves the sequence support");
  KahanCSum acc;
  for (uint64_t n = n_lo; n <= n_hi; ++n)
    acc.add(seq.at(static_cast<int64_t>(d * n)) * chi(n));
  return acc.value() / Yp;
}

double twisted_short_sum_sweep(const ArithSeq& seq, uint64_t d, const CharRef& chi,
                               double x0, double x1, uint32_t count, double Yp) {
  if (count == 0) throw std::invalid_argument("sweep: count must be >= 1");
  double maxmod = 0.0;
  for (uint32_t i = 0; i < count; ++i) {
    double x = count == 1 ? x0 : x0 + (x1 - x0) * i / (count - 1);
    maxmod = std::max(maxmod, std::abs(twisted_short_sum(seq, d, chi, x, Yp)));
  }
  return maxmod;
}

}  // namespace divcor
