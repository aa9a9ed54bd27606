#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "divcor/arith_fn.hpp"
#include "divcor/factor_sieve.hpp"
#include "divcor/util.hpp"

namespace divcor {

// The full character group mod q.  Characters are indexed 0 .. phi(q)-1 in
// mixed radix over the cyclic components of (Z/q)^*; index 0 is principal.
// Values are exponent sums over component orders, materialized through one
// shared root-of-unity table, so the group structure is exact integers.
class CharacterTable {
 public:
  explicit CharacterTable(uint64_t q);

  uint64_t modulus() const { return q_; }
  uint64_t size() const { return phi_; }

  cplx eval(uint64_t char_index, uint64_t n) const;

  // Exponent m with chi(n) = e(m / root_order()); nullopt when gcd(n,q) > 1.
  std::optional<uint64_t> eval_exponent(uint64_t char_index, uint64_t n) const;
  uint64_t root_order() const { return L_; }

  bool is_principal(uint64_t char_index) const { return char_index == 0; }

  // Smallest f | q such that chi is induced by a character mod f, found by
  // checking chi = 1 on residues 1 mod f coprime to q (exact integer test).
  uint64_t conductor(uint64_t char_index) const;

  // tau(chi) = sum_{l=1}^{q} e(l/q) chi(l), direct summation.
  cplx gauss_sum(uint64_t char_index) const;

 private:
  struct Component {
    uint64_t pe;          // prime power modulus of this cyclic factor
    uint64_t order;
    std::vector<int64_t> dlog;  // index: residue mod pe; -1 for non-coprime
  };

  uint64_t q_;
  uint64_t phi_;
  uint64_t L_;  // lcm of component orders
  std::vector<Component> comps_;
  std::vector<uint64_t> radix_;  // cumulative products for index decoding
  std::vector<cplx> roots_;      // e(m / L), m = 0..L-1

  std::vector<uint64_t> decode(uint64_t char_index) const;
};

// Reference to one character; callable on integers.
struct CharRef {
  const CharacterTable* table = nullptr;
  uint64_t index = 0;
  cplx operator()(uint64_t n) const { return table->eval(index, n); }
  uint64_t modulus() const { return table->modulus(); }
  bool principal() const { return table->is_principal(index); }
};

// Sparse Dirichlet polynomial sum a(n) chi(n) n^{-1/2 - it}.
struct DirichletPoly {
  std::vector<std::pair<uint64_t, cplx>> coeffs;
};

cplx dirichlet_poly_eval(const DirichletPoly& poly, const CharRef& chi, double t);

struct MvtReport {
  uint64_t q = 0;
  uint64_t X = 0, Y = 0;
  double T = 0, step = 0;
  double lhs = 0;
  double rhs_term1 = 0;
  double rhs_term2 = 0;
  double ratio = 0;
};

// Numerical check of the log-free mean value theorem surface:
//   lhs  = sum_{chi mod q} int_{-T}^{T} |sum_{X<n<=X+Y} a(n) chi(n) n^{-1/2-it}|^2 dt
//   rhs1 = phi(q) T / X * sum |a(n)|^2
//   rhs2 = Y (phi(q)/q)^2 prod_{p <= 2X, p not | q} (1 + (2 f(p) - 2)/p)
// with f(p) = fp constant (= k for a(n) bounded by d_k).  Trapezoid quadrature,
// step must resolve the maximal frequency log(2X).
MvtReport mvt_report(const CharacterTable& G, uint64_t X, uint64_t Y,
                     const std::vector<double>& a, double fp, double T,
                     double step);

// (1/Yp) sum_{x <= n <= x + Yp} f(d n) chi(n); f given as a materialized
// sequence, d n must stay inside its support.
cplx twisted_short_sum(const ArithSeq& seq, uint64_t d, const CharRef& chi,
                       double x, double Yp);

// Max modulus of the twisted short sum over `count` x-values equally spaced in
// [x0, x1].
double twisted_short_sum_sweep(const ArithSeq& seq, uint64_t d, const CharRef& chi,
                               double x0, double x1, uint32_t count, double Yp);

}  // namespace divcor
