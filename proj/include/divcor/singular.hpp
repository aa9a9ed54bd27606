#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace divcor {

struct LocalFactor {
  uint64_t p = 0;
  int64_t h = 0;
  double k = 0;
  std::optional<double> l;  // absent = Lambda-side factor
  double value = 0;
  double truncation_error = 0;
};

// Local factor of the d_k * d_l singular series:
//   S_{k,l,p}(h) = (1 - 1/p)^{k+l-2} * sum_{a,b} d_k(p^a) d_l(p^b) rho_p(a,b;h)
// where rho_p(a,b;h) is the natural density of { n : v_p(n) = a, v_p(n+h) = b },
// in closed form from v = v_p(h): the only pairs with positive density are
// a = b < v, a = b = v, (a > v, b = v) and (a = v, b > v).
LocalFactor local_factor_dd(double k, double l, uint64_t p, int64_t h, double tol);

// Lambda * d_k local factor:
//   S_{k,p}(h) = (1 - 1/p)^{k-1} * E[ d_k(p^{v_p(n+h)}) | p does not divide n ].
LocalFactor local_factor_ld(double k, uint64_t p, int64_t h, double tol);

struct SingularConstant {
  double k = 0;
  std::optional<double> l;
  int64_t h = 0;
  double value = 0;
  double product = 0;  // Euler product alone, without the Gamma prefactor
  uint64_t p_max = 0;
  double tail_bound = 0;
};

// C_{k,l,h} = 1/(Gamma(k) Gamma(l)) * prod_p S_{k,l,p}(h), truncated at p_max
// with the log-tail below tol (|S_p - 1| <= (k-1)(l-1)/p^2 for p not dividing h).
SingularConstant constant_dd(double k, double l, int64_t h, double tol);

// C_{k,h} = 1/Gamma(k) * prod_p S_{k,p}(h);  |S_p - 1| <= 2(k-1)/p^2 off h.
SingularConstant constant_ld(double k, int64_t h, double tol);

enum class OracleMode { dd, ld };

// Brute-force p-adic oracle over n = 1..p^E with valuations capped at E-1:
//   dd: (1-1/p)^{k+l-2} p^{-E} sum_n d_k(p^{v_p(n)}) d_l(p^{v_p(n+h)})
//   ld: (1-1/p)^{k-1} * (p/(p-1)) p^{-E} sum_{n: p not | n} d_k(p^{v_p(n+h)})
double local_oracle(OracleMode mode, double k, double l, uint64_t p, int64_t h,
                    uint32_t E);

// Reference zeta values, Euler-Maclaurin tail integrals over the plain series;
// shares no code with the local-factor path.
double zeta_reference(double s);

}  // namespace divcor
