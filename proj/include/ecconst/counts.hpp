#pragma once

// Closed-form counts over GL_2(Z/nZ) and M_2(Z/p^nZ). Each of these has an
// enumeration counterpart in gl2.hpp; the test suites pair them.

#include <string>
#include <vector>

#include "ecconst/numeric.hpp"

namespace ecconst {

// n^4 prod_{p | n} (1 - 1/p)(1 - 1/p^2).
BigInt gl2_order(i64 n);

// |GL_2(Z/2^k)_r| for k in {1, 2, 3}.
u64 fiber_order_2k(int k, i64 r);

// |GL_2(Z/nZ)_r| for any level, as a CRT product of prime-power fibers.
BigInt gl2_trace_fiber_order(i64 n, i64 r);

// |{g in GL_2(F_p) : tr g = r, det g = d}| = p (p + ((r^2 - 4d)/p)).
i64 trace_det_fiber_prime(i64 p, i64 r, i64 d);

// Per prime-power data for the sign-splitting count: |X_{p^k}| and
// |psi^{-1}(1) cap X_{p^k}| - |psi^{-1}(-1) cap X_{p^k}|.
struct SignSplitFactor {
  BigInt total;
  BigInt difference;
};

using SignSplitInput = std::vector<SignSplitFactor>;

// |psi_M^{-1}(sign) cap X_M| = (|X_M| + sign * prod differences) / 2.
BigInt sign_split_count(const SignSplitInput& input, int sign);

// |psi_p^{-1}(1)_r| - |psi_p^{-1}(-1)_r| for odd p, psi_p = (det / p).
i64 psi_diff_odd(i64 p, i64 r);

// The same difference at the 2-power factor 2^k of M_E, where k and psi_{2^k}
// are determined by delta_sf.
i64 psi_diff_two(i64 delta_sf, i64 r);

// The exponent k in {1, 2, 3} with M_E = 2^k * W.
int two_adic_exponent(i64 delta_sf);

// p (p^3 - 2p^2 - p + 3), the size of Phi_p for odd p.
i64 phi_order_odd(i64 p);

// Phi_{p^k} count difference of psi^{-1}(1) and psi^{-1}(-1): p for odd p
// (k = 1), and 2, 0, 0 for 2^k with k = 1, 2, 3.
i64 phi_psi_diff(i64 p, int k);

struct MatrixCountReport {
  i64 p = 0;
  int n = 0;
  i64 r = 0;
  i64 d = 0;
  u64 convolution = 0;    // sum_y N_{Delta - y} P_y, the exact count
  Rational closed_form;   // p^{2n} (1 + 1/p + f(p, Delta))
  std::string branch;     // which case of f(p, Delta) applied
  bool closed_form_agrees = false;
  bool within_bound = false;  // count <= p^{2n} (1 + 3/p)
};

// |{A in M_2(Z/p^n) : tr A = r, det A = d}| for odd p and unit d.
MatrixCountReport matrix_count_trace_det(i64 p, int n, i64 r, i64 d);

}  // namespace ecconst
