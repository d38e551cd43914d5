#include "ecconst/counts.hpp"

#include <stdexcept>
#include <string>

#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

void require_odd_prime(i64 p, const char* who) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<u64>(p)))
    throw std::invalid_argument(std::string(who) + ": expected an odd prime, got " + std::to_string(p));
}

BigInt big_pow(i64 base, int exp) {
  BigInt r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

BigInt gl2_order(i64 n) {
  if (n < 1) throw std::invalid_argument("gl2_order: level must be positive");
  BigInt order = 1;
  for (const auto& [p, k] : factorize(n).factors) {
    // |GL_2(Z/p^k)| = p^{4(k-1)} (p^2 - 1)(p^2 - p)
    order *= big_pow(p, 4 * (k - 1)) * BigInt(p * p - 1) * BigInt(p * p - p);
  }
  return order;
}

u64 fiber_order_2k(int k, i64 r) {
  if (k < 1 || k > 3) throw std::invalid_argument("fiber_order_2k: k must be 1, 2 or 3");
  return mod(r, 2) == 0 ? (u64{1} << (3 * k - 1)) : (u64{1} << (3 * k - 2));
}

BigInt gl2_trace_fiber_order(i64 n, i64 r) {
  if (n < 1) throw std::invalid_argument("gl2_trace_fiber_order: level must be positive");
  BigInt count = 1;
  for (const auto& [p, k] : factorize(n).factors) {
    // Lifting from level p to p^k multiplies the fiber by p^{3(k-1)}: the
    // trace on a coset g(1 + pX) is uniform in tr g mod p.
    BigInt base;
    if (p == 2) {
      base = fiber_order_2k(1, r);
    } else {
      base = BigInt(p) * p * (p - 1) - (mod(r, p) == 0 ? 0 : p);
    }
    count *= base * big_pow(p, 3 * (k - 1));
  }
  return count;
}

i64 trace_det_fiber_prime(i64 p, i64 r, i64 d) {
  require_odd_prime(p, "trace_det_fiber_prime");
  if (mod(d, p) == 0) throw std::invalid_argument("trace_det_fiber_prime: d must be a unit mod p");
  const i64 rr = mod(r, p);
  return p * (p + quad_char(rr * rr - 4 * mod(d, p), p));
}

BigInt sign_split_count(const SignSplitInput& input, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign_split_count: sign must be +1 or -1");
  BigInt total = 1, diff = 1;
  for (const auto& f : input) {
    if (f.total < 0 || abs(f.difference) > f.total)
      throw std::invalid_argument("sign_split_count: |difference| exceeds total");
    if ((f.total + f.difference) % 2 != 0)
      throw std::invalid_argument("sign_split_count: total and difference differ in parity");
    total *= f.total;
    diff *= f.difference;
  }
  return (total + sign * diff) / 2;
}

i64 psi_diff_odd(i64 p, i64 r) {
  require_odd_prime(p, "psi_diff_odd");
  const i64 leg = quad_char(-1, p);
  return mod(r, p) == 0 ? leg * p * (p - 1) : -leg * p;
}

int two_adic_exponent(i64 delta_sf) {
  switch (mod(delta_sf, 4)) {
    case 1: return 1;
    case 3: return 2;
    case 2: return 3;
    default:
      throw std::invalid_argument("two_adic_exponent: " + std::to_string(delta_sf) + " is not squarefree");
  }
}

i64 psi_diff_two(i64 delta_sf, i64 r) {
  const int k = two_adic_exponent(delta_sf);
  const i64 step = i64{1} << (k - 1);
  const i64 rr = mod(r, i64{1} << k);
  if (rr % step) return 0;
  // chi_4(-delta_sf / 2), with chi_4 of a non-integer taken as 1.
  const int chi = (delta_sf % 2 == 0) ? chi4(-delta_sf / 2) : 1;
  const i64 parity_sign = ((rr / step) % 2) ? -1 : 1;
  return -parity_sign * chi * (i64{1} << (2 * k - 1));
}

i64 phi_order_odd(i64 p) {
  require_odd_prime(p, "phi_order_odd");
  return p * (p * p * p - 2 * p * p - p + 3);
}

i64 phi_psi_diff(i64 p, int k) {
  if (p == 2) {
    if (k < 1 || k > 3) throw std::invalid_argument("phi_psi_diff: 2^k needs k in {1, 2, 3}");
    return k == 1 ? 2 : 0;
  }
  require_odd_prime(p, "phi_psi_diff");
  if (k != 1) throw std::invalid_argument("phi_psi_diff: odd primes divide M_E exactly once");
  return p;
}

MatrixCountReport matrix_count_trace_det(i64 p, int n, i64 r, i64 d) {
  require_odd_prime(p, "matrix_count_trace_det");
  if (n < 1) throw std::invalid_argument("matrix_count_trace_det: n must be >= 1");
  if (mod(d, p) == 0) throw std::invalid_argument("matrix_count_trace_det: d must be a unit");
  const i64 q = ipow(p, n);
  MatrixCountReport rep;
  rep.p = p;
  rep.n = n;
  rep.r = mod(r, q);
  rep.d = mod(d, q);
  const i64 delta = mod(rep.r * rep.r - 4 * rep.d, q);

  u64 total = 0;
  for (i64 y = 0; y < q; ++y) total += sqrt_count(p, n, mod(delta - y, q)) * bc_pair_count(p, n, y);
  rep.convolution = total;

  // f(p, Delta) with Delta = p^delta * Delta', delta = n when Delta = 0 mod p^n.
  const int dv = delta == 0 ? n : valuation(delta, p);
  const Rational P(p);
  auto inv_pow = [&](int e) { return Rational(1, big_pow(p, e)); };
  Rational f;
  if (dv == n && n % 2) {
    f = -inv_pow((n + 1) / 2);
    rep.branch = "delta=n odd";
  } else if (dv == n) {
    f = -inv_pow((n + 2) / 2);
    rep.branch = "delta=n even";
  } else if (dv % 2) {
    f = -(inv_pow((dv + 1) / 2) + inv_pow((dv + 3) / 2));
    rep.branch = "delta<n odd";
  } else {
    const int s = quad_char(delta / ipow(p, dv), p);
    const Rational t = Rational(dv + 1) / P;
    f = (s * (Rational(dv + 2) - t) + Rational(dv) - t) * inv_pow(dv / 2 + 1);
    rep.branch = s > 0 ? "delta<n even square" : "delta<n even nonsquare";
  }
  const Rational q2 = Rational(big_pow(p, 2 * n));
  rep.closed_form = q2 * (1 + 1 / P + f);
  rep.closed_form_agrees = rep.closed_form == Rational(BigInt(rep.convolution));
  rep.within_bound = Rational(BigInt(rep.convolution)) <= q2 * (1 + Rational(3) / P);
  return rep;
}

}  // namespace ecconst
