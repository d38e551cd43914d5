#pragma once

// Integer and modular arithmetic: factorization, squarefree parts, quadratic
// characters, the square-root and bc-pair counts modulo odd prime powers, and
// ideal counts in quadratic fields.

#include <vector>

#include "ecconst/numeric.hpp"

namespace ecconst {

struct PrimePower {
  i64 prime;
  int exponent;

  i64 value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// sign * prod p^e; primes strictly increasing.
struct Factorization {
  int sign = 1;
  std::vector<PrimePower> factors;

  i64 value() const;
};

// Floor modulus: result in [0, m) for m > 0.
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// gcd(x, 0) = |x|; signs are ignored.
i64 gcd_abs(i64 x, i64 y);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
i64 ipow(i64 base, int exp);
i64 inverse_mod(i64 a, i64 m);

// Deterministic Miller-Rabin on the full 64-bit range.
bool is_prime(u64 n);

// Primes in [2, n], ascending.
std::vector<i64> primes_up_to(i64 n);

// Exponent of p in n (n != 0).
int valuation(i64 n, i64 p);

Factorization factorize(i64 n);

// Squarefree d with the sign of n and n/d a perfect square.
i64 squarefree_part(i64 n);

bool is_squarefree(i64 n);

// Legendre symbol (d/p) for an odd prime p.
int quad_char(i64 d, i64 p);

int chi4(i64 n);
int chi8(i64 n);

// |{x mod p^n : x^2 = y}| for odd prime p.
u64 sqrt_count(i64 p, int n, i64 y);

// |{(b, c) mod p^n : 4bc = y}| for odd prime p.
u64 bc_pair_count(i64 p, int n, i64 y);

// Number of integral ideals of norm m in the maximal order of Q(sqrt D).
u64 ideal_norm_count(i64 D, i64 m);

struct ArithFunctions {
  int omega;  // distinct prime factors
  int mu;     // Moebius
  u64 tau;    // number of divisors
  u64 phi;    // Euler totient
};

ArithFunctions arith_functions(i64 n);

inline int omega(i64 n) { return arith_functions(n < 0 ? -n : n).omega; }
inline u64 euler_phi(i64 n) { return arith_functions(n < 0 ? -n : n).phi; }
inline int moebius(i64 n) { return arith_functions(n).mu; }

// Positive divisors of n, ascending.
std::vector<i64> divisors(i64 n);

}  // namespace ecconst
