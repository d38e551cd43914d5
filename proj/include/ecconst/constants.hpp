#pragma once

// Average constants C_r, C_prime, C_cyclic as certified Euler products, and the
// per-curve constants of Serre curves and of arbitrary level-m images.

#include <stdexcept>
#include <string>

#include "ecconst/gl2.hpp"
#include "ecconst/numeric.hpp"

namespace ecconst {

class SingularCurveError : public std::invalid_argument {
 public:
  SingularCurveError(i64 a, i64 b);
};

struct SerreInvariants {
  i64 delta;     // -16 (4a^3 + 27b^2)
  i64 delta_sf;  // squarefree part of delta
  i64 M;         // M_E
  int k;         // M = 2^k |W|
  i64 W;         // delta_sf / gcd(delta_sf, 2), signed
};

SerreInvariants serre_invariants(i64 a, i64 b);
SerreInvariants invariants_from_delta_sf(i64 delta_sf);

// The sign delta(delta_sf, r); requires 2^{k-1} | r. The W here is the odd
// part M / 2^k, taken positive.
int delta_symbol(i64 delta_sf, i64 r);

enum class ConstantFamily { Trace, Prime, Cyclic };

struct ConstantKind {
  ConstantFamily family = ConstantFamily::Trace;
  i64 r = 0;  // Trace only

  static ConstantKind trace(i64 r) { return {ConstantFamily::Trace, r}; }
  static ConstantKind prime() { return {ConstantFamily::Prime, 0}; }
  static ConstantKind cyclic() { return {ConstantFamily::Cyclic, 0}; }
  std::string name() const;
};

// ratio * [product_lo, product_hi] contains the constant.
struct ConstantValue {
  Rational ratio;
  long double product_lo = 0;
  long double product_hi = 0;
  i64 cutoff = 0;

  long double value_lo() const;
  long double value_hi() const;
  long double midpoint() const { return (value_lo() + value_hi()) / 2; }
  long double width() const { return value_hi() - value_lo(); }
  bool contains(long double x) const { return value_lo() <= x && x <= value_hi(); }
};

// Euler product over all primes for the family, certified with primes above
// the cutoff handled by analytic tail bounds. C_r carries its 2/pi here.
ConstantValue universal_constant(ConstantKind kind, i64 cutoff);
ConstantValue universal_trace_constant(i64 r, i64 cutoff);
ConstantValue universal_prime_constant(i64 cutoff);
ConstantValue universal_cyclic_constant(i64 cutoff);

// The exact product of the Euler factors over primes l <= bound (without 2/pi).
Rational euler_partial_product(ConstantKind kind, i64 bound);

// Curve-dependent correction C_{E,.} / C_. for a Serre curve with this delta_sf.
Rational serre_trace_ratio(i64 delta_sf, i64 r);
Rational serre_prime_ratio(i64 delta_sf);
Rational serre_cyclic_ratio(i64 delta_sf);
Rational serre_ratio(i64 delta_sf, ConstantKind kind);

// The constant E would have if it were a Serre curve. The Serre property is
// not checked here.
ConstantValue serre_trace_constant(i64 a, i64 b, i64 r, i64 cutoff);
ConstantValue serre_prime_constant(i64 a, i64 b, i64 cutoff);
ConstantValue serre_cyclic_constant(i64 a, i64 b, i64 cutoff);
ConstantValue serre_constant(i64 a, i64 b, ConstantKind kind, i64 cutoff);

// Constant for a curve with m_E = m and G_m(E) = G, from the enumerated group.
Rational group_ratio(const GroupSlice& G, ConstantKind kind);
ConstantValue group_constant(u32 m, const GroupSlice& G, ConstantKind kind, i64 cutoff);

// The prime zeta value P(2) = sum_p p^{-2}.
long double prime_zeta_2();

}  // namespace ecconst
