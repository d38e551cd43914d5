#pragma once

// Reductions of Y^2 = X^3 + aX + b modulo primes: Frobenius traces by
// character sums, group structure, and per-prime records.

#include <utility>
#include <vector>

#include "ecconst/constants.hpp"
#include "ecconst/numeric.hpp"

namespace ecconst {

class TraceCache;

class Curve {
 public:
  // Throws SingularCurveError when 4a^3 + 27b^2 = 0.
  Curve(i64 a, i64 b);

  i64 a() const { return a_; }
  i64 b() const { return b_; }
  // 4a^3 + 27b^2; the discriminant is -16 times this.
  i128 disc_core() const { return core_; }
  bool good_prime(i64 p) const;

  friend bool operator==(const Curve&, const Curve&) = default;

 private:
  i64 a_, b_;
  i128 core_;
};

class BadReductionError : public std::invalid_argument {
 public:
  BadReductionError(const Curve& c, i64 p);
};

struct FrobeniusRecord {
  i64 p = 0;
  i64 a_p = 0;
  i64 order = 0;  // p + 1 - a_p
  bool cyclic = false;
  bool prime_order = false;

  friend bool operator==(const FrobeniusRecord&, const FrobeniusRecord&) = default;
};

// a_p = -sum_x ((x^3 + ax + b) / p).
i64 frobenius_trace(const Curve& c, i64 p);

// Number of roots of x^3 + ax + b in F_p, from deg gcd(x^p - x, f).
int cubic_root_count(const Curve& c, i64 p);

// (n1, n2) with E(F_p) = Z/n1 x Z/n2 and n1 | n2. The seed only moves the
// starting x of the point search; the result does not depend on it.
std::pair<i64, i64> group_structure(const Curve& c, i64 p, u64 seed = 0);
std::pair<i64, i64> group_structure(const Curve& c, i64 p, i64 a_p, u64 seed);

struct Predicates {
  bool cyclic;
  bool prime_order;
};

Predicates predicates(const Curve& c, i64 p);

// Record for a good prime with a known trace; checks the Hasse bound.
FrobeniusRecord make_record(const Curve& c, i64 p, i64 a_p);

// Records for all good primes 3 <= p <= x, ascending. Traces are read from
// and written to the cache when one is given.
std::vector<FrobeniusRecord> frobenius_stream(const Curve& c, i64 x, TraceCache* cache = nullptr);

// Traces of (a, b) for every b in bs and every prime in primes, computed one
// prime at a time with the x^3 + ax part shared across b. Entries for bad
// primes hold kBadPrime.
inline constexpr i64 kBadPrime = INT64_MIN;
std::vector<std::vector<i64>> batch_traces(i64 a, const std::vector<i64>& bs, const std::vector<i64>& primes);

// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
i64 sqrt_mod(i64 a, i64 p);

}  // namespace ecconst
