#include "ecconst/constants.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "ecconst/counts.hpp"
#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

constexpr long double kEps = std::numeric_limits<long double>::epsilon();

const std::vector<i64>& primes_cached(i64 bound) {
  static std::mutex mu;
  static std::vector<i64> primes;
  static i64 sieved = 0;
  std::lock_guard lock(mu);
  if (bound > sieved) {
    primes = primes_up_to(std::max<i64>(bound, 2 * sieved));
    sieved = std::max<i64>(bound, 2 * sieved);
  }
  return primes;
}

// zeta(s) - 1 by Euler-Maclaurin from N = 64 with three Bernoulli corrections.
long double zeta_minus_one(int s) {
  constexpr int N = 64;
  long double sum = 0;
  for (int n = N - 1; n >= 2; --n) sum += std::pow(static_cast<long double>(n), -s);
  const long double Nl = N;
  sum += std::pow(Nl, 1 - s) / (s - 1) + std::pow(Nl, -s) / 2;
  static constexpr long double bern[] = {1.0L / 6, -1.0L / 30, 1.0L / 42};
  long double rising = s;  // s (s + 1) ... (s + 2j - 2)
  long double fact = 2;    // (2j)!
  for (int j = 1; j <= 3; ++j) {
    sum += bern[j - 1] / fact * rising * std::pow(Nl, -s - 2 * j + 1);
    rising *= static_cast<long double>(s + 2 * j - 1) * (s + 2 * j);
    fact *= static_cast<long double>(2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

long double ld(const Rational& q) { return q.convert_to<long double>(); }

Rational factor(ConstantKind kind, i64 l) {
  const BigInt L(l);
  switch (kind.family) {
    case ConstantFamily::Trace:
      if (mod(kind.r, l) == 0) return Rational(L * L, L * L - 1);
      return 1 - Rational(1, (L - 1) * (L * L - 1));
    case ConstantFamily::Prime:
      return 1 - Rational(L * L - L - 1, (L - 1) * (L - 1) * (L - 1) * (L + 1));
    case ConstantFamily::Cyclic:
      return 1 - Rational(1, L * (L - 1) * (L - 1) * (L + 1));
  }
  return 1;
}

long double factor_ld(ConstantKind kind, i64 l) {
  const long double x = l;
  switch (kind.family) {
    case ConstantFamily::Trace:
      if (mod(kind.r, l) == 0) return 1 + 1 / (x * x - 1);
      return 1 - 1 / ((x - 1) * (x * x - 1));
    case ConstantFamily::Prime:
      return 1 - (x * x - x - 1) / ((x - 1) * (x - 1) * (x - 1) * (x + 1));
    case ConstantFamily::Cyclic:
      return 1 - 1 / (x * (x - 1) * (x - 1) * (x + 1));
  }
  return 1;
}

i64 abs64(i64 x) { return x < 0 ? -x : x; }

}  // namespace

SingularCurveError::SingularCurveError(i64 a, i64 b)
    : std::invalid_argument("curve (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") is singular: 4a^3 + 27b^2 = 0") {}

SerreInvariants invariants_from_delta_sf(i64 delta_sf) {
  SerreInvariants s{};
  s.delta = delta_sf;
  s.delta_sf = delta_sf;
  s.M = obstruction_level(delta_sf);
  s.k = two_adic_exponent(delta_sf);
  s.W = delta_sf % 2 == 0 ? delta_sf / 2 : delta_sf;
  return s;
}

SerreInvariants serre_invariants(i64 a, i64 b) {
  const i128 inner = 4 * static_cast<i128>(a) * a * a + 27 * static_cast<i128>(b) * b;
  if (inner == 0) throw SingularCurveError(a, b);
  const i128 delta = -16 * inner;
  if (delta > std::numeric_limits<i64>::max() || delta < std::numeric_limits<i64>::min())
    throw std::out_of_range("discriminant of (" + std::to_string(a) + ", " + std::to_string(b) + ") exceeds 64 bits");
  SerreInvariants s = invariants_from_delta_sf(squarefree_part(static_cast<i64>(delta)));
  s.delta = static_cast<i64>(delta);
  return s;
}

int delta_symbol(i64 delta_sf, i64 r) {
  const int k = two_adic_exponent(delta_sf);
  const i64 step = i64{1} << (k - 1);
  if (mod(r, step) != 0)
    throw std::invalid_argument("delta_symbol: 2^" + std::to_string(k - 1) + " does not divide r = " + std::to_string(r));
  const i64 W = obstruction_level(delta_sf) >> k;
  const i64 g = gcd_abs(W, r);
  const i64 exponent = omega(W / g) + (W + 1) / 2 + r / step;
  const int chi = delta_sf % 2 == 0 ? chi4(-delta_sf / 2) : 1;
  return (mod(exponent, 2) ? -1 : 1) * chi;
}

std::string ConstantKind::name() const {
  switch (family) {
    case ConstantFamily::Trace: return "trace(" + std::to_string(r) + ")";
    case ConstantFamily::Prime: return "prime";
    case ConstantFamily::Cyclic: return "cyclic";
  }
  return "?";
}

long double ConstantValue::value_lo() const {
  return ld(ratio) * product_lo * (1 - 4 * kEps);
}

long double ConstantValue::value_hi() const {
  return ld(ratio) * product_hi * (1 + 4 * kEps);
}

long double prime_zeta_2() {
  // P(2) = sum_k mu(k)/k log zeta(2k); the k-th term is about 4^{-k}.
  long double sum = 0;
  for (int k = 40; k >= 1; --k) {
    const int mu = moebius(k);
    if (mu) sum += mu * std::log1p(zeta_minus_one(2 * k)) / k;
  }
  return sum;
}

Rational euler_partial_product(ConstantKind kind, i64 bound) {
  Rational product = 1;
  for (i64 l : primes_up_to(bound)) product *= factor(kind, l);
  return product;
}

ConstantValue universal_constant(ConstantKind kind, i64 L) {
  if (L < 3) throw std::invalid_argument("cutoff must be at least 3");
  const auto& all = primes_cached(L);
  long double product = 1, sum_sq = 0;
  std::size_t ops = 0;
  for (i64 l : all) {
    if (l > L) break;
    product *= factor_ld(kind, l);
    sum_sq += 1.0L / (static_cast<long double>(l) * l);
    ++ops;
  }
  const long double Ll = L;
  // Primes above the cutoff that divide r keep their divisor-side factor;
  // the tail bound below covers the rest.
  if (kind.family == ConstantFamily::Trace && kind.r != 0) {
    for (const auto& f : factorize(abs64(kind.r)).factors)
      if (f.prime > L) {
        product *= factor_ld(kind, f.prime);
        ++ops;
      }
  }
  // T2 = sum_{p > L} p^{-2}.
  const long double t2 = prime_zeta_2() - sum_sq;
  long double lo = 0, hi = 0;
  switch (kind.family) {
    case ConstantFamily::Trace:
      if (kind.r == 0) {
        lo = t2;
        hi = t2 + 1 / (3 * Ll * Ll * Ll);
      } else {
        lo = -1 / (Ll * Ll);
        hi = 0;
      }
      break;
    case ConstantFamily::Prime:
      lo = -t2 - 3 / (2 * Ll * Ll) - 4 / (3 * Ll * Ll * Ll);
      hi = -t2;
      break;
    case ConstantFamily::Cyclic:
      lo = -1 / (Ll * Ll * Ll);
      hi = 0;
      break;
  }
  // Absolute slack for the rounding in t2 and the partial sum.
  const long double slack = 64 * kEps * (1 + static_cast<long double>(ops) * 1e-4L);
  lo -= slack;
  hi += slack;
  if (kind.family == ConstantFamily::Trace) product *= 2 / std::acos(-1.0L);
  const long double rel = 8 * static_cast<long double>(ops + 8) * kEps;
  ConstantValue v;
  v.ratio = 1;
  v.product_lo = product * std::exp(lo) * (1 - rel);
  v.product_hi = product * std::exp(hi) * (1 + rel);
  v.cutoff = L;
  return v;
}

ConstantValue universal_trace_constant(i64 r, i64 cutoff) { return universal_constant(ConstantKind::trace(r), cutoff); }
ConstantValue universal_prime_constant(i64 cutoff) { return universal_constant(ConstantKind::prime(), cutoff); }
ConstantValue universal_cyclic_constant(i64 cutoff) { return universal_constant(ConstantKind::cyclic(), cutoff); }

Rational serre_trace_ratio(i64 delta_sf, i64 r) {
  const SerreInvariants s = invariants_from_delta_sf(delta_sf);
  const i64 step = i64{1} << (s.k - 1);
  if (mod(r, step) != 0) return 1;
  const i64 W = s.M >> s.k;
  const BigInt numerator = BigInt(s.M) * step * euler_phi(gcd_abs(W, r));
  return 1 + delta_symbol(delta_sf, r) * Rational(numerator, gl2_trace_fiber_order(s.M, mod(r, s.M)));
}

Rational serre_prime_ratio(i64 delta_sf) {
  if (mod(delta_sf, 4) != 1) return 1;
  Rational product = 1;
  for (const auto& f : factorize(delta_sf).factors) {
    const BigInt p(f.prime);
    product /= p * p * p - 2 * p * p - p + 3;
  }
  return 1 + product;
}

Rational serre_cyclic_ratio(i64 delta_sf) {
  if (mod(delta_sf, 4) != 1) return 1;
  const i64 m = obstruction_level(delta_sf);
  BigInt denominator = 1;
  for (const auto& f : factorize(m).factors) denominator *= gl2_order(f.prime) - 1;
  return 1 + Rational(moebius(m), denominator);
}

Rational serre_ratio(i64 delta_sf, ConstantKind kind) {
  switch (kind.family) {
    case ConstantFamily::Trace: return serre_trace_ratio(delta_sf, kind.r);
    case ConstantFamily::Prime: return serre_prime_ratio(delta_sf);
    case ConstantFamily::Cyclic: return serre_cyclic_ratio(delta_sf);
  }
  return 1;
}

ConstantValue serre_constant(i64 a, i64 b, ConstantKind kind, i64 cutoff) {
  const SerreInvariants s = serre_invariants(a, b);
  ConstantValue v = universal_constant(kind, cutoff);
  v.ratio = serre_ratio(s.delta_sf, kind);
  return v;
}

ConstantValue serre_trace_constant(i64 a, i64 b, i64 r, i64 cutoff) {
  return serre_constant(a, b, ConstantKind::trace(r), cutoff);
}
ConstantValue serre_prime_constant(i64 a, i64 b, i64 cutoff) { return serre_constant(a, b, ConstantKind::prime(), cutoff); }
ConstantValue serre_cyclic_constant(i64 a, i64 b, i64 cutoff) {
  return serre_constant(a, b, ConstantKind::cyclic(), cutoff);
}

Rational group_ratio(const GroupSlice& G, ConstantKind kind) {
  const u32 m = G.level();
  if (!subgroup_spot_check(G))
    throw std::invalid_argument("group_constant: " + G.descriptor().describe() + " at level " + std::to_string(m) +
                                " is not a subgroup");
  const auto primes = factorize(m).factors;
  const BigInt order(G.size());
  switch (kind.family) {
    case ConstantFamily::Trace: {
      const u32 r = static_cast<u32>(mod(kind.r, m));
      std::size_t fiber = 0;
      for (const auto& g : G.members())
        if (trace_mod(g, m) == r) ++fiber;
      Rational q(BigInt(m) * fiber, order);
      for (const auto& f : primes)
        q *= Rational(gl2_order(f.prime), BigInt(f.prime) * gl2_trace_fiber_order(f.prime, kind.r));
      return q;
    }
    case ConstantFamily::Prime: {
      std::size_t in_phi = 0;
      for (const auto& g : G.members())
        if (ecconst::in_phi(g, m)) ++in_phi;
      Rational q(BigInt(in_phi), order);
      for (const auto& f : primes) q *= Rational(gl2_order(f.prime), f.prime == 2 ? 2 : phi_order_odd(f.prime));
      return q;
    }
    case ConstantFamily::Cyclic: {
      Rational sum = 0;
      for (i64 d : divisors(m)) {
        const int mu = moebius(d);
        if (mu) sum += Rational(mu, BigInt(project(G, static_cast<u32>(d)).size()));
      }
      for (const auto& f : primes) sum /= 1 - Rational(1, gl2_order(f.prime));
      return sum;
    }
  }
  return 1;
}

ConstantValue group_constant(u32 m, const GroupSlice& G, ConstantKind kind, i64 cutoff) {
  if (G.level() != m) throw std::invalid_argument("group_constant: slice level differs from m");
  ConstantValue v = universal_constant(kind, cutoff);
  v.ratio = group_ratio(G, kind);
  return v;
}

}  // namespace ecconst
