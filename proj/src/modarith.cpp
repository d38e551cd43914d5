#include "ecconst/modarith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ecconst {

namespace {

constexpr i64 kTrialDivisionBound = 1'000'000;

u64 abs_u64(i64 n) { return n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n); }

u64 pollard_brent(u64 n, u64 c) {
  // Brent's cycle variant with batched gcds.
  auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
  u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
  const u64 m = 128;
  u64 r = 1;
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += m;
    } while (k < r && g == 1);
    r <<= 1;
  } while (g == 1);
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 c = 1;; ++c) {
    u64 d = pollard_brent(n, c);
    if (d != n && d != 1) {
      split_large(d, out);
      split_large(n / d, out);
      return;
    }
  }
}

}  // namespace

i64 PrimePower::value() const { return ipow(prime, exponent); }

i64 Factorization::value() const {
  i128 v = sign;
  for (const auto& f : factors) {
    for (int i = 0; i < f.exponent; ++i) {
      v *= f.prime;
      if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw std::overflow_error("factorization value exceeds 64 bits");
    }
  }
  return static_cast<i64>(v);
}

i64 gcd_abs(i64 x, i64 y) { return static_cast<i64>(std::gcd(abs_u64(x), abs_u64(y))); }

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

i64 ipow(i64 base, int exp) {
  i128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<i64>::max() || r < std::numeric_limits<i64>::min())
      throw std::overflow_error("ipow overflow");
  }
  return static_cast<i64>(r);
}

i64 inverse_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    i64 q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("inverse_mod: " + std::to_string(a) + " is not a unit mod " + std::to_string(m));
  return mod(x, m);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are deterministic below 3.3 * 10^24.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

int valuation(i64 n, i64 p) {
  if (n == 0) throw std::invalid_argument("valuation of 0");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Factorization factorize(i64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be nonzero");
  Factorization f;
  f.sign = n < 0 ? -1 : 1;
  u64 m = abs_u64(n);
  for (u64 p = 2; p < static_cast<u64>(kTrialDivisionBound) && p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.push_back({static_cast<i64>(p), e});
  }
  if (m > 1) {
    std::vector<u64> rest;
    split_large(m, rest);
    std::sort(rest.begin(), rest.end());
    for (u64 p : rest) {
      if (!f.factors.empty() && f.factors.back().prime == static_cast<i64>(p))
        ++f.factors.back().exponent;
      else
        f.factors.push_back({static_cast<i64>(p), 1});
    }
  }
  return f;
}

i64 squarefree_part(i64 n) {
  if (n == 0) throw std::invalid_argument("squarefree_part: n must be nonzero");
  const Factorization f = factorize(n);
  i64 d = f.sign;
  for (const auto& pp : f.factors)
    if (pp.exponent % 2) d *= pp.prime;
  return d;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  for (const auto& pp : factorize(n).factors)
    if (pp.exponent > 1) return false;
  return true;
}

int quad_char(i64 d, i64 p) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<u64>(p)))
    throw std::invalid_argument("quad_char: modulus " + std::to_string(p) + " is not an odd prime");
  const u64 r = powmod(static_cast<u64>(mod(d, p)), static_cast<u64>((p - 1) / 2), static_cast<u64>(p));
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

int chi4(i64 n) {
  switch (mod(n, 4)) {
    case 1: return 1;
    case 3: return -1;
    default: return 0;
  }
}

int chi8(i64 n) {
  switch (mod(n, 8)) {
    case 1:
    case 7: return 1;
    case 3:
    case 5: return -1;
    default: return 0;
  }
}

namespace {

void check_odd_prime_power(i64 p, int n, i64 y) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<u64>(p)))
    throw std::invalid_argument("expected an odd prime, got " + std::to_string(p));
  if (n < 1) throw std::invalid_argument("exponent must be >= 1");
  const i64 q = ipow(p, n);
  if (y < 0 || y >= q) throw std::invalid_argument("residue out of range [0, p^n)");
}

}  // namespace

u64 sqrt_count(i64 p, int n, i64 y) {
  check_odd_prime_power(p, n, y);
  if (y == 0) return static_cast<u64>(ipow(p, n / 2));
  const int v = valuation(y, p);
  if (v % 2) return 0;
  const int m = v / 2;
  const i64 unit = y / ipow(p, v);
  return static_cast<u64>(ipow(p, m)) * static_cast<u64>(1 + quad_char(unit, p));
}

u64 bc_pair_count(i64 p, int n, i64 y) {
  check_odd_prime_power(p, n, y);
  const u64 q = static_cast<u64>(ipow(p, n));
  const u64 phi_q = q / static_cast<u64>(p) * static_cast<u64>(p - 1);
  if (y == 0) return static_cast<u64>(n) * phi_q + q;
  const int m = valuation(y, p);
  return static_cast<u64>(m + 1) * phi_q;
}

u64 ideal_norm_count(i64 D, i64 m) {
  if (D == 0 || D == 1) throw std::invalid_argument("ideal_norm_count: D must not be 0 or 1");
  if (!is_squarefree(D)) throw std::invalid_argument("ideal_norm_count: D must be squarefree");
  if (m < 1) throw std::invalid_argument("ideal_norm_count: m must be positive");
  u64 count = 1;
  for (const auto& [p, alpha] : factorize(m).factors) {
    int kind;  // +1 split, -1 inert, 0 ramified
    if (p == 2) {
      const i64 r = mod(D, 8);
      kind = (r == 1) ? 1 : (r == 5 ? -1 : 0);
    } else {
      kind = quad_char(D, p);
    }
    if (kind == 1)
      count *= static_cast<u64>(alpha + 1);
    else if (kind == -1 && alpha % 2)
      return 0;
  }
  return count;
}

ArithFunctions arith_functions(i64 n) {
  if (n < 1) throw std::invalid_argument("arith_functions: n must be positive");
  ArithFunctions r{0, 1, 1, 1};
  for (const auto& [p, e] : factorize(n).factors) {
    ++r.omega;
    r.mu = (e > 1) ? 0 : -r.mu;
    r.tau *= static_cast<u64>(e + 1);
    r.phi *= static_cast<u64>(ipow(p, e - 1)) * static_cast<u64>(p - 1);
  }
  return r;
}

std::vector<i64> divisors(i64 n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be positive");
  std::vector<i64> ds{1};
  for (const auto& [p, e] : factorize(n).factors) {
    const std::size_t base = ds.size();
    i64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(BigInt(text));
  return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

}  // namespace ecconst
