#include "ecconst/curves.hpp"

#include <array>
#include <cmath>
#include <unordered_set>

#include "ecconst/cache.hpp"
#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

u64 fmod_p(i64 v, i64 p) { return static_cast<u64>(mod(v, p)); }

u64 rhs(const Curve& c, u64 x, u64 p) {
  const u64 a = fmod_p(c.a(), p), b = fmod_p(c.b(), p);
  return (x * x % p * x + a * x + b) % p;
}

// Residues mod f = x^3 + ax + b, as c0 + c1 x + c2 x^2.
using Poly3 = std::array<u64, 3>;

Poly3 polymul(const Poly3& u, const Poly3& v, u64 a, u64 b, u64 p) {
  std::array<u64, 5> w{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) w[i + j] = (w[i + j] + mulmod(u[i], v[j], p)) % p;
  // x^4 = -a x^2 - b x, x^3 = -a x - b
  const u64 na = (p - a) % p, nb = (p - b) % p;
  w[2] = (w[2] + mulmod(w[4], na, p)) % p;
  w[1] = (w[1] + mulmod(w[4], nb, p)) % p;
  w[1] = (w[1] + mulmod(w[3], na, p)) % p;
  w[0] = (w[0] + mulmod(w[3], nb, p)) % p;
  return {w[0], w[1], w[2]};
}

using Poly = std::vector<u64>;  // low degree first, no leading zeros

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_rem(Poly f, const Poly& g, u64 p) {
  const u64 inv = static_cast<u64>(inverse_mod(static_cast<i64>(g.back()), static_cast<i64>(p)));
  while (f.size() >= g.size()) {
    const u64 coef = mulmod(f.back(), inv, p);
    const std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = (f[shift + i] + p - mulmod(coef, g[i], p)) % p;
    trim(f);
  }
  return f;
}

struct Point {
  u64 x = 0, y = 0;
  bool inf = true;
  bool operator==(const Point&) const = default;
};

struct Group {
  u64 a, p;

  Point add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    u64 lam;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % p == 0) return {};
      const u64 num = (3 * mulmod(P.x, P.x, p) + a) % p;
      lam = mulmod(num, static_cast<u64>(inverse_mod(static_cast<i64>(2 * P.y % p), static_cast<i64>(p))), p);
    } else {
      const u64 dx = (Q.x + p - P.x) % p;
      lam = mulmod((Q.y + p - P.y) % p, static_cast<u64>(inverse_mod(static_cast<i64>(dx), static_cast<i64>(p))), p);
    }
    const u64 x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p;
    const u64 y3 = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p;
    return {x3, y3, false};
  }

  Point mul(Point P, u64 n) const {
    Point R;
    while (n) {
      if (n & 1) R = add(R, P);
      P = add(P, P);
      n >>= 1;
    }
    return R;
  }

  u64 key(const Point& P) const { return P.inf ? ~u64{0} : P.x * p + P.y; }
};

// Exponent e1 of the smaller cyclic factor of the Sylow l-subgroup of order
// l^v, found by closing up images h P of points taken in x order.
int sylow_small_exponent(const Curve& c, i64 p, i64 N, i64 l, int v, u64 seed) {
  const i64 lv = ipow(l, v);
  const u64 h = static_cast<u64>(N / lv);
  const u64 up = static_cast<u64>(p);
  const Group G{fmod_p(c.a(), p), up};
  std::vector<Point> sub{Point{}};
  std::unordered_set<u64> members{G.key(Point{})};
  int e2 = 0;
  for (u64 i = 0; i < up && static_cast<i64>(sub.size()) < lv; ++i) {
    const u64 x = (seed + i) % up;
    const u64 y2 = rhs(c, x, up);
    if (y2 != 0 && quad_char(static_cast<i64>(y2), p) != 1) continue;
    const u64 y = y2 == 0 ? 0 : static_cast<u64>(sqrt_mod(static_cast<i64>(y2), p));
    const Point Q = G.mul(Point{x, y, false}, h);
    if (members.count(G.key(Q))) continue;
    int e = 0;
    for (Point R = Q; !R.inf; R = G.mul(R, static_cast<u64>(l))) ++e;
    e2 = std::max(e2, e);
    // Adjoin Q: the new subgroup is the union of cosets sub + jQ.
    const std::size_t base = sub.size();
    Point jQ = Q;
    while (!members.count(G.key(jQ))) {
      for (std::size_t t = 0; t < base; ++t) {
        const Point R = G.add(sub[t], jQ);
        sub.push_back(R);
        members.insert(G.key(R));
      }
      jQ = G.add(jQ, Q);
    }
  }
  if (static_cast<i64>(sub.size()) != lv)
    throw std::logic_error("group_structure: Sylow closure did not reach the expected order");
  return v - e2;
}

}  // namespace

Curve::Curve(i64 a, i64 b) : a_(a), b_(b) {
  core_ = 4 * static_cast<i128>(a) * a * a + 27 * static_cast<i128>(b) * b;
  if (core_ == 0) throw SingularCurveError(a, b);
}

bool Curve::good_prime(i64 p) const {
  if (p < 3) return false;
  const i128 r = core_ % p;
  return r != 0;
}

BadReductionError::BadReductionError(const Curve& c, i64 p)
    : std::invalid_argument("prime " + std::to_string(p) + " is not a prime of good reduction for (" +
                            std::to_string(c.a()) + ", " + std::to_string(c.b()) + ")") {}

i64 sqrt_mod(i64 a, i64 p) {
  const u64 up = static_cast<u64>(p);
  const u64 n = static_cast<u64>(mod(a, p));
  if (n == 0) return 0;
  if (p % 4 == 3) return static_cast<i64>(powmod(n, (up + 1) / 4, up));
  u64 q = up - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (up - 1) / 2, up) != up - 1) ++z;
  u64 m = static_cast<u64>(s), cc = powmod(z, q, up), t = powmod(n, q, up), r = powmod(n, (q + 1) / 2, up);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, up);
      ++i;
    }
    u64 bb = cc;
    for (u64 j = 0; j + 1 < m - i; ++j) bb = mulmod(bb, bb, up);
    m = i;
    cc = mulmod(bb, bb, up);
    t = mulmod(t, cc, up);
    r = mulmod(r, bb, up);
  }
  return static_cast<i64>(r);
}

i64 frobenius_trace(const Curve& c, i64 p) {
  if (!is_prime(static_cast<u64>(p)) || !c.good_prime(p)) throw BadReductionError(c, p);
  const u64 up = static_cast<u64>(p);
  std::vector<signed char> chi(up, -1);
  chi[0] = 0;
  for (u64 x = 1; x <= up / 2; ++x) chi[x * x % up] = 1;
  const u64 a = fmod_p(c.a(), p), b = fmod_p(c.b(), p);
  i64 sum = 0;
  for (u64 x = 0; x < up; ++x) sum += chi[(x * x % up * x + a * x + b) % up];
  return -sum;
}

int cubic_root_count(const Curve& c, i64 p) {
  if (!is_prime(static_cast<u64>(p)) || !c.good_prime(p)) throw BadReductionError(c, p);
  const u64 up = static_cast<u64>(p);
  const u64 a = fmod_p(c.a(), p), b = fmod_p(c.b(), p);
  // x^p mod f by square and multiply
  Poly3 result{1, 0, 0}, base{0, 1, 0};
  for (u64 e = up; e; e >>= 1) {
    if (e & 1) result = polymul(result, base, a, b, up);
    base = polymul(base, base, a, b, up);
  }
  Poly h{result[0], (result[1] + up - 1) % up, result[2]};
  trim(h);
  if (h.empty()) return 3;
  Poly f{b, a, 0, 1}, g = h;
  while (!g.empty()) {
    Poly r = poly_rem(f, g, up);
    f = std::move(g);
    g = std::move(r);
  }
  return static_cast<int>(f.size()) - 1;
}

std::pair<i64, i64> group_structure(const Curve& c, i64 p, i64 a_p, u64 seed) {
  const i64 N = p + 1 - a_p;
  i64 n1 = 1;
  for (const auto& [l, _] : factorize(gcd_abs(N, p - 1)).factors) {
    const int v = valuation(N, l);
    if (v < 2) continue;
    // The 2-part is cyclic unless all of E[2] is rational.
    if (l == 2 && cubic_root_count(c, p) < 3) continue;
    n1 *= ipow(l, sylow_small_exponent(c, p, N, l, v, seed));
  }
  return {n1, N / n1};
}

std::pair<i64, i64> group_structure(const Curve& c, i64 p, u64 seed) {
  return group_structure(c, p, frobenius_trace(c, p), seed);
}

Predicates predicates(const Curve& c, i64 p) {
  const auto r = make_record(c, p, frobenius_trace(c, p));
  return {r.cyclic, r.prime_order};
}

FrobeniusRecord make_record(const Curve& c, i64 p, i64 a_p) {
  if (static_cast<double>(a_p) * a_p > 4.0 * static_cast<double>(p))
    throw std::logic_error("Hasse bound violated at p = " + std::to_string(p));
  FrobeniusRecord r;
  r.p = p;
  r.a_p = a_p;
  r.order = p + 1 - a_p;
  r.prime_order = is_prime(static_cast<u64>(r.order));
  r.cyclic = r.prime_order || group_structure(c, p, a_p, 0).first == 1;
  return r;
}

std::vector<FrobeniusRecord> frobenius_stream(const Curve& c, i64 x, TraceCache* cache) {
  std::vector<FrobeniusRecord> out;
  if (x < 3) return out;
  for (i64 p : primes_up_to(x)) {
    if (!c.good_prime(p)) continue;
    std::optional<i64> ap = cache ? cache->get(c.a(), c.b(), p) : std::nullopt;
    if (!ap) {
      ap = frobenius_trace(c, p);
      if (cache) cache->put(c.a(), c.b(), p, *ap);
    }
    out.push_back(make_record(c, p, *ap));
  }
  return out;
}

std::vector<std::vector<i64>> batch_traces(i64 a, const std::vector<i64>& bs, const std::vector<i64>& primes) {
  std::vector<std::vector<i64>> out(bs.size(), std::vector<i64>(primes.size(), kBadPrime));
  std::vector<signed char> chi;
  std::vector<u32> g;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    const i64 p = primes[j];
    if (p < 3) continue;
    const u64 up = static_cast<u64>(p);
    // chi over [0, 2p) so that g(x) + b needs no reduction.
    chi.assign(2 * up, -1);
    chi[0] = chi[up] = 0;
    for (u64 x = 1; x <= up / 2; ++x) chi[x * x % up] = chi[x * x % up + up] = 1;
    const u64 am = fmod_p(a, p);
    g.resize(up);
    for (u64 x = 0; x < up; ++x) g[x] = static_cast<u32>((x * x % up * x + am * x) % up);
    const i128 a3 = 4 * static_cast<i128>(a) * a * a;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const i64 b = bs[i];
      if ((a3 + 27 * static_cast<i128>(b) * b) % p == 0) continue;
      const u32 bm = static_cast<u32>(fmod_p(b, p));
      const signed char* table = chi.data() + bm;
      int sum = 0;
      for (u64 x = 0; x < up; ++x) sum += table[g[x]];
      out[i][j] = -sum;
    }
  }
  return out;
}

}  // namespace ecconst
