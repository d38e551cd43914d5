#include <doctest.h>

#include <cmath>
#include <random>

#include "ecconst/cache.hpp"
#include "ecconst/curves.hpp"
#include "ecconst/modarith.hpp"
#include "oracles.hpp"

using namespace ecconst;

namespace {

std::vector<Curve> random_curves(unsigned seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> dist(-50, 50);
  std::vector<Curve> out;
  while (static_cast<int>(out.size()) < n) {
    const i64 a = dist(rng), b = dist(rng);
    if (4 * a * a * a + 27 * b * b != 0) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

TEST_CASE("curve construction") {
  CHECK_THROWS_AS(Curve(0, 0), SingularCurveError);
  CHECK_THROWS_AS(Curve(-3, 2), SingularCurveError);
  const Curve c(0, 1);
  CHECK(c.disc_core() == 27);
  CHECK_FALSE(c.good_prime(2));
  CHECK_FALSE(c.good_prime(3));
  CHECK(c.good_prime(5));
}

TEST_CASE("Frobenius trace fixtures") {
  CHECK(frobenius_trace(Curve(1, 0), 5) == 2);
  CHECK(frobenius_trace(Curve(0, 1), 7) == -4);
  CHECK_THROWS_AS(frobenius_trace(Curve(0, 1), 3), BadReductionError);
  CHECK_THROWS_AS(frobenius_trace(Curve(0, 1), 9), BadReductionError);
}

TEST_CASE("character sums agree with point enumeration") {
  for (const Curve& c : random_curves(20240611, 20)) {
    for (i64 p : primes_up_to(200)) {
      if (!c.good_prime(p)) continue;
      const i64 ap = frobenius_trace(c, p);
      CHECK(ap == p + 1 - oracle::point_count(c.a(), c.b(), p));
      CHECK(static_cast<double>(ap * ap) <= 4.0 * p);
    }
  }
}

TEST_CASE("batch traces equal single traces") {
  const auto primes = primes_up_to(400);
  std::vector<i64> bs;
  for (i64 b = -7; b <= 7; ++b) bs.push_back(b);
  for (i64 a : {-5, 0, 3}) {
    const auto table = batch_traces(a, bs, primes);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (4 * a * a * a + 27 * bs[i] * bs[i] == 0) continue;
      const Curve c(a, bs[i]);
      for (std::size_t j = 0; j < primes.size(); ++j) {
        if (c.good_prime(primes[j]))
          CHECK(table[i][j] == frobenius_trace(c, primes[j]));
        else
          CHECK(table[i][j] == kBadPrime);
      }
    }
  }
}

TEST_CASE("group structure fixtures") {
  CHECK(group_structure(Curve(0, 1), 7) == std::pair<i64, i64>{2, 6});
  CHECK(group_structure(Curve(1, 0), 5) == std::pair<i64, i64>{2, 2});
  auto pr = predicates(Curve(0, 1), 7);
  CHECK_FALSE(pr.cyclic);
  CHECK_FALSE(pr.prime_order);
  pr = predicates(Curve(1, 0), 5);
  CHECK_FALSE(pr.cyclic);
  CHECK_FALSE(pr.prime_order);
  const Curve c(0, -1);
  const auto s = oracle::group_structure(0, -1, 5);
  pr = predicates(c, 5);
  CHECK(pr.cyclic == (s.first == 1));
  CHECK(pr.prime_order == oracle::prime(s.first * s.second));
}

TEST_CASE("group structure agrees with brute-force element orders") {
  auto curves = random_curves(7, 12);
  curves.emplace_back(0, 1);
  curves.emplace_back(1, 0);
  curves.emplace_back(-1, 0);
  curves.emplace_back(0, -1);
  for (const Curve& c : curves) {
    for (i64 p : primes_up_to(250)) {
      if (!c.good_prime(p)) continue;
      const auto expect = oracle::group_structure(c.a(), c.b(), p);
      for (u64 seed : {0ULL, 17ULL}) {
        const auto got = group_structure(c, p, seed);
        CHECK_MESSAGE(got == expect, "(" << c.a() << "," << c.b() << ") p=" << p);
        CHECK((p - 1) % got.first == 0);
        CHECK(got.second % got.first == 0);
      }
    }
  }
}

TEST_CASE("noncyclic odd Sylow subgroups are detected") {
  // Search for cases where the 3- or 5-part is not cyclic and compare.
  int found = 0;
  for (i64 a = -30; a <= 30 && found < 15; ++a)
    for (i64 b = -30; b <= 30 && found < 15; ++b) {
      if (4 * a * a * a + 27 * b * b == 0) continue;
      const Curve c(a, b);
      for (i64 p : primes_up_to(400)) {
        if (!c.good_prime(p)) continue;
        const auto s = group_structure(c, p);
        if (s.first % 3 == 0 || s.first % 5 == 0) {
          CHECK(s == oracle::group_structure(a, b, p));
          ++found;
        }
      }
    }
  CHECK(found >= 15);
}

TEST_CASE("roots of the cubic match rational 2-torsion") {
  for (const Curve& c : random_curves(99, 10)) {
    for (i64 p : primes_up_to(150)) {
      if (!c.good_prime(p)) continue;
      int roots = 0;
      for (i64 x = 0; x < p; ++x)
        if (oracle::md(x * x % p * x + c.a() * x + c.b(), p) == 0) ++roots;
      CHECK(cubic_root_count(c, p) == roots);
      // points with y = 0 are the nontrivial 2-torsion
      const auto s = oracle::group_structure(c.a(), c.b(), p);
      const i64 two_torsion = (s.first % 2 == 0 ? 2 : 1) * (s.second % 2 == 0 ? 2 : 1);
      CHECK(two_torsion - 1 == roots);
    }
  }
}

TEST_CASE("square roots modulo primes") {
  for (i64 p : {3, 5, 13, 17, 97, 257, 65537, 1000000007}) {
    for (i64 x = 1; x < 60; ++x) {
      const i64 r = sqrt_mod(x * x, p);
      CHECK(static_cast<i64>(mulmod(r, r, p)) == oracle::md(x * x, p));
    }
  }
}

TEST_CASE("Frobenius streams") {
  auto s = frobenius_stream(Curve(0, 1), 10);
  REQUIRE(s.size() == 2);
  CHECK(s[0].p == 5);
  CHECK(s[1].p == 7);
  CHECK(frobenius_stream(Curve(3, 4), 2).empty());
  // 4a^3 + 27b^2 = 4, so 3 is a good prime here as well.
  s = frobenius_stream(Curve(1, 0), 5);
  REQUIRE(s.size() == 2);
  CHECK(s[0].p == 3);
  CHECK(s[0].a_p == 0);
  CHECK(s[1].a_p == 2);
  CHECK(s[1].order == 4);
  for (const auto& r : frobenius_stream(Curve(2, -3), 500)) {
    CHECK(r.order == r.p + 1 - r.a_p);
    CHECK(r.order >= 1);
    if (r.prime_order) CHECK(r.cyclic);
  }
}

TEST_CASE("streams fill and reuse a trace cache") {
  TraceCache cache(42);
  const Curve c(-2, 5);
  const auto first = frobenius_stream(c, 300, &cache);
  CHECK(cache.count(-2, 5) == first.size());
  const auto text = cache.serialize();
  TraceCache again = TraceCache::parse(text, 42);
  CHECK(frobenius_stream(c, 300, &again) == first);
  CHECK(again.serialize() == text);
}
