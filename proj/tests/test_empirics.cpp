#include <doctest.h>

#include <filesystem>
#include <random>

#include "ecconst/cli.hpp"
#include "ecconst/empirics.hpp"
#include "ecconst/modarith.hpp"
#include "oracles.hpp"

using namespace ecconst;

namespace {

ScanOptions quick() {
  ScanOptions o;
  o.galois_P = 400;
  o.cutoff = 1000;
  return o;
}

struct Brute {
  i64 trace = 0, prime = 0, cyclic = 0;
};

// Counts over good p in (y, x] from exhaustive point enumeration.
Brute brute_counts(i64 a, i64 b, i64 y, i64 x, i64 r) {
  Brute out;
  const i64 core = 4 * a * a * a + 27 * b * b;
  for (i64 p = y + 1; p <= x; ++p) {
    if (p < 3 || !oracle::prime(p) || core % p == 0) continue;
    const i64 n = oracle::point_count(a, b, p);
    if (p + 1 - n == r) ++out.trace;
    if (oracle::prime(n)) ++out.prime;
    if (oracle::group_structure(a, b, p).first == 1) ++out.cyclic;
  }
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("counting function fixtures") {
  CHECK(pi_trace(Curve(1, 0), 5, 2) == 1);
  const bool cyclic5 = oracle::group_structure(0, 1, 5).first == 1;
  CHECK(pi_cyclic(Curve(0, 1), 7) == (cyclic5 ? 1 : 0));
  for (auto [a, b] : std::vector<std::pair<i64, i64>>{{1, 1}, {0, 1}, {-2, 3}}) {
    const Curve c(a, b);
    CHECK(pi_trace(c, 2, 0) == 0);
    CHECK(pi_prime(c, 2) == 0);
    CHECK(pi_cyclic(c, 2) == 0);
  }
}

TEST_CASE("counting functions are additive over split points") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<i64> coef(-12, 12), split(3, 400);
  for (int t = 0; t < 8; ++t) {
    const i64 a = coef(rng), b = coef(rng);
    if (4 * a * a * a + 27 * b * b == 0) continue;
    const Curve c(a, b);
    const i64 x = 400, y = split(rng);
    for (i64 r : {-2, 0, 1}) {
      const Brute tail = brute_counts(a, b, y, x, r);
      CHECK(pi_trace(c, x, r) == pi_trace(c, y, r) + tail.trace);
      if (r == 0) {
        CHECK(pi_prime(c, x) == pi_prime(c, y) + tail.prime);
        CHECK(pi_cyclic(c, x) == pi_cyclic(c, y) + tail.cyclic);
      }
    }
    const Brute all = brute_counts(a, b, 0, x, 1);
    CHECK(pi_trace(c, x, 1) == all.trace);
    CHECK(pi_prime(c, x) == all.prime);
    CHECK(pi_cyclic(c, x) == all.cyclic);
  }
}

TEST_CASE("box scan row counts") {
  CHECK(box_scan(1, 1, 10, quick()).rows.size() == 8);
  // 15 pairs, one of them the singular (0, 0)
  CHECK(box_scan(1, 2, 10, quick()).rows.size() == 14);
  const auto res = box_scan(3, 2, 50, quick());
  std::size_t expect = 0;
  for (i64 a = -3; a <= 3; ++a)
    for (i64 b = -2; b <= 2; ++b)
      if (4 * a * a * a + 27 * b * b != 0) ++expect;
  CHECK(res.rows.size() == expect);
  CHECK(res.aggregates == compute_aggregates(res));
  CHECK(res.aggregates.curves == expect);
  CHECK(res.aggregates.likely_serre + res.aggregates.not_serre + res.aggregates.inconclusive == expect);
  CHECK_THROWS_AS(box_scan(0, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(box_scan(1, 1, 2), std::invalid_argument);
}

TEST_CASE("box scan rows agree with per-curve computation") {
  const auto res = box_scan(2, 2, 200, quick());
  for (const auto& row : res.rows) {
    const Curve c(row.a, row.b);
    CHECK(row.pi_trace == pi_trace(c, 200, 0));
    CHECK(row.pi_prime == pi_prime(c, 200));
    CHECK(row.pi_cyclic == pi_cyclic(c, 200));
    CHECK(row.delta_sf == oracle::squarefree(-16 * (4 * row.a * row.a * row.a + 27 * row.b * row.b)));
    CHECK(row.verdict.status == serre_heuristic(c, 7, 400).status);
    CHECK(row.c_cyclic.ratio == serre_cyclic_ratio(row.delta_sf) * res.universal_cyclic.ratio);
  }
}

TEST_CASE("scans are identical for any worker count") {
  ScanOptions o = quick();
  const std::string one = scan_csv(box_scan(3, 3, 300, o));
  o.jobs = 4;
  CHECK(scan_csv(box_scan(3, 3, 300, o)) == one);
  o.jobs = 16;
  CHECK(scan_csv(box_scan(3, 3, 300, o)) == one);
}

TEST_CASE("interrupted scans resume to the same result") {
  const std::string path = temp_path("ecconst_resume_cache.txt");
  std::filesystem::remove(path);
  ScanOptions o = quick();
  const std::string reference = scan_csv(box_scan(3, 2, 300, o));
  o.cache_path = path;
  o.max_chunks = 2;
  CHECK_THROWS_AS(box_scan(3, 2, 300, o), ScanInterrupted);
  CHECK(std::filesystem::exists(path));
  const TraceCache partial = TraceCache::load(path);
  CHECK(partial.size() > 0);
  o.max_chunks = -1;
  o.resume = true;
  o.jobs = 3;
  CHECK(scan_csv(box_scan(3, 2, 300, o)) == reference);
  // a second resume reads everything from the cache
  CHECK(scan_csv(box_scan(3, 2, 300, o)) == reference);
  CHECK_THROWS_AS(box_scan(4, 2, 300, o), CacheMismatchError);
  std::filesystem::remove(path);
}

TEST_CASE("moment statistic") {
  BoxScanResult res = box_scan(2, 2, 100, quick());
  // keep one LikelySerre row
  BoxScanResult single = res;
  single.rows.clear();
  for (const auto& row : res.rows)
    if (row.verdict.status == SerreStatus::LikelySerre) {
      single.rows.push_back(row);
      break;
    }
  REQUIRE(single.rows.size() == 1);
  const auto& row = single.rows[0];
  for (int k = 1; k <= 3; ++k) {
    const MomentValue m = moment_statistic(single, k, ConstantFamily::Prime);
    CHECK_FALSE(m.empty);
    CHECK(m.count == 1);
    const long double d = static_cast<long double>(serre_prime_ratio(row.delta_sf) - 1);
    const long double lo = std::pow(d * single.universal_prime.value_lo(), (long double)k);
    const long double hi = std::pow(d * single.universal_prime.value_hi(), (long double)k);
    CHECK(m.lo == lo);
    CHECK(m.hi == hi);
    CHECK(m.lo <= m.hi);
  }
  BoxScanResult none = res;
  for (auto& r : none.rows) r.verdict.status = SerreStatus::NotSerre;
  const MomentValue z = moment_statistic(none, 1, ConstantFamily::Cyclic);
  CHECK(z.empty);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);
  CHECK_THROWS(moment_statistic(res, 0, ConstantFamily::Cyclic));
}

TEST_CASE("Serre constants of scanned curves stay close to the averages") {
  const auto res = box_scan(6, 6, 50, quick());
  for (const auto& row : res.rows) {
    if (row.verdict.status != SerreStatus::LikelySerre) continue;
    const Rational bound = Rational(1, row.delta_sf < 0 ? -row.delta_sf : row.delta_sf);
    auto dev = [](const Rational& q) -> Rational { return q < 1 ? Rational(1 - q) : Rational(q - 1); };
    CHECK(dev(row.c_trace.ratio / res.universal_trace.ratio) <= 64 * bound);
    CHECK(dev(row.c_prime.ratio / res.universal_prime.ratio) <= 2 * bound);
    CHECK(dev(row.c_cyclic.ratio / res.universal_cyclic.ratio) <= 2 * bound);
    CHECK(row.c_prime.ratio / res.universal_prime.ratio <= 2);
  }
}

TEST_CASE("squarefree census") {
  CHECK(squarefree_census(1, 1, 3) == 4);
  // (1, +-1) give 4 + 27 = 31 > 23; all 8 pairs qualify from Z = 31 on
  CHECK(squarefree_census(1, 1, 23) == 6);
  CHECK(squarefree_census(1, 1, 31) == 8);
  CHECK(squarefree_census(4, 4, 0) == 0);
  const std::vector<i64> As{1, 3, 6}, Bs{1, 2, 5}, Zs{1, 10, 300};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t l = 0; l < 3; ++l) {
        const i64 v = squarefree_census(As[i], Bs[j], Zs[l]);
        if (i + 1 < 3) CHECK(squarefree_census(As[i + 1], Bs[j], Zs[l]) >= v);
        if (j + 1 < 3) CHECK(squarefree_census(As[i], Bs[j + 1], Zs[l]) >= v);
        if (l + 1 < 3) CHECK(squarefree_census(As[i], Bs[j], Zs[l + 1]) >= v);
        i64 brute = 0;
        for (i64 a = -As[i]; a <= As[i]; ++a)
          for (i64 b = -Bs[j]; b <= Bs[j]; ++b) {
            const i64 d = 4 * a * a * a + 27 * b * b;
            if (d != 0 && std::abs(oracle::squarefree(d)) <= Zs[l]) ++brute;
          }
        CHECK(v == brute);
      }
}

TEST_CASE("Serre fraction of the unit box") {
  const auto res = box_scan(1, 1, 10, quick());
  CHECK(serre_fraction(res) == Rational(1, 2));
  for (const auto& row : res.rows) {
    const bool certified = row.b == 0 || row.a == 0;
    CHECK((row.verdict.status == SerreStatus::NotSerre) == certified);
  }
  BoxScanResult empty = res;
  empty.rows.clear();
  CHECK_THROWS(serre_fraction(empty));
}
