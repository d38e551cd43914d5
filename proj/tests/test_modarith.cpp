#include <doctest.h>

#include "ecconst/modarith.hpp"
#include "oracles.hpp"

using namespace ecconst;

TEST_CASE("factorize small and signed integers") {
  auto f = factorize(12);
  CHECK(f.sign == 1);
  CHECK(f.factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  f = factorize(-432);
  CHECK(f.sign == -1);
  CHECK(f.factors == std::vector<PrimePower>{{2, 4}, {3, 3}});
  CHECK(factorize(1).factors.empty());
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize reconstructs its input, including large semiprimes") {
  for (i64 n : {i64{2}, i64{97}, i64{-1024}, i64{999983} * 1000003, i64{4294967291} * 2147483647, i64{600851475143}}) {
    const auto f = factorize(n);
    CHECK(f.value() == n);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      CHECK(is_prime(f.factors[i].prime));
      if (i) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
    }
  }
}

TEST_CASE("squarefree part") {
  CHECK(squarefree_part(-432) == -3);
  CHECK(squarefree_part(64) == 1);
  CHECK(squarefree_part(12) == 3);
  CHECK_THROWS(squarefree_part(0));
  for (i64 n = -2000; n <= 2000; ++n) {
    if (n == 0) continue;
    const i64 s = squarefree_part(n);
    CHECK(s == oracle::squarefree(n));
    const i64 q = n / s;
    const i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(q))));
    CHECK(r * r == q);
  }
}

TEST_CASE("quadratic character matches Euler's criterion and square testing") {
  CHECK(quad_char(2, 5) == -1);
  CHECK(quad_char(4, 5) == 1);
  CHECK(quad_char(0, 5) == 0);
  CHECK_THROWS(quad_char(1, 4));
  CHECK_THROWS(quad_char(1, 2));
  for (i64 p : {3, 5, 7, 11, 13, 101}) {
    std::vector<bool> square(p, false);
    for (i64 x = 1; x < p; ++x) square[x * x % p] = true;
    for (i64 d = -p; d < 2 * p; ++d) {
      const i64 r = oracle::md(d, p);
      const int expect = r == 0 ? 0 : (square[r] ? 1 : -1);
      CHECK(quad_char(d, p) == expect);
      CHECK(quad_char(d, p) == oracle::jacobi(d, p));
    }
  }
}

TEST_CASE("chi4 and chi8") {
  CHECK(chi4(5) == 1);
  CHECK(chi4(3) == -1);
  CHECK(chi4(-1) == -1);
  CHECK(chi4(6) == 0);
  CHECK(chi8(7) == 1);
  CHECK(chi8(-1) == 1);
  CHECK(chi8(3) == -1);
  CHECK(chi8(5) == -1);
  CHECK(chi8(2) == 0);
}

TEST_CASE("sqrt_count and bc_pair_count agree with enumeration") {
  CHECK(sqrt_count(3, 2, 0) == 3);
  CHECK(sqrt_count(5, 1, 4) == 2);
  CHECK(sqrt_count(3, 3, 9) == 6);
  CHECK(bc_pair_count(3, 1, 0) == 5);
  CHECK(bc_pair_count(3, 1, 1) == 2);
  CHECK(bc_pair_count(5, 2, 5) == 40);
  for (i64 p : {3, 5, 7}) {
    for (int n = 1; n <= 3; ++n) {
      const i64 q = ipow(p, n);
      std::vector<u64> roots(q, 0), pairs(q, 0);
      for (i64 x = 0; x < q; ++x) ++roots[x * x % q];
      for (i64 b = 0; b < q; ++b)
        for (i64 c = 0; c < q; ++c) ++pairs[4 * b * c % q];
      u64 sum_roots = 0, sum_pairs = 0;
      for (i64 y = 0; y < q; ++y) {
        CHECK(sqrt_count(p, n, y) == roots[y]);
        CHECK(bc_pair_count(p, n, y) == pairs[y]);
        sum_roots += sqrt_count(p, n, y);
        sum_pairs += bc_pair_count(p, n, y);
      }
      CHECK(sum_roots == static_cast<u64>(q));
      CHECK(sum_pairs == static_cast<u64>(q * q));
    }
  }
}

TEST_CASE("ideal counts in quadratic fields") {
  CHECK(ideal_norm_count(-1, 5) == 2);
  CHECK(ideal_norm_count(-1, 3) == 0);
  CHECK(ideal_norm_count(-1, 2) == 1);
  CHECK(ideal_norm_count(-1, 9) == 1);
  CHECK(ideal_norm_count(-1, 25) == 3);
  CHECK_THROWS(ideal_norm_count(1, 5));
  CHECK_THROWS(ideal_norm_count(0, 5));
  CHECK_THROWS(ideal_norm_count(12, 5));
}

TEST_CASE("Gaussian ideal counts match lattice point counts") {
  // Ideals of Z[i] of norm m correspond to nonzero x + yi of norm m up to the 4 units.
  for (i64 m = 1; m <= 200; ++m) {
    i64 reps = 0;
    for (i64 x = -15; x <= 15; ++x)
      for (i64 y = -15; y <= 15; ++y)
        if (x * x + y * y == m) ++reps;
    CHECK(ideal_norm_count(-1, m) == static_cast<u64>(reps / 4));
  }
}

TEST_CASE("Eisenstein ideal counts match lattice point counts") {
  // Z[(1 + sqrt -3)/2] has 6 units; norm of x + y w is x^2 + xy + y^2.
  for (i64 m = 1; m <= 200; ++m) {
    i64 reps = 0;
    for (i64 x = -20; x <= 20; ++x)
      for (i64 y = -20; y <= 20; ++y)
        if (x * x + x * y + y * y == m) ++reps;
    CHECK(ideal_norm_count(-3, m) == static_cast<u64>(reps / 6));
  }
}

TEST_CASE("ideal counts are bounded by the divisor function") {
  for (i64 D : {-1, -2, -3, -5, -7, 2, 3, 5, 6, 13, -15, 21}) {
    for (i64 m = 1; m <= 500; ++m) CHECK(ideal_norm_count(D, m) <= arith_functions(m).tau);
  }
}

TEST_CASE("arithmetic functions") {
  auto f = arith_functions(12);
  CHECK(f.omega == 2);
  CHECK(f.mu == 0);
  CHECK(f.tau == 6);
  CHECK(f.phi == 4);
  f = arith_functions(6);
  CHECK((f.omega == 2 && f.mu == 1 && f.tau == 4 && f.phi == 2));
  f = arith_functions(1);
  CHECK((f.omega == 0 && f.mu == 1 && f.tau == 1 && f.phi == 1));
  for (i64 n = 1; n <= 300; ++n) {
    u64 phi = 0, tau = 0;
    for (i64 k = 1; k <= n; ++k) {
      if (std::gcd(k, n) == 1) ++phi;
      if (n % k == 0) ++tau;
    }
    CHECK(arith_functions(n).phi == phi);
    CHECK(arith_functions(n).tau == tau);
    CHECK(divisors(n).size() == tau);
  }
  CHECK(omega(-15) == 2);
}

TEST_CASE("primality and sieve agree") {
  const auto ps = primes_up_to(5000);
  std::size_t j = 0;
  for (i64 n = 0; n <= 5000; ++n) {
    const bool in_sieve = j < ps.size() && ps[j] == n;
    if (in_sieve) ++j;
    CHECK(is_prime(n) == oracle::prime(n));
    CHECK(in_sieve == oracle::prime(n));
  }
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));
}
