#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecconst/cache.hpp"
#include "ecconst/constants.hpp"
#include "ecconst/curves.hpp"
#include "ecconst/galois.hpp"

namespace ecconst {

// Counts over good primes p <= x.
i64 pi_trace(const Curve& c, i64 x, i64 r);
i64 pi_prime(const Curve& c, i64 x);
i64 pi_cyclic(const Curve& c, i64 x);

i64 pi_trace(const std::vector<FrobeniusRecord>& records, i64 x, i64 r);
i64 pi_prime(const std::vector<FrobeniusRecord>& records, i64 x);
i64 pi_cyclic(const std::vector<FrobeniusRecord>& records, i64 x);

struct ScanOptions {
  i64 r = 0;              // trace value for C_{E,r} and pi_{E,r}
  int k = 1;              // moments are reported for 1..k
  i64 cutoff = 100000;    // Euler product cutoff
  i64 galois_L = 7;
  i64 galois_P = 10000;
  u64 seed = 1;
  int jobs = 1;
  std::string cache_path;  // empty: no cache
  bool resume = false;     // reuse an existing cache at cache_path
  int max_chunks = -1;     // stop after this many computed chunks (testing)
};

struct ScanRow {
  i64 a = 0, b = 0;
  i64 delta_sf = 0;
  i64 M = 0;  // M_E
  SerreVerdict verdict;
  ConstantValue c_trace, c_prime, c_cyclic;
  i64 pi_trace = 0, pi_prime = 0, pi_cyclic = 0;
};

struct MomentValue {
  long double lo = 0, hi = 0;
  std::size_t count = 0;  // LikelySerre rows averaged over
  bool empty = true;      // no LikelySerre rows; lo = hi = 0
  friend bool operator==(const MomentValue&, const MomentValue&) = default;
};

struct ScanAggregates {
  std::size_t curves = 0;
  std::size_t likely_serre = 0;
  std::size_t not_serre = 0;
  std::size_t inconclusive = 0;
  // moments[k-1][family] for trace, prime, cyclic
  std::vector<std::array<MomentValue, 3>> moments;
  // mean of pi_cyclic(x) log x / x over LikelySerre rows
  long double cyclic_density = 0;
  friend bool operator==(const ScanAggregates&, const ScanAggregates&) = default;
};

struct BoxScanResult {
  i64 A = 0, B = 0, x = 0;
  ScanOptions options;
  ConstantValue universal_trace, universal_prime, universal_cyclic;
  std::vector<ScanRow> rows;  // ordered by (a, b)
  ScanAggregates aggregates;
};

// Thrown when ScanOptions::max_chunks stops a scan early; the cache holds
// every finished chunk.
class ScanInterrupted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Identifies the cache contents a scan of this box may reuse.
u64 scan_config_hash(i64 A, i64 B, i64 x, const ScanOptions& opt);

BoxScanResult box_scan(i64 A, i64 B, i64 x, const ScanOptions& opt = {});

MomentValue moment_statistic(const BoxScanResult& result, int k, ConstantFamily family);
ScanAggregates compute_aggregates(const BoxScanResult& result);

i64 squarefree_census(i64 A, i64 B, i64 Z);
Rational serre_fraction(const BoxScanResult& result);

}  // namespace ecconst
