#include "ecconst/empirics.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "ecconst/modarith.hpp"

namespace ecconst {

i64 pi_trace(const std::vector<FrobeniusRecord>& records, i64 x, i64 r) {
  i64 n = 0;
  for (const auto& rec : records)
    if (rec.p <= x && rec.a_p == r) ++n;
  return n;
}

i64 pi_prime(const std::vector<FrobeniusRecord>& records, i64 x) {
  i64 n = 0;
  for (const auto& rec : records)
    if (rec.p <= x && rec.prime_order) ++n;
  return n;
}

i64 pi_cyclic(const std::vector<FrobeniusRecord>& records, i64 x) {
  i64 n = 0;
  for (const auto& rec : records)
    if (rec.p <= x && rec.cyclic) ++n;
  return n;
}

i64 pi_trace(const Curve& c, i64 x, i64 r) { return pi_trace(frobenius_stream(c, x), x, r); }
i64 pi_prime(const Curve& c, i64 x) { return pi_prime(frobenius_stream(c, x), x); }
i64 pi_cyclic(const Curve& c, i64 x) { return pi_cyclic(frobenius_stream(c, x), x); }

u64 scan_config_hash(i64 A, i64 B, i64 x, const ScanOptions& opt) {
  const i64 bound = std::max(x, opt.galois_P);
  return config_hash("box A=" + std::to_string(A) + " B=" + std::to_string(B) + " primes<=" + std::to_string(bound));
}

namespace {

// Rows of one value of a, plus whether its traces had to be computed.
struct Chunk {
  std::vector<ScanRow> rows;
  bool computed = false;
  bool done = false;
};

Chunk scan_chunk(i64 a, i64 B, i64 x, const ScanOptions& opt, const std::vector<i64>& primes,
                 const BoxScanResult& base, TraceCache* cache) {
  std::vector<i64> bs;
  for (i64 b = -B; b <= B; ++b)
    if (4 * a * a * a + 27 * b * b != 0) bs.push_back(b);

  // traces[i][j] for bs[i], primes[j]
  std::vector<std::vector<i64>> traces;
  Chunk chunk;
  chunk.done = true;
  bool complete = cache != nullptr;
  for (std::size_t i = 0; complete && i < bs.size(); ++i) {
    const Curve c(a, bs[i]);
    const auto stored = cache->traces(a, bs[i]);
    std::vector<i64> row(primes.size(), kBadPrime);
    for (std::size_t j = 0; complete && j < primes.size(); ++j) {
      if (!c.good_prime(primes[j])) continue;
      auto it = stored.find(primes[j]);
      if (it == stored.end())
        complete = false;
      else
        row[j] = it->second;
    }
    traces.push_back(std::move(row));
  }
  if (!complete) {
    traces = batch_traces(a, bs, primes);
    chunk.computed = true;
    if (cache)
      for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = 0; j < primes.size(); ++j)
          if (traces[i][j] != kBadPrime) cache->put(a, bs[i], primes[j], traces[i][j]);
  }

  for (std::size_t i = 0; i < bs.size(); ++i) {
    const Curve c(a, bs[i]);
    std::vector<FrobeniusRecord> light, full;
    for (std::size_t j = 0; j < primes.size(); ++j) {
      if (traces[i][j] == kBadPrime) continue;
      light.push_back({primes[j], traces[i][j], 0, false, false});
      if (primes[j] <= x) full.push_back(make_record(c, primes[j], traces[i][j]));
    }
    ScanRow row;
    row.a = a;
    row.b = bs[i];
    const SerreInvariants inv = serre_invariants(a, bs[i]);
    row.delta_sf = inv.delta_sf;
    row.M = inv.M;
    row.verdict = serre_heuristic(c, opt.galois_L, opt.galois_P, &light);
    auto scaled = [](const ConstantValue& u, Rational ratio) {
      return ConstantValue{ratio * u.ratio, u.product_lo, u.product_hi, u.cutoff};
    };
    row.c_trace = scaled(base.universal_trace, serre_trace_ratio(inv.delta_sf, opt.r));
    row.c_prime = scaled(base.universal_prime, serre_prime_ratio(inv.delta_sf));
    row.c_cyclic = scaled(base.universal_cyclic, serre_cyclic_ratio(inv.delta_sf));
    row.pi_trace = pi_trace(full, x, opt.r);
    row.pi_prime = pi_prime(full, x);
    row.pi_cyclic = pi_cyclic(full, x);
    chunk.rows.push_back(std::move(row));
  }
  return chunk;
}

const ConstantValue& universal_of(const BoxScanResult& res, ConstantFamily f) {
  switch (f) {
    case ConstantFamily::Trace: return res.universal_trace;
    case ConstantFamily::Prime: return res.universal_prime;
    default: return res.universal_cyclic;
  }
}

const ConstantValue& row_constant(const ScanRow& row, ConstantFamily f) {
  switch (f) {
    case ConstantFamily::Trace: return row.c_trace;
    case ConstantFamily::Prime: return row.c_prime;
    default: return row.c_cyclic;
  }
}

}  // namespace

MomentValue moment_statistic(const BoxScanResult& result, int k, ConstantFamily family) {
  if (k < 1) throw std::invalid_argument("moment order must be positive");
  const ConstantValue& u = universal_of(result, family);
  MomentValue m;
  long double lo = 0, hi = 0;
  for (const auto& row : result.rows) {
    if (row.verdict.status != SerreStatus::LikelySerre) continue;
    // C_E - C = (C_E / C - 1) C, and C > 0
    const Rational rel = row_constant(row, family).ratio / u.ratio - 1;
    const long double d = std::fabs(static_cast<long double>(rel));
    lo += std::pow(d * u.value_lo(), static_cast<long double>(k));
    hi += std::pow(d * u.value_hi(), static_cast<long double>(k));
    ++m.count;
  }
  if (m.count == 0) return m;
  m.empty = false;
  m.lo = lo / m.count;
  m.hi = hi / m.count;
  return m;
}

ScanAggregates compute_aggregates(const BoxScanResult& result) {
  ScanAggregates agg;
  agg.curves = result.rows.size();
  long double density = 0;
  const long double logx_over_x = std::log(static_cast<long double>(result.x)) / result.x;
  for (const auto& row : result.rows) {
    switch (row.verdict.status) {
      case SerreStatus::LikelySerre:
        ++agg.likely_serre;
        density += row.pi_cyclic * logx_over_x;
        break;
      case SerreStatus::NotSerre: ++agg.not_serre; break;
      case SerreStatus::Inconclusive: ++agg.inconclusive; break;
    }
  }
  if (agg.likely_serre) agg.cyclic_density = density / agg.likely_serre;
  for (int k = 1; k <= result.options.k; ++k)
    agg.moments.push_back({moment_statistic(result, k, ConstantFamily::Trace),
                           moment_statistic(result, k, ConstantFamily::Prime),
                           moment_statistic(result, k, ConstantFamily::Cyclic)});
  return agg;
}

BoxScanResult box_scan(i64 A, i64 B, i64 x, const ScanOptions& opt) {
  if (A < 0 || B < 0 || (A == 0 && B == 0)) throw std::invalid_argument("box must contain a nonsingular curve");
  if (x < 3) throw std::invalid_argument("x must be at least 3");
  if (opt.k < 1) throw std::invalid_argument("k must be positive");
  if (opt.jobs < 1) throw std::invalid_argument("jobs must be positive");

  BoxScanResult res;
  res.A = A;
  res.B = B;
  res.x = x;
  res.options = opt;
  res.universal_trace = universal_trace_constant(opt.r, opt.cutoff);
  res.universal_prime = universal_prime_constant(opt.cutoff);
  res.universal_cyclic = universal_cyclic_constant(opt.cutoff);

  const u64 config = scan_config_hash(A, B, x, opt);
  std::optional<TraceCache> cache;
  if (!opt.cache_path.empty()) {
    if (opt.resume && std::filesystem::exists(opt.cache_path))
      cache.emplace(TraceCache::load(opt.cache_path, config));
    else
      cache.emplace(config);
  }

  const auto primes = primes_up_to(std::max(x, opt.galois_P));
  const std::size_t n_chunks = static_cast<std::size_t>(2 * A + 1);
  std::vector<Chunk> chunks(n_chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<int> computed{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu, save_mu;
  std::exception_ptr error;

  auto worker = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= n_chunks) return;
      try {
        chunks[i] = scan_chunk(static_cast<i64>(i) - A, B, x, opt, primes, res, cache ? &*cache : nullptr);
        if (chunks[i].computed) {
          if (cache) {
            std::lock_guard lock(save_mu);
            cache->save(opt.cache_path);
          }
          if (opt.max_chunks >= 0 && ++computed >= opt.max_chunks) stop = true;
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  const int n_workers = static_cast<int>(std::min<std::size_t>(opt.jobs, n_chunks));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  for (const auto& ch : chunks)
    if (!ch.done) throw ScanInterrupted("scan stopped after " + std::to_string(computed.load()) + " chunks");
  if (cache) cache->save(opt.cache_path);

  for (auto& ch : chunks)
    for (auto& row : ch.rows) res.rows.push_back(std::move(row));
  res.aggregates = compute_aggregates(res);
  return res;
}

i64 squarefree_census(i64 A, i64 B, i64 Z) {
  i64 n = 0;
  for (i64 a = -A; a <= A; ++a)
    for (i64 b = -B; b <= B; ++b) {
      const i64 d = 4 * a * a * a + 27 * b * b;
      if (d == 0) continue;
      const i64 sf = squarefree_part(d);
      if ((sf < 0 ? -sf : sf) <= Z) ++n;
    }
  return n;
}

Rational serre_fraction(const BoxScanResult& result) {
  if (result.rows.empty()) throw std::invalid_argument("empty scan");
  std::size_t n = 0;
  for (const auto& row : result.rows)
    if (row.verdict.status == SerreStatus::LikelySerre) ++n;
  return Rational(static_cast<i64>(n), static_cast<i64>(result.rows.size()));
}

}  // namespace ecconst
