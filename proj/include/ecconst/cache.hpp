#pragma once

// Persistent Frobenius-trace cache.
//
// Text format, one record per line after a header:
//
//   # ecconst-trace-cache v1 config=<16 hex digits>
//   a b p a_p
//
// Records are sorted by (a, b, p) with no duplicates. The config hash ties a
// file to the scan parameters that produced it.

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecconst/numeric.hpp"

namespace ecconst {

inline constexpr int kCacheVersion = 1;

struct CacheRecord {
  i64 a, b, p, a_p;
  friend bool operator==(const CacheRecord&, const CacheRecord&) = default;
};

// Unreadable files, malformed lines and inconsistent records.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed cache written under a different configuration.
class CacheMismatchError : public CacheError {
 public:
  using CacheError::CacheError;
};

// FNV-1a, 64 bit.
u64 config_hash(const std::string& text);

class TraceCache {
 public:
  explicit TraceCache(u64 config = 0) : config_(config) {}
  TraceCache(const TraceCache& other);
  TraceCache& operator=(const TraceCache& other);

  // Throws CacheMismatchError if expected_config is given and differs.
  static TraceCache load(const std::string& path, std::optional<u64> expected_config = std::nullopt);
  // Writes to a temporary file next to path and renames it into place.
  void save(const std::string& path) const;

  static TraceCache parse(const std::string& text, std::optional<u64> expected_config = std::nullopt);
  std::string serialize() const;

  std::optional<i64> get(i64 a, i64 b, i64 p) const;
  // Throws CacheError when a different trace is already stored.
  void put(i64 a, i64 b, i64 p, i64 a_p);
  std::size_t count(i64 a, i64 b) const;
  // All stored traces of (a, b), keyed by p.
  std::map<i64, i64> traces(i64 a, i64 b) const;
  std::size_t size() const;
  std::vector<CacheRecord> records() const;
  u64 config() const { return config_; }

 private:
  u64 config_;
  mutable std::mutex mu_;
  std::map<std::pair<i64, i64>, std::map<i64, i64>> data_;
};

}  // namespace ecconst
