#include "ecconst/cache.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

constexpr const char* kMagic = "# ecconst-trace-cache";

std::string header(u64 config) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s v%d config=%016llx", kMagic, kCacheVersion, static_cast<unsigned long long>(config));
  return buf;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw CacheError("cache line " + std::to_string(line) + ": " + what);
}

}  // namespace

u64 config_hash(const std::string& text) {
  u64 h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

TraceCache::TraceCache(const TraceCache& other) : config_(other.config_) {
  std::lock_guard lock(other.mu_);
  data_ = other.data_;
}

TraceCache& TraceCache::operator=(const TraceCache& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  config_ = other.config_;
  data_ = other.data_;
  return *this;
}

TraceCache TraceCache::parse(const std::string& text, std::optional<u64> expected_config) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");
  std::istringstream hs(line);
  std::string magic1, magic2, version, cfg;
  hs >> magic1 >> magic2 >> version >> cfg;
  if (magic1 + " " + magic2 != kMagic) fail(1, "not a trace cache header");
  if (version != "v" + std::to_string(kCacheVersion)) fail(1, "unsupported version " + version);
  if (cfg.rfind("config=", 0) != 0 || cfg.size() != 7 + 16) fail(1, "malformed config hash");
  u64 config = 0;
  try {
    config = std::stoull(cfg.substr(7), nullptr, 16);
  } catch (const std::exception&) {
    fail(1, "malformed config hash");
  }
  if (expected_config && *expected_config != config)
    throw CacheMismatchError("cache was written for a different configuration (config hash " + cfg.substr(7) + ")");

  TraceCache cache(config);
  std::size_t lineno = 1;
  std::optional<std::tuple<i64, i64, i64>> prev;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    i64 a, b, p, ap;
    std::string rest;
    if (!(ls >> a >> b >> p >> ap) || (ls >> rest)) fail(lineno, "expected four integers 'a b p a_p'");
    if (p < 3 || !is_prime(static_cast<u64>(p))) fail(lineno, "p = " + std::to_string(p) + " is not an odd prime");
    if (static_cast<double>(ap) * ap > 4.0 * static_cast<double>(p)) fail(lineno, "trace violates the Hasse bound");
    const auto key = std::make_tuple(a, b, p);
    if (prev && !(*prev < key)) fail(lineno, "records out of order or duplicated");
    prev = key;
    cache.data_[{a, b}][p] = ap;
  }
  return cache;
}

TraceCache TraceCache::load(const std::string& path, std::optional<u64> expected_config) {
  std::ifstream in(path);
  if (!in) throw CacheError("cannot read cache file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), expected_config);
}

std::string TraceCache::serialize() const {
  std::lock_guard lock(mu_);
  std::string out = header(config_) + "\n";
  for (const auto& [curve, traces] : data_)
    for (const auto& [p, ap] : traces)
      out += std::to_string(curve.first) + " " + std::to_string(curve.second) + " " + std::to_string(p) + " " +
             std::to_string(ap) + "\n";
  return out;
}

void TraceCache::save(const std::string& path) const {
  const std::string text = serialize();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file " + tmp);
    out << text;
    if (!out.flush()) throw CacheError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::optional<i64> TraceCache::get(i64 a, i64 b, i64 p) const {
  std::lock_guard lock(mu_);
  auto it = data_.find({a, b});
  if (it == data_.end()) return std::nullopt;
  auto jt = it->second.find(p);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

void TraceCache::put(i64 a, i64 b, i64 p, i64 a_p) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = data_[{a, b}].emplace(p, a_p);
  if (!inserted && it->second != a_p)
    throw CacheError("conflicting traces for (" + std::to_string(a) + ", " + std::to_string(b) + ") at p = " +
                     std::to_string(p));
}

std::size_t TraceCache::count(i64 a, i64 b) const {
  std::lock_guard lock(mu_);
  auto it = data_.find({a, b});
  return it == data_.end() ? 0 : it->second.size();
}

std::map<i64, i64> TraceCache::traces(i64 a, i64 b) const {
  std::lock_guard lock(mu_);
  auto it = data_.find({a, b});
  return it == data_.end() ? std::map<i64, i64>{} : it->second;
}

std::size_t TraceCache::size() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, traces] : data_) n += traces.size();
  return n;
}

std::vector<CacheRecord> TraceCache::records() const {
  std::lock_guard lock(mu_);
  std::vector<CacheRecord> out;
  for (const auto& [curve, traces] : data_)
    for (const auto& [p, ap] : traces) out.push_back({curve.first, curve.second, p, ap});
  return out;
}

}  // namespace ecconst
