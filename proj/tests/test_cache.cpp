#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ecconst/cache.hpp"

using namespace ecconst;

namespace {

std::string error_of(const std::string& text) {
  try {
    TraceCache::parse(text);
  } catch (const CacheError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("cache round trip through a file") {
  TraceCache c(config_hash("A=1 B=1 x=10"));
  c.put(1, 1, 7, 3);
  c.put(-1, 0, 5, 2);
  c.put(1, 1, 5, -3);
  c.put(1, 1, 5, -3);
  CHECK_THROWS_AS(c.put(1, 1, 5, 1), CacheError);
  const auto path = (std::filesystem::temp_directory_path() / "ecconst_cache_roundtrip.txt").string();
  c.save(path);
  const TraceCache d = TraceCache::load(path, c.config());
  CHECK(d.records() == c.records());
  CHECK(d.records().front() == CacheRecord{-1, 0, 5, 2});
  CHECK(d.get(1, 1, 7) == 3);
  CHECK_FALSE(d.get(1, 1, 11).has_value());
  CHECK(d.serialize() == c.serialize());
  CHECK_THROWS_AS(TraceCache::load(path, c.config() + 1), CacheMismatchError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(TraceCache::load(path), CacheError);
}

TEST_CASE("corrupted cache lines are reported with line numbers") {
  const std::string head = "# ecconst-trace-cache v1 config=0000000000000001\n";
  CHECK(error_of(head + "1 1 5 2\n1 1 7 x\n").find("line 3") != std::string::npos);
  CHECK(error_of(head + "1 1 5 2\n1 1 5 2\n").find("line 3") != std::string::npos);
  CHECK(error_of(head + "1 1 7 2\n1 1 5 2\n").find("out of order") != std::string::npos);
  CHECK(error_of(head + "1 1 9 2\n").find("line 2") != std::string::npos);
  CHECK(error_of(head + "1 1 5 9\n").find("Hasse") != std::string::npos);
  CHECK(error_of(head + "1 1 5 2 7\n").find("line 2") != std::string::npos);
  CHECK(error_of("garbage\n").find("line 1") != std::string::npos);
  CHECK(error_of("# ecconst-trace-cache v9 config=0000000000000001\n").find("version") != std::string::npos);
  CHECK(error_of(head + "\n1 1 5 2\n").empty());
}

TEST_CASE("config hash") {
  CHECK(config_hash("") == 14695981039346656037ULL);
  CHECK(config_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(config_hash("x") != config_hash("y"));
}
