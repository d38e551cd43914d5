#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecconst/cli.hpp"

using namespace ecconst;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ecconst");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, sep)) out.push_back(f);
  return out;
}

std::vector<std::string> lines(const std::string& text) { return split(text, '\n'); }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("constants commands") {
  auto r = run({"constants", "universal", "--kind", "trace", "--r", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ratio     1") != std::string::npos);

  r = run({"constants", "universal", "--kind", "trace", "--r", "0", "--format", "csv"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  auto f = split(rows[1], ',');
  REQUIRE(f.size() == 11);
  const long double pi3 = std::acos(-1.0L) / 3;
  CHECK(std::stold(f[8]) <= pi3);
  CHECK(std::stold(f[9]) >= pi3);
  CHECK(f[10] == "100000");

  r = run({"constants", "serre", "--a", "0", "--b", "1", "--kind", "prime", "--format", "csv"});
  REQUIRE(r.code == 0);
  f = split(lines(r.out)[1], ',');
  CHECK(f[5] == "10/9");
  // machine output parses back to the in-memory values
  const ConstantValue v = serre_prime_constant(0, 1, 100000);
  CHECK(parse_rational(f[5]) == v.ratio);
  CHECK(std::stold(f[8]) == doctest::Approx(static_cast<double>(v.value_lo())).epsilon(1e-18));
  CHECK(std::stold(f[6]) == v.product_lo);
  CHECK(std::stold(f[7]) == v.product_hi);

  CHECK(run({"constants", "serre", "--a", "0", "--b", "0", "--kind", "cyclic"}).code == 3);
  CHECK(run({"constants", "universal", "--kind", "bogus"}).code == 2);
  CHECK(run({"constants", "universal", "--kind", "prime", "--r", "2"}).code == 2);
  CHECK(run({"constants", "universal"}).code == 2);
  CHECK(run({"constants", "universal", "--kind", "cyclic", "--cutoff", "1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify commands") {
  auto r = run({"verify", "lemmas", "--p", "3", "--n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 failures") != std::string::npos);
  r = run({"verify", "lemmas", "--level", "24"});
  CHECK(r.code == 0);
  r = run({"verify", "lemmas"});
  CHECK(r.code == 0);
  CHECK(r.out.find("deviation  exact-formula  (3,1,0,2) delta<n even square  closed=16  counted=12") !=
        std::string::npos);
  CHECK(run({"verify", "lemmas", "--p", "2"}).code == 2);
  CHECK(run({"verify", "lemmas", "--level", "16"}).code == 2);
  CHECK(run({"verify", "lemmas", "--n", "2"}).code == 2);
}

TEST_CASE("scan command output") {
  auto r = run({"scan", "box", "--A", "1", "--B", "1", "--x", "10", "--P", "300"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] == "a,b,delta_sf,M_E,verdict,C_trace_r,C_prime,C_cyclic,pi_trace_r,pi_prime,pi_cyclic");
  int data = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].rfind("#", 0) == 0) continue;
    CHECK(split(rows[i], ',').size() == 11);
    ++data;
  }
  CHECK(data == 8);
  CHECK(r.out.find("# aggregates recomputed from rows: match") != std::string::npos);
  CHECK(run({"scan", "box", "--A", "0", "--B", "0", "--x", "10"}).code == 2);
  CHECK(run({"scan", "box", "--A", "1", "--B", "1"}).code == 2);
  CHECK(run({"scan", "box", "--A", "1", "--B", "1", "--x", "10", "--resume"}).code == 2);
  CHECK(run({"scan", "box", "--A", "1", "--B", "1", "--x", "10", "--jobs", "0"}).code == 2);
}

TEST_CASE("scan files, resume and config mismatch") {
  const std::string out1 = temp_path("ecconst_cli_scan1.csv"), out2 = temp_path("ecconst_cli_scan2.csv");
  const std::string cache = temp_path("ecconst_cli_cache.txt");
  std::filesystem::remove(cache);
  const std::vector<std::string> base{"scan", "box", "--A", "2", "--B", "2", "--x", "200", "--P", "300", "--seed", "1"};
  auto args = base;
  args.insert(args.end(), {"--out", out1, "--cache", cache});
  REQUIRE(run(args).code == 0);
  // Drop the second half of the cache, as if the run had stopped early.
  auto text = lines(slurp(cache));
  {
    std::ofstream f(cache, std::ios::binary | std::ios::trunc);
    for (std::size_t i = 0; i < text.size() / 2; ++i) f << text[i] << '\n';
  }
  args = base;
  args.insert(args.end(), {"--out", out2, "--cache", cache, "--resume", "--jobs", "3"});
  REQUIRE(run(args).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  args = {"scan", "box", "--A", "3", "--B", "2", "--x", "200", "--P", "300", "--cache", cache, "--resume"};
  CHECK(run(args).code == 5);
  // a corrupted cache is a cache error as well
  {
    std::ofstream f(cache, std::ios::app);
    f << "not a record\n";
  }
  args = base;
  args.insert(args.end(), {"--cache", cache, "--resume"});
  const auto r = run(args);
  CHECK(r.code == 5);
  CHECK(r.err.find("line") != std::string::npos);
  for (const auto& p : {out1, out2, cache}) std::filesystem::remove(p);
}
