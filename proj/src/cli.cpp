#include "ecconst/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ecconst/gl2.hpp"
#include "ecconst/verify.hpp"

namespace ecconst {

namespace {

std::string fmt(long double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

std::string interval(long double lo, long double hi, int digits = 17) {
  return "[" + fmt(lo, digits) + "," + fmt(hi, digits) + "]";
}

std::string interval(const ConstantValue& v, int digits = 17) { return interval(v.value_lo(), v.value_hi(), digits); }

std::string family_name(ConstantFamily f) {
  switch (f) {
    case ConstantFamily::Trace: return "trace";
    case ConstantFamily::Prime: return "prime";
    default: return "cyclic";
  }
}

ConstantKind parse_kind(const std::string& kind, i64 r, bool r_given) {
  if (kind == "trace") return ConstantKind::trace(r);
  if (r_given) throw CLI::ValidationError("--r", "applies to --kind trace only");
  if (kind == "prime") return ConstantKind::prime();
  return ConstantKind::cyclic();
}

void print_constant(std::ostream& out, const std::string& format, const std::string& what, ConstantKind kind,
                    const ConstantValue& v, const std::string& a, const std::string& b) {
  if (format == "csv") {
    out << "constant,kind,r,a,b,ratio,product_lo,product_hi,value_lo,value_hi,cutoff\n";
    out << what << ',' << family_name(kind.family) << ',' << kind.r << ',' << a << ',' << b << ','
        << to_string(v.ratio) << ',' << fmt(v.product_lo, 21) << ',' << fmt(v.product_hi, 21) << ','
        << fmt(v.value_lo(), 21) << ',' << fmt(v.value_hi(), 21) << ',' << v.cutoff << '\n';
    return;
  }
  out << "constant  " << what << " " << kind.name();
  if (!a.empty()) out << " for (a, b) = (" << a << ", " << b << ")";
  out << "\nratio     " << to_string(v.ratio) << "\nproduct   " << interval(v.product_lo, v.product_hi)
      << "\nvalue     " << interval(v) << "\nwidth     " << fmt(v.width(), 3) << "\ncutoff    " << v.cutoff
      << "\n";
}

int run_verify(std::ostream& out, const VerifyOptions& opt) {
  const VerifyReport rep = verify_lemmas(opt);
  for (const auto& c : rep.checks) {
    const char* tag = c.expected_deviation ? "deviation" : c.ok ? "ok" : "FAIL";
    out << tag << "  " << c.suite << "  " << c.label << "  closed=" << c.closed << "  counted=" << c.counted;
    if (c.expected_deviation) out << "  (known error of the secondary closed form; the convolution count is exact)";
    out << '\n';
  }
  out << rep.checks.size() << " checks, " << rep.failures() << " failures, " << rep.deviations()
      << " expected deviations\n";
  return rep.passed() ? kExitOk : kExitMismatch;
}

}  // namespace

std::string scan_csv(const BoxScanResult& res) {
  std::ostringstream out;
  out << "a,b,delta_sf,M_E,verdict,C_trace_r,C_prime,C_cyclic,pi_trace_r,pi_prime,pi_cyclic\n";
  for (const auto& row : res.rows)
    out << row.a << ',' << row.b << ',' << row.delta_sf << ',' << row.M << ',' << to_string(row.verdict.status) << ','
        << fmt(row.c_trace.midpoint(), 15) << ',' << fmt(row.c_prime.midpoint(), 15) << ','
        << fmt(row.c_cyclic.midpoint(), 15) << ',' << row.pi_trace << ',' << row.pi_prime << ',' << row.pi_cyclic
        << '\n';
  const auto& o = res.options;
  const auto& agg = res.aggregates;
  out << "# box A=" << res.A << " B=" << res.B << " x=" << res.x << " r=" << o.r << " k=" << o.k << " seed=" << o.seed
      << " cutoff=" << o.cutoff << " galois L=" << o.galois_L << " P=" << o.galois_P << '\n';
  out << "# curves=" << agg.curves << " likely_serre=" << agg.likely_serre << " not_serre=" << agg.not_serre
      << " inconclusive=" << agg.inconclusive << '\n';
  out << "# serre_fraction=" << to_string(serre_fraction(res)) << '\n';
  out << "# C_trace_r=" << interval(res.universal_trace) << " C_prime=" << interval(res.universal_prime)
      << " C_cyclic=" << interval(res.universal_cyclic) << '\n';
  for (std::size_t k = 0; k < agg.moments.size(); ++k) {
    out << "# moment k=" << k + 1;
    const auto& m = agg.moments[k];
    if (m[0].empty) {
      out << " empty (no LikelySerre rows)\n";
      continue;
    }
    for (int f = 0; f < 3; ++f)
      out << ' ' << family_name(static_cast<ConstantFamily>(f)) << '=' << interval(m[f].lo, m[f].hi, 12);
    out << " rows=" << m[0].count << '\n';
  }
  out << "# mean pi_cyclic*log(x)/x over LikelySerre rows=" << fmt(agg.cyclic_density, 12) << '\n';
  out << "# aggregates recomputed from rows: " << (compute_aggregates(res) == agg ? "match" : "MISMATCH") << '\n';
  return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lang-Trotter, Koblitz and cyclicity constants for elliptic curves", "ecconst"};
  app.require_subcommand(1);

  // constants
  auto* constants = app.add_subcommand("constants", "Universal and Serre-curve constants");
  constants->require_subcommand(1);
  std::string kind = "trace", format = "table";
  i64 r = 0, cutoff = 100000, a = 0, b = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--kind", kind, "trace, prime or cyclic")
        ->required()
        ->check(CLI::IsMember({"trace", "prime", "cyclic"}));
    sub->add_option("--r", r, "trace value for --kind trace");
    sub->add_option("--cutoff", cutoff, "Euler product cutoff")->check(CLI::Range(i64{3}, i64{100000000}));
    sub->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  };
  auto* universal = constants->add_subcommand("universal", "Average constants C_r, C_prime, C_cyclic");
  add_common(universal);
  auto* serre = constants->add_subcommand("serre", "Constants of the curve if it is a Serre curve");
  add_common(serre);
  serre->add_option("--a", a)->required();
  serre->add_option("--b", b)->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Closed forms against enumeration");
  verify->require_subcommand(1);
  auto* lemmas = verify->add_subcommand("lemmas", "Run the lemma checks");
  i64 vp = 0, vlevel = 0;
  int vn = 0;
  auto* opt_p = lemmas->add_option("--p", vp, "odd prime");
  lemmas->add_option("--n", vn, "exponent for matrix counts")->needs(opt_p);
  lemmas->add_option("--level", vlevel, "obstruction level M_E")->excludes(opt_p);

  // scan
  auto* scan = app.add_subcommand("scan", "Counting functions over curve boxes");
  scan->require_subcommand(1);
  auto* box = scan->add_subcommand("box", "Scan |a| <= A, |b| <= B");
  i64 A = 0, B = 0, x = 0;
  ScanOptions so;
  std::string out_path;
  box->add_option("--A", A)->required()->check(CLI::NonNegativeNumber);
  box->add_option("--B", B)->required()->check(CLI::NonNegativeNumber);
  box->add_option("--x", x)->required()->check(CLI::Range(i64{3}, i64{100000000}));
  box->add_option("--k", so.k, "highest moment order")->check(CLI::Range(1, 16));
  box->add_option("--r", so.r, "trace value for C_{E,r} and pi_{E,r}");
  box->add_option("--cutoff", so.cutoff, "Euler product cutoff")->check(CLI::Range(i64{3}, i64{100000000}));
  box->add_option("--L", so.galois_L, "largest ell in the Serre-curve test")->check(CLI::Range(i64{2}, i64{100}));
  box->add_option("--P", so.galois_P, "Frobenius sample bound of the Serre-curve test")
      ->check(CLI::Range(i64{3}, i64{10000000}));
  box->add_option("--out", out_path, "CSV output file (default stdout)");
  auto* cache_opt = box->add_option("--cache", so.cache_path, "trace cache file");
  box->add_flag("--resume", so.resume, "continue from the cache file")->needs(cache_opt);
  box->add_option("--seed", so.seed, "seed recorded with the run");
  box->add_option("--jobs", so.jobs, "worker threads")->check(CLI::Range(1, 1024));

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*universal || *serre) {
      const bool r_given = (*universal ? universal : serre)->count("--r") > 0;
      const ConstantKind ck = parse_kind(kind, r, r_given);
      if (*universal) {
        print_constant(out, format, "C", ck, universal_constant(ck, cutoff), "", "");
      } else {
        print_constant(out, format, "C_E", ck, serre_constant(a, b, ck, cutoff), std::to_string(a), std::to_string(b));
      }
      return kExitOk;
    }
    if (*lemmas) {
      VerifyOptions vo;
      if (lemmas->count("--p")) vo.p = vp;
      if (lemmas->count("--n")) vo.n = vn;
      if (lemmas->count("--level")) vo.level = vlevel;
      return run_verify(out, vo);
    }
    if (*box) {
      if (A == 0 && B == 0) throw std::invalid_argument("the box |a| <= 0, |b| <= 0 holds no nonsingular curve");
      const BoxScanResult res = box_scan(A, B, x, so);
      const std::string csv = scan_csv(res);
      if (out_path.empty()) {
        out << csv;
      } else {
        const std::string tmp = out_path + ".tmp";
        {
          std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
          f << csv;
          if (!f) throw std::runtime_error("cannot write " + tmp);
        }
        if (std::rename(tmp.c_str(), out_path.c_str()) != 0) throw std::runtime_error("cannot write " + out_path);
      }
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularCurveError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSingular;
  } catch (const LevelBoundError& e) {
    err << "error: " << e.what() << '\n';
    return kExitLevelBound;
  } catch (const CacheError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCache;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitUsage;
}

}  // namespace ecconst
