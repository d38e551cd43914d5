#include "ecconst/galois.hpp"

#include <cmath>
#include <set>

#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

std::vector<FrobeniusRecord> records_up_to(const Curve& c, i64 P, const std::vector<FrobeniusRecord>* given) {
  std::vector<FrobeniusRecord> out;
  if (given) {
    for (const auto& r : *given)
      if (r.p <= P) out.push_back(r);
    return out;
  }
  for (i64 p : primes_up_to(P))
    if (c.good_prime(p)) out.push_back({p, frobenius_trace(c, p), 0, false, false});
  return out;
}

// Size of the subgroup of (Z/ell)^* generated by gens.
std::size_t generated_size(const std::set<i64>& gens, i64 ell) {
  std::set<i64> sub{1};
  bool grew = true;
  while (grew) {
    grew = false;
    for (i64 x : std::set<i64>(sub))
      for (i64 g : gens)
        if (sub.insert(x * g % ell).second) grew = true;
  }
  return sub.size();
}

std::string signed_term(i64 coef, const std::string& var) {
  if (coef == 0) return "";
  std::string mag = (coef == 1 || coef == -1) && !var.empty() ? "" : std::to_string(coef < 0 ? -coef : coef);
  return (coef < 0 ? "-" : "+") + mag + var;
}

// x^3 + ax + b = (x - r)(x^2 + rx + a + r^2)
std::string factored_cubic(i64 a, i64 r) {
  const std::string lin = r == 0 ? "x" : "(x" + signed_term(-r, "") + ")";
  return lin + "(x^2" + signed_term(r, "x") + signed_term(a + r * r, "") + ")";
}

bool within_3_sigma(std::size_t hits, std::size_t n, double p0) {
  if (n == 0) return false;
  const double mean = n * p0;
  const double sigma = std::sqrt(n * p0 * (1 - p0));
  return std::fabs(static_cast<double>(hits) - mean) <= 3 * sigma;
}

}  // namespace

std::string to_string(SerreStatus s) {
  switch (s) {
    case SerreStatus::LikelySerre: return "LikelySerre";
    case SerreStatus::NotSerre: return "NotSerre";
    case SerreStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const std::vector<i64>& cm_j_invariants() {
  static const std::vector<i64> js{0,           1728,         -3375,         8000,          -32768,
                                   54000,       287496,       -884736,       -12288000,     16581375,
                                   -884736000,  -147197952000, -262537412640768000};
  return js;
}

std::optional<std::string> negative_certificates(const Curve& c) {
  std::vector<std::string> reasons;
  const i64 a = c.a(), b = c.b();
  // Integer roots of a monic integer cubic divide the constant term.
  std::optional<i64> root;
  if (b == 0) {
    root = 0;
  } else {
    for (i64 d : divisors(b < 0 ? -b : b)) {
      for (i64 x : {d, -d}) {
        const i128 v = static_cast<i128>(x) * x * x + static_cast<i128>(a) * x + b;
        if (v == 0) root = x;
      }
      if (root) break;
    }
  }
  if (root) reasons.push_back("reducible cubic: " + factored_cubic(a, *root));
  // j = 1728 * 4a^3 / (4a^3 + 27b^2)
  const i128 num = 6912 * static_cast<i128>(a) * a * a;
  for (i64 j : cm_j_invariants())
    if (num == static_cast<i128>(j) * c.disc_core()) reasons.push_back("CM j = " + std::to_string(j));
  if (reasons.empty()) return std::nullopt;
  std::string out = reasons[0];
  for (std::size_t i = 1; i < reasons.size(); ++i) out += "; also " + reasons[i];
  return out;
}

ModEllResult mod_ell_statistics_test(const Curve& c, i64 ell, i64 P, const std::vector<FrobeniusRecord>* records) {
  if (ell < 2 || !is_prime(static_cast<u64>(ell))) throw std::invalid_argument("ell must be prime");
  if (P < ell * ell) throw std::invalid_argument("sample bound P = " + std::to_string(P) + " is below ell^2");
  std::set<i64> dets;
  bool split = false, nonsplit = false, even = false, odd = false;
  for (const auto& r : records_up_to(c, P, records)) {
    if (r.p == ell) continue;
    dets.insert(r.p % ell);
    if (mod(r.a_p, 2) == 0)
      even = true;
    else
      odd = true;
    if (ell != 2 && mod(r.a_p, ell) != 0) {
      const int q = quad_char(r.a_p * r.a_p - 4 * r.p, ell);
      // A zero discriminant counts as a square: over F_3 no element with
      // nonzero trace has a nonzero square discriminant.
      if (q >= 0) split = true;
      if (q == -1) nonsplit = true;
    }
  }
  ModEllResult res;
  if (ell > 2 && generated_size(dets, ell) != static_cast<std::size_t>(ell - 1))
    res.missing.push_back("det values do not generate (Z/" + std::to_string(ell) + ")^*");
  if (ell > 2 && !split) res.missing.push_back("no square discriminant with nonzero trace");
  if (ell > 2 && !nonsplit) res.missing.push_back("no nonsquare discriminant with nonzero trace");
  if (ell == 2 && !even) res.missing.push_back("a_p never even");
  if (ell == 2 && !odd) res.missing.push_back("a_p never odd");
  res.full_support = res.missing.empty();
  return res;
}

SerreVerdict serre_heuristic(const Curve& c, i64 L, i64 P, const std::vector<FrobeniusRecord>* records) {
  SerreVerdict v;
  v.L = L;
  v.P = P;
  if (auto w = negative_certificates(c)) {
    v.status = SerreStatus::NotSerre;
    v.witness = *w;
    return v;
  }
  const auto recs = records_up_to(c, P, records);
  for (i64 ell : primes_up_to(L)) {
    if (P < ell * ell) continue;
    const auto res = mod_ell_statistics_test(c, ell, P, &recs);
    if (!res.full_support) {
      v.status = SerreStatus::Inconclusive;
      v.witness = "mod-l statistics incomplete at l=" + std::to_string(ell) + ": " + res.missing.front();
      return v;
    }
  }
  // Quadratic obstruction: on a Serre curve eps(Frob_p) = (delta_sf / p) is
  // +1 for half the primes, and for delta_sf = 1 the image mod 2 is A_3, so
  // a_p is odd for two thirds of them.
  const i64 dsf = serre_invariants(c.a(), c.b()).delta_sf;
  std::size_t n = 0, hits = 0;
  for (const auto& r : recs) {
    if (dsf == 1) {
      ++n;
      if (mod(r.a_p, 2) == 1) ++hits;
    } else if (dsf % r.p != 0) {
      ++n;
      if (quad_char(dsf, r.p) == 1) ++hits;
    }
  }
  const double p0 = dsf == 1 ? 2.0 / 3 : 0.5;
  if (!within_3_sigma(hits, n, p0)) {
    v.status = SerreStatus::Inconclusive;
    v.witness = "sign frequency " + std::to_string(hits) + "/" + std::to_string(n) + " outside 3 sigma";
    return v;
  }
  v.status = SerreStatus::LikelySerre;
  return v;
}

}  // namespace ecconst
