#pragma once

// Heuristic Serre-curve classification with exact negative certificates.

#include <optional>
#include <string>
#include <vector>

#include "ecconst/curves.hpp"

namespace ecconst {

enum class SerreStatus { LikelySerre, NotSerre, Inconclusive };

std::string to_string(SerreStatus s);

struct SerreVerdict {
  SerreStatus status = SerreStatus::Inconclusive;
  std::string witness;  // always set for NotSerre
  i64 L = 0;            // largest ell tested
  i64 P = 0;            // Frobenius sample bound
};

// The 13 j-invariants of elliptic curves over Q with complex multiplication.
const std::vector<i64>& cm_j_invariants();

// Witness text when x^3 + ax + b has a rational root or j(E) is a CM
// j-invariant; either rules out a Serre curve.
std::optional<std::string> negative_certificates(const Curve& c);

struct ModEllResult {
  bool full_support = false;
  std::vector<std::string> missing;  // one entry per failed condition
};

// Coverage of Frobenius data mod ell over good p <= P, p != ell:
//   (i) the values p mod ell generate (Z/ell)^*,
//   (ii) odd ell: a_p^2 - 4p is a square (zero allowed) and a nonsquare mod ell for
//        some p with a_p != 0 mod ell,
//   (iii) ell = 2: a_p takes both parities.
// records, when given, must cover all good p <= P.
ModEllResult mod_ell_statistics_test(const Curve& c, i64 ell, i64 P,
                                     const std::vector<FrobeniusRecord>* records = nullptr);

// NotSerre on a certificate. LikelySerre when every ell <= L passes and the
// quadratic-obstruction frequencies sit within 3 sigma of their Serre-curve
// values. Inconclusive otherwise.
SerreVerdict serre_heuristic(const Curve& c, i64 L = 7, i64 P = 10000,
                             const std::vector<FrobeniusRecord>* records = nullptr);

}  // namespace ecconst
