#pragma once

// Explicit enumeration of GL_2(Z/nZ) and the subsets the counting formulas
// are about: trace fibers, Phi_n, and kernels of the obstruction character
// eps * (delta_sf / det).

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecconst/numeric.hpp"

namespace ecconst {

// Entries are residues modulo the level they are used at.
struct Mat2 {
  u32 a = 1, b = 0, c = 0, d = 1;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct MatrixClass {
  u32 level;
  Mat2 m;
};

// Validates that det is a unit modulo level.
MatrixClass make_matrix(u32 level, i64 a, i64 b, i64 c, i64 d);

u32 det_mod(const Mat2& g, u32 n);
u32 trace_mod(const Mat2& g, u32 n);
Mat2 multiply(const Mat2& x, const Mat2& y, u32 n);
Mat2 reduce(const Mat2& g, u32 n);

class LevelBoundError : public std::runtime_error {
 public:
  LevelBoundError(i64 level, const BigInt& estimate, u64 bound);
  i64 level() const { return level_; }

 private:
  i64 level_;
};

struct EnumerationLimit {
  u64 max_elements = 100'000'000;
};

enum class SliceKind { Full, TraceFiber, Phi, Kernel, PsiPreimage, Image };

struct SliceDescriptor {
  SliceKind kind = SliceKind::Full;
  i64 trace = 0;     // TraceFiber
  i64 delta_sf = 0;  // Kernel, PsiPreimage
  int sign = 1;      // PsiPreimage

  std::string describe() const;
};

// An enumerated subset of GL_2(Z/nZ). Members are kept sorted so that two
// slices with the same members compare equal and membership is a lookup.
class GroupSlice {
 public:
  GroupSlice(u32 level, std::vector<Mat2> members, SliceDescriptor descriptor);

  u32 level() const { return level_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Mat2>& members() const { return members_; }
  const SliceDescriptor& descriptor() const { return descriptor_; }
  bool contains(const Mat2& g) const;

  GroupSlice filter(const std::function<bool(const Mat2&)>& keep, SliceDescriptor descriptor) const;

 private:
  u32 level_;
  std::vector<Mat2> members_;
  SliceDescriptor descriptor_;
};

// Calls visit(g) once for every g in GL_2(Z/nZ), assembled from prime-power
// factors through the CRT.
void for_each_gl2(u32 n, const std::function<void(const Mat2&)>& visit, EnumerationLimit limit = {});

GroupSlice enumerate_group(u32 n, EnumerationLimit limit = {});
GroupSlice trace_fiber(u32 n, i64 r, EnumerationLimit limit = {});
GroupSlice phi_subset(u32 n, EnumerationLimit limit = {});

// det(1 - g) is a unit mod n.
bool in_phi(const Mat2& g, u32 n);

// Signature of the mod-2 reduction acting on the three nonzero vectors of F_2^2.
int epsilon_sign(const Mat2& g, u32 level);

// M_E for a squarefree delta_sf: 2|D| if D = 1 mod 4, else 4|D|.
i64 obstruction_level(i64 delta_sf);

// psi_{p^k}(g) for the prime-power factor p^k of M_E; g is read modulo p^k.
int psi_pk(const Mat2& g, i64 p, int k, i64 delta_sf);

// eps(g) * (delta_sf / det g) as the product of psi_{p^k} over p^k || M_E.
// The level must be a multiple of M_E.
int obstruction_character(const Mat2& g, u32 level, i64 delta_sf);

GroupSlice kernel_subset(i64 delta_sf, EnumerationLimit limit = {});

// psi_{M_E}^{-1}(sign) cap X, for X at level M_E.
GroupSlice psi_preimage(const GroupSlice& x, i64 delta_sf, int sign);

// Distinct reductions of the members to level k (k | level).
GroupSlice project(const GroupSlice& slice, u32 k);

// Factor slices X_{p^k} for a slice that is the CRT product of its
// projections. Throws std::invalid_argument for anything else.
std::vector<GroupSlice> crt_split(const GroupSlice& slice);

// Identity membership plus closure on a deterministic sample of pairs.
bool subgroup_spot_check(const GroupSlice& slice, std::size_t sample = 64);

}  // namespace ecconst
