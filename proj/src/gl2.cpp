#include "ecconst/gl2.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "ecconst/counts.hpp"
#include "ecconst/modarith.hpp"

namespace ecconst {

namespace {

u64 key(const Mat2& g, u32 n) {
  const u64 nn = n;
  return ((static_cast<u64>(g.a) * nn + g.b) * nn + g.c) * nn + g.d;
}

void sort_members(std::vector<Mat2>& ms, u32 n) {
  std::sort(ms.begin(), ms.end(), [n](const Mat2& x, const Mat2& y) { return key(x, n) < key(y, n); });
}

std::vector<Mat2> prime_power_group(u32 q, u32 p) {
  std::vector<Mat2> out;
  for (u32 a = 0; a < q; ++a)
    for (u32 b = 0; b < q; ++b)
      for (u32 c = 0; c < q; ++c)
        for (u32 d = 0; d < q; ++d) {
          const u64 det = (static_cast<u64>(a) * d + static_cast<u64>(q - b) * c) % p;
          if (det != 0) out.push_back({a, b, c, d});
        }
  return out;
}

void check_bound(u32 n, EnumerationLimit limit) {
  if (n < 1) throw std::invalid_argument("level must be positive");
  const BigInt order = gl2_order(n);
  if (order > limit.max_elements) throw LevelBoundError(n, order, limit.max_elements);
}

}  // namespace

LevelBoundError::LevelBoundError(i64 level, const BigInt& estimate, u64 bound)
    : std::runtime_error("level " + std::to_string(level) + " needs " + estimate.str() +
                         " group elements, above the enumeration bound " + std::to_string(bound)),
      level_(level) {}

MatrixClass make_matrix(u32 level, i64 a, i64 b, i64 c, i64 d) {
  if (level < 1) throw std::invalid_argument("make_matrix: level must be positive");
  const i64 n = level;
  Mat2 m{static_cast<u32>(mod(a, n)), static_cast<u32>(mod(b, n)), static_cast<u32>(mod(c, n)),
         static_cast<u32>(mod(d, n))};
  if (gcd_abs(det_mod(m, level), n) != 1 && n > 1)
    throw std::invalid_argument("make_matrix: determinant is not a unit mod " + std::to_string(n));
  return {level, m};
}

u32 det_mod(const Mat2& g, u32 n) {
  const u64 ad = static_cast<u64>(g.a % n) * (g.d % n) % n;
  const u64 bc = static_cast<u64>(g.b % n) * (g.c % n) % n;
  return static_cast<u32>((ad + n - bc) % n);
}

u32 trace_mod(const Mat2& g, u32 n) { return static_cast<u32>((static_cast<u64>(g.a) + g.d) % n); }

Mat2 multiply(const Mat2& x, const Mat2& y, u32 n) {
  auto dot = [n](u32 p, u32 q, u32 r, u32 s) {
    return static_cast<u32>((static_cast<u64>(p) * q + static_cast<u64>(r) * s) % n);
  };
  return {dot(x.a, y.a, x.b, y.c), dot(x.a, y.b, x.b, y.d), dot(x.c, y.a, x.d, y.c), dot(x.c, y.b, x.d, y.d)};
}

Mat2 reduce(const Mat2& g, u32 n) { return {g.a % n, g.b % n, g.c % n, g.d % n}; }

std::string SliceDescriptor::describe() const {
  switch (kind) {
    case SliceKind::Full: return "full group";
    case SliceKind::TraceFiber: return "trace fiber r=" + std::to_string(trace);
    case SliceKind::Phi: return "Phi";
    case SliceKind::Kernel: return "kernel for delta_sf=" + std::to_string(delta_sf);
    case SliceKind::PsiPreimage:
      return "psi preimage of " + std::to_string(sign) + " for delta_sf=" + std::to_string(delta_sf);
    case SliceKind::Image: return "image";
  }
  return "?";
}

GroupSlice::GroupSlice(u32 level, std::vector<Mat2> members, SliceDescriptor descriptor)
    : level_(level), members_(std::move(members)), descriptor_(descriptor) {
  sort_members(members_, level_);
}

bool GroupSlice::contains(const Mat2& g) const {
  const Mat2 r = reduce(g, level_);
  const u64 k = key(r, level_);
  auto it = std::lower_bound(members_.begin(), members_.end(), k,
                             [this](const Mat2& m, u64 v) { return key(m, level_) < v; });
  return it != members_.end() && *it == r;
}

GroupSlice GroupSlice::filter(const std::function<bool(const Mat2&)>& keep, SliceDescriptor descriptor) const {
  std::vector<Mat2> out;
  std::copy_if(members_.begin(), members_.end(), std::back_inserter(out), keep);
  return GroupSlice(level_, std::move(out), descriptor);
}

void for_each_gl2(u32 n, const std::function<void(const Mat2&)>& visit, EnumerationLimit limit) {
  check_bound(n, limit);
  if (n == 1) {
    visit(Mat2{0, 0, 0, 0});
    return;
  }
  struct Factor {
    std::vector<Mat2> elements;
    u64 coeff;  // = 1 mod q, = 0 mod n/q
  };
  std::vector<Factor> factors;
  for (const auto& [p, k] : factorize(n).factors) {
    const i64 q = ipow(p, k);
    const i64 cofactor = n / q;
    const u64 coeff = static_cast<u64>(cofactor) * static_cast<u64>(inverse_mod(cofactor % q, q)) % n;
    factors.push_back({prime_power_group(static_cast<u32>(q), static_cast<u32>(p)), coeff});
  }
  // Depth-first over the factor lists, accumulating CRT lifts entrywise.
  const std::size_t depth = factors.size();
  std::vector<std::array<u64, 4>> acc(depth + 1, {0, 0, 0, 0});
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == depth) {
      const auto& s = acc[depth];
      visit(Mat2{static_cast<u32>(s[0]), static_cast<u32>(s[1]), static_cast<u32>(s[2]), static_cast<u32>(s[3])});
      return;
    }
    const u64 e = factors[i].coeff;
    for (const Mat2& g : factors[i].elements) {
      acc[i + 1] = {(acc[i][0] + g.a * e) % n, (acc[i][1] + g.b * e) % n, (acc[i][2] + g.c * e) % n,
                    (acc[i][3] + g.d * e) % n};
      walk(i + 1);
    }
  };
  walk(0);
}

namespace {

GroupSlice collect(u32 n, EnumerationLimit limit, SliceDescriptor desc, const std::function<bool(const Mat2&)>& keep) {
  std::vector<Mat2> out;
  for_each_gl2(
      n, [&](const Mat2& g) {
        if (keep(g)) out.push_back(g);
      },
      limit);
  return GroupSlice(n, std::move(out), desc);
}

}  // namespace

GroupSlice enumerate_group(u32 n, EnumerationLimit limit) {
  return collect(n, limit, {SliceKind::Full}, [](const Mat2&) { return true; });
}

GroupSlice trace_fiber(u32 n, i64 r, EnumerationLimit limit) {
  const u32 rr = static_cast<u32>(mod(r, n));
  return collect(n, limit, {SliceKind::TraceFiber, rr}, [&](const Mat2& g) { return trace_mod(g, n) == rr; });
}

bool in_phi(const Mat2& g, u32 n) {
  // det(1 - g) = (1 - a)(1 - d) - bc
  const Mat2 one_minus{(1 + n - g.a) % n, (n - g.b) % n, (n - g.c) % n, (1 + n - g.d) % n};
  return std::gcd(det_mod(one_minus, n), n) == 1;
}

GroupSlice phi_subset(u32 n, EnumerationLimit limit) {
  return collect(n, limit, {SliceKind::Phi}, [n](const Mat2& g) { return in_phi(g, n); });
}

int epsilon_sign(const Mat2& g, u32 level) {
  if (level % 2) throw std::invalid_argument("epsilon_sign: level must be even");
  const Mat2 m = reduce(g, 2);
  static constexpr std::array<std::array<u32, 2>, 3> vs{{{1, 0}, {0, 1}, {1, 1}}};
  std::array<int, 3> perm{};
  for (int i = 0; i < 3; ++i) {
    const u32 x = (m.a * vs[i][0] + m.b * vs[i][1]) % 2;
    const u32 y = (m.c * vs[i][0] + m.d * vs[i][1]) % 2;
    for (int j = 0; j < 3; ++j)
      if (vs[j][0] == x && vs[j][1] == y) perm[i] = j;
  }
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

i64 obstruction_level(i64 delta_sf) {
  if (!is_squarefree(delta_sf)) throw std::invalid_argument("delta_sf " + std::to_string(delta_sf) + " is not squarefree");
  const i64 a = delta_sf < 0 ? -delta_sf : delta_sf;
  return mod(delta_sf, 4) == 1 ? 2 * a : 4 * a;
}

int psi_pk(const Mat2& g, i64 p, int k, i64 delta_sf) {
  const i64 q = ipow(p, k);
  const i64 det = det_mod(reduce(g, static_cast<u32>(q)), static_cast<u32>(q));
  if (p != 2) return quad_char(det, p);
  const i64 d8 = mod(delta_sf, 8);
  if (k == 1 && mod(delta_sf, 4) == 1) return epsilon_sign(g, 2);
  if (k == 2 && mod(delta_sf, 4) == 3) return chi4(det) * epsilon_sign(g, 4);
  if (k == 3 && d8 == 2) return chi8(det) * epsilon_sign(g, 8);
  if (k == 3 && d8 == 6) return chi4(det) * chi8(det) * epsilon_sign(g, 8);
  throw std::invalid_argument("psi_pk: no psi for 2^" + std::to_string(k) + " with delta_sf " +
                              std::to_string(delta_sf));
}

int obstruction_character(const Mat2& g, u32 level, i64 delta_sf) {
  const i64 m = obstruction_level(delta_sf);
  if (level % m) throw std::invalid_argument("obstruction_character: level is not a multiple of M_E");
  int value = 1;
  for (const auto& [p, k] : factorize(m).factors) value *= psi_pk(g, p, k, delta_sf);
  return value;
}

GroupSlice kernel_subset(i64 delta_sf, EnumerationLimit limit) {
  const u32 m = static_cast<u32>(obstruction_level(delta_sf));
  return collect(m, limit, {SliceKind::Kernel, 0, delta_sf},
                 [&](const Mat2& g) { return obstruction_character(g, m, delta_sf) == 1; });
}

GroupSlice psi_preimage(const GroupSlice& x, i64 delta_sf, int sign) {
  const u32 n = x.level();
  if (static_cast<i64>(n) != obstruction_level(delta_sf))
    throw std::invalid_argument("psi_preimage: slice level must equal M_E");
  return x.filter([&](const Mat2& g) { return obstruction_character(g, n, delta_sf) == sign; },
                  {SliceKind::PsiPreimage, x.descriptor().trace, delta_sf, sign});
}

GroupSlice project(const GroupSlice& slice, u32 k) {
  if (k < 1 || slice.level() % k) throw std::invalid_argument("project: level must divide the slice level");
  std::vector<Mat2> out;
  out.reserve(slice.size());
  for (const Mat2& g : slice.members()) out.push_back(reduce(g, k));
  sort_members(out, k);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  SliceDescriptor d = slice.descriptor();
  if (d.kind == SliceKind::TraceFiber) d.trace = mod(d.trace, k);
  if (d.kind != SliceKind::Full && d.kind != SliceKind::Phi && d.kind != SliceKind::TraceFiber) d.kind = SliceKind::Image;
  return GroupSlice(k, std::move(out), d);
}

std::vector<GroupSlice> crt_split(const GroupSlice& slice) {
  const auto fac = factorize(slice.level()).factors;
  std::vector<GroupSlice> parts;
  BigInt product = 1;
  for (const auto& [p, k] : fac) {
    parts.push_back(project(slice, static_cast<u32>(ipow(p, k))));
    product *= parts.back().size();
  }
  // The slice sits inside the product of its projections, so equal sizes
  // mean equality.
  if (product != slice.size())
    throw std::invalid_argument("crt_split: " + slice.descriptor().describe() + " at level " +
                                std::to_string(slice.level()) + " is not a product over prime-power factors");
  return parts;
}

bool subgroup_spot_check(const GroupSlice& slice, std::size_t sample) {
  const u32 n = slice.level();
  if (!slice.contains(reduce(Mat2{}, n))) return false;
  const auto& ms = slice.members();
  if (ms.empty()) return false;
  const std::size_t stride = std::max<std::size_t>(1, ms.size() / sample);
  for (std::size_t i = 0; i < ms.size(); i += stride)
    for (std::size_t j = ms.size() / 3 % stride; j < ms.size(); j += stride)
      if (!slice.contains(multiply(ms[i], ms[j], n))) return false;
  return true;
}

}  // namespace ecconst
