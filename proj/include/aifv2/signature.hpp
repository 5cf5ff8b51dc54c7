#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aifv2/distribution.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"

namespace aifv2 {

// Which of the two code trees a quantity refers to.
enum class Side { t0 = 0, t1 = 1 };

inline int side_index(Side s) { return s == Side::t0 ? 0 : 1; }
inline Side side_from_index(int s) {
  if (s == 0) return Side::t0;
  if (s == 1) return Side::t1;
  throw InputError("side must be 0 or 1");
}

// Level signature of a partially built code tree: m symbols placed on or
// above the current level, p open (non-slave) slots on the next level, z
// master nodes on the current level.
struct Signature {
  int m = 0;
  int p = 0;
  int z = 0;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.m == b.m && a.p == b.p && a.z == b.z;
  }
  friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }
  friend bool operator<(const Signature& a, const Signature& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.p != b.p) return a.p < b.p;
    return a.z < b.z;
  }
  std::string to_string() const {
    return "(" + std::to_string(m) + ";" + std::to_string(p) + ";" +
           std::to_string(z) + ")";
  }
};

// Membership in the signature universe for an n-symbol source:
// 0 <= z <= m <= n and 0 <= p <= n.
inline bool in_signature_set(const Signature& s, int n) {
  return 0 <= s.z && s.z <= s.m && s.m <= n && 0 <= s.p && s.p <= n;
}

// Every expansion step grows 2m + p; signatures are processed in this order.
inline int layer(const Signature& s) { return 2 * s.m + s.p; }

// All members of the signature universe on a given layer, m ascending then z
// ascending (p is determined by m and the layer).
inline std::vector<Signature> layer_members(int d, int n) {
  std::vector<Signature> out;
  for (int m = 0; m <= n && 2 * m <= d; ++m) {
    int p = d - 2 * m;
    if (p > n) continue;
    for (int z = 0; z <= m; ++z) out.push_back(Signature{m, p, z});
  }
  return out;
}

// True iff src can be expanded (by one level of construction) into dst, i.e.
// there exist e0, e1 >= 0 with e0 + e1 <= src.p and
//   dst.m = src.m + e0 + e1,  dst.z = e1,  dst.p = src.z + 2*(src.p - e0 - e1).
// Equivalently:
//   2*src.m + 2*src.p + src.z == 2*dst.m + dst.p
//   src.m + src.p >= dst.m
//   src.m <= dst.m - dst.z
//   (src.p, src.z) != (0, 0)
inline bool can_expand(const Signature& src, const Signature& dst) {
  return 2 * src.m + 2 * src.p + src.z == 2 * dst.m + dst.p &&
         src.m + src.p >= dst.m && src.m <= dst.m - dst.z &&
         !(src.p == 0 && src.z == 0);
}

// The unique (e0, e1) witnessing can_expand(src, dst): e0 new leaves and e1
// new masters on the next level.
inline std::pair<int, int> expansion_params(const Signature& src,
                                            const Signature& dst) {
  if (!can_expand(src, dst))
    throw InputError("expansion_params: " + src.to_string() + " cannot expand to " +
                     dst.to_string());
  return {dst.m - src.m - dst.z, dst.z};
}

// Cost parameter C in [0, 1] trading the two trees' weighted lengths.
template <class V>
class CostParam {
 public:
  explicit CostParam(V value) : value_(std::move(value)) {
    const V zero = num_traits<V>::from_int(0);
    const V one = num_traits<V>::from_int(1);
    if (num_traits<V>::is_infinite(value_) || value_ < zero || one < value_)
      throw InputError("cost parameter must lie in [0, 1]");
  }
  const V& value() const { return value_; }

 private:
  V value_;
};

// Per-step cost of expanding src into dst, on the side-0 tree:
//   c0 = Wp(src.m) + C * range(src.m - src.z, src.m).
// Every still-open subtree deepens by one level (tail weight), and slack
// nodes under the masters created one level earlier contribute the C term.
template <class V>
V cost_c0(const Signature& src, const Signature& dst, const PrefixSums<V>& W,
          const CostParam<V>& C) {
  if (!can_expand(src, dst))
    throw InputError("cost_c0: " + src.to_string() + " cannot expand to " +
                     dst.to_string());
  return W.Wp(src.m) + C.value() * W.range(src.m - src.z, src.m);
}

// Side-1 flavor: symbols placed on new leaf nodes (as opposed to masters)
// earn a -C credit:
//   c1 = Wp(src.m) - C * range(src.m, dst.m - dst.z),
// where symbols src.m+1 .. dst.m - dst.z are exactly the new leaves.
// Nonnegative for C <= 1 because range(src.m, dst.m - dst.z) <= Wp(src.m).
template <class V>
V cost_c1(const Signature& src, const Signature& dst, const PrefixSums<V>& W,
          const CostParam<V>& C) {
  if (!can_expand(src, dst))
    throw InputError("cost_c1: " + src.to_string() + " cannot expand to " +
                     dst.to_string());
  return W.Wp(src.m) - C.value() * W.range(src.m, dst.m - dst.z);
}

}  // namespace aifv2
