#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "aifv2/distribution.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/memory.hpp"
#include "aifv2/numeric.hpp"
#include "aifv2/rmq.hpp"
#include "aifv2/signature.hpp"

namespace aifv2 {

enum class FillStrategy { naive, batched };

// Initial signatures for a side, all living on the side's starting layer
// (2 for side 0, 3 for side 1), with their fixed starting costs.
inline int initial_layer(Side side) { return side == Side::t0 ? 2 : 3; }

inline const std::vector<Signature>& initial_signatures(Side side) {
  static const std::vector<Signature> i0{{0, 2, 0}, {1, 0, 1}};
  static const std::vector<Signature> i1{{0, 3, 0}, {1, 1, 0}, {1, 1, 1}};
  return side == Side::t0 ? i0 : i1;
}

inline bool is_initial(Side side, const Signature& s) {
  for (const Signature& t : initial_signatures(side)) {
    if (t == s) return true;
  }
  return false;
}

template <class V>
std::vector<std::pair<Signature, V>> initial_conditions(
    Side side, const SourceDistribution<V>& dist, const CostParam<V>& C) {
  const V zero = num_traits<V>::from_int(0);
  const V one = num_traits<V>::from_int(1);
  if (side == Side::t0) {
    // Root is complete (two open slots) or a master over symbol 1.
    return {{{0, 2, 0}, zero}, {{1, 0, 1}, zero}};
  }
  // Side 1: the root's left child is the mandatory slave, leaving the level-1
  // layout with three open slots, or symbol 1 on a level-1 leaf (C credit) or
  // on a level-1 master.
  return {{{0, 3, 0}, one},
          {{1, 1, 0}, one - C.value() * dist.prob1(1)},
          {{1, 1, 1}, one}};
}

// Optimal-cost and predecessor tables over the signature universe of one
// side.  Storage is packed over the valid domain z <= m: entries are indexed
// by (m, z, p), using (m(m+1)/2 + z) * (n+1) + p.  Predecessors are stored
// as the matrix coordinates (i = m'+p', j = m') of the winning candidate,
// from which the predecessor signature is reconstructed with the layer
// identity z' = layer - 2i.
template <class V>
class DpTables {
 public:
  static DpTables fill(Side side, const SourceDistribution<V>& dist,
                       const CostParam<V>& C, FillStrategy strategy) {
    DpTables t(side, dist, C, strategy);
    if (strategy == FillStrategy::naive) {
      t.fill_naive_impl();
    } else {
      t.fill_batched_impl();
    }
    return t;
  }

  Side side() const { return side_; }
  int n() const { return n_; }
  FillStrategy strategy() const { return strategy_; }
  const CostParam<V>& cost_param() const { return C_; }
  const PrefixSums<V>& prefix_sums() const { return W_; }

  const V& opt(const Signature& s) const { return opt_[checked_idx(s)]; }
  bool has_finite(const Signature& s) const {
    return !num_traits<V>::is_infinite(opt(s));
  }

  std::optional<Signature> pred_of(const Signature& s) const {
    std::uint32_t p = pred_[checked_pidx(s)];
    if (p == kNoPred) return std::nullopt;
    int i = static_cast<int>(p >> 16);
    int j = static_cast<int>(p & 0xffffu);
    return Signature{j, i - j, layer(s) - 2 * i};
  }

 private:
  static constexpr std::uint32_t kNoPred = 0xffffffffu;
  // Software-prefetch distance (iterations ahead) for the page-sized strides
  // the packed layout produces in per-layer passes.
  static constexpr int kPrefetch = 16;

  DpTables(Side side, const SourceDistribution<V>& dist, const CostParam<V>& C,
           FillStrategy strategy)
      : side_(side),
        n_(dist.n()),
        strategy_(strategy),
        C_(C),
        W_(dist),
        probs_(dist.probs()) {
    if (n_ > 0xffff)
      throw InputError("dp: alphabet too large for packed predecessor storage");
    tri_.resize(n_ + 2);
    for (int m = 0; m <= n_ + 1; ++m) tri_[m] = m * (m + 1) / 2;
    // Predecessors are laid out layer by layer (members in m-then-z order)
    // so the per-layer result writes stream instead of hopping a page per
    // entry the way the (m, z, p) packing makes them.
    const int layers = 3 * n_ + 1;  // 2m+p reaches 3n over the full universe
    layer_off_.resize(layers + 1);
    layer_mlo_.resize(layers);
    layer_off_[0] = 0;
    for (int L = 0; L < layers; ++L) {
      const int mlo = L > n_ ? (L - n_ + 1) / 2 : 0;
      const int mhi = L / 2 < n_ ? L / 2 : n_;
      layer_mlo_[L] = mlo;
      const int count = mhi >= mlo ? tri_[mhi + 1] - tri_[mlo] : 0;
      layer_off_[L + 1] = layer_off_[L] + count;
    }
    const std::size_t total =
        static_cast<std::size_t>(tri_[n_ + 1]) * (n_ + 1);
    opt_.assign(total, num_traits<V>::infinity());
    pred_.assign(total, kNoPred);
    for (const auto& [sig, value] : initial_conditions(side_, dist, C_)) {
      opt_[idx(sig.m, sig.p, sig.z)] = value;
    }
  }

  std::size_t idx(int m, int p, int z) const {
    return (static_cast<std::size_t>(tri_[m]) + z) * (n_ + 1) + p;
  }
  // pred_ index: position of (m; p; z) in the layer-major layout.
  std::size_t pidx(int m, int p, int z) const {
    const int L = 2 * m + p;
    return layer_off_[L] +
           static_cast<std::size_t>(tri_[m] - tri_[layer_mlo_[L]]) + z;
  }
  std::size_t checked_idx(const Signature& s) const {
    if (!in_signature_set(s, n_))
      throw InputError("dp: signature " + s.to_string() +
                       " outside the universe for n=" + std::to_string(n_));
    return idx(s.m, s.p, s.z);
  }
  std::size_t checked_pidx(const Signature& s) const {
    if (!in_signature_set(s, n_))
      throw InputError("dp: signature " + s.to_string() +
                       " outside the universe for n=" + std::to_string(n_));
    return pidx(s.m, s.p, s.z);
  }

  static std::uint32_t pack(int i, int j) {
    return (static_cast<std::uint32_t>(i) << 16) | static_cast<std::uint32_t>(j);
  }

  // Candidate predecessors of dst on layer d are parametrized by matrix
  // coordinates (i, j): src = (j; i-j; d-2i).  Validity requires
  // dst.m <= i <= d/2, d-2i <= j <= min(i, dst.m - dst.z), and not
  // (src.p, src.z) == (0, 0), i.e. not j == i with d == 2i.
  void fill_naive_impl() {
    const V inf = num_traits<V>::infinity();
    const V& Cv = C_.value();
    for (int d = 1; d <= 2 * n_; ++d) {
      const int r = d / 2;
      // Members of layer d, m ascending then z ascending, without the
      // allocation layer_members() would pay on every layer.  Initial
      // signatures live only on their side's seed layer, so only that
      // layer needs the is_initial filter.
      const bool seed_layer = d == initial_layer(side_);
      const int mhi = r < n_ ? r : n_;
      for (int m = d > n_ ? (d - n_ + 1) / 2 : 0; m <= mhi; ++m) {
        const int p = d - 2 * m;
        for (int z = 0; z <= m; ++z) {
          if (seed_layer && is_initial(side_, Signature{m, p, z})) continue;
          V best = inf;
          int bi = -1, bj = -1;
          const int jcap = m - z;
          // The j range [d-2i, min(jcap, i)] is empty until i reaches both
          // ceil(d/3) and ceil((d-jcap)/2); start there instead of paying an
          // empty pass per smaller i.
          int ilo = m;
          const int ia = (d + 2) / 3;
          if (ia > ilo) ilo = ia;
          const int ib = d - jcap > 0 ? (d - jcap + 1) / 2 : 0;
          if (ib > ilo) ilo = ib;
          for (int i = ilo; i <= r; ++i) {
            const int zp = d - 2 * i;
            int jmax = jcap < i ? jcap : i;
            // Sources must keep something to expand: (p', z') == (0, 0)
            // happens only at j == i on the zp == 0 row, so clamp instead of
            // testing every j.
            if (zp == 0 && jmax == i) --jmax;
            for (int j = zp; j <= jmax; ++j) {
              const V& o = opt_[idx(j, i - j, zp)];
              if (num_traits<V>::is_infinite(o)) continue;
              V cand = side_ == Side::t0
                           ? o + W_.Wp(j) + Cv * (W_.W(j) - W_.W(j - zp))
                           : o + W_.Wp(j) - Cv * (W_.W(jcap) - W_.W(j));
              if (cand < best) {
                best = cand;
                bi = i;
                bj = j;
              }
            }
          }
          opt_[idx(m, p, z)] = best;
          pred_[pidx(m, p, z)] = bi < 0 ? kNoPred : pack(bi, bj);
        }
      }
    }
  }

  // One (r+1) x (r+1) matrix per layer d, r = d/2: cell (i, j) carries
  // opt(j; i-j; d-2i) plus the part of the step cost that depends only on
  // the predecessor (tail weight Wp(j), and for side 0 the whole C term).
  // Invalid coordinates are +infinity.  Side 0 then reads one bottom-left
  // region minimum per signature; side 1 reads one column minimum per
  // signature plus a constant-time hand-down along decreasing z.
  void fill_batched_impl() {
    const V inf = num_traits<V>::infinity();
    const V& Cv = C_.value();
    std::vector<V> mat(static_cast<std::size_t>(n_ + 1) * (n_ + 1), inf);
    RestrictedRmqTables<V> rmq;

    for (int d = initial_layer(side_) + 1; d <= 2 * n_; ++d) {
      const int r = d / 2;
      const int stride = r + 1;
      std::fill(mat.begin(),
                mat.begin() + static_cast<std::size_t>(stride) * stride, inf);
      // Column by column: for a fixed source m' = j the packed index of
      // (j; i-j; d-2i) moves by a constant -(2n+1) as i grows, so walking i
      // downward streams the table at a fixed stride instead of gathering
      // at ever-growing offsets, which matters once the table outgrows
      // cache.
      const std::size_t tot = opt_.size();
      const std::size_t colstep = 2 * static_cast<std::size_t>(n_) + 1;
      for (int j = 0; j <= r; ++j) {
        int ilo = j;
        const int ic = (d - j + 1) / 2;
        if (ic > ilo) ilo = ic;
        const V wpj = W_.Wp(j);
        for (int i = r; i >= ilo; --i) {
          const int zp = d - 2 * i;
          if (zp == 0 && i == j) continue;  // nothing to expand
          const std::size_t at = idx(j, i - j, zp);
          // The stride is a few pages, beyond what hardware prefetchers
          // track, so ask for the cache line kPrefetch iterations ahead.
          std::size_t pf = at + kPrefetch * colstep;
          if (pf >= tot) pf = tot - 1;
          __builtin_prefetch(&opt_[pf]);
          const V& o = opt_[at];
          if (num_traits<V>::is_infinite(o)) continue;
          mat[static_cast<std::size_t>(i) * stride + j] =
              side_ == Side::t0
                  ? o + wpj + Cv * (W_.W(j) - W_.W(j - zp))
                  : o + wpj;
        }
      }
      rmq.build(MatrixView<V>{mat.data(), stride, stride},
                side_ == Side::t0 ? WhichTables::rrmq_only
                                  : WhichTables::rcq_only);

      const std::size_t rowstep = static_cast<std::size_t>(n_) + 1;
      if (side_ == Side::t0) {
        const int mhi = r < n_ ? r : n_;
        for (int m = d > n_ ? (d - n_ + 1) / 2 : 0; m <= mhi; ++m) {
          const int p = d - 2 * m;
          for (int z = 0; z <= m; ++z) {
            const MinCell<V>& q = rmq.rrmq(m, m - z);
            const std::size_t at = idx(m, p, z);
            std::size_t pf = at + kPrefetch * rowstep;
            if (pf >= tot) pf = tot - 1;
            __builtin_prefetch(&opt_[pf], 1);
            opt_[at] = q.value;
            pred_[pidx(m, p, z)] = q.absent() ? kNoPred : pack(q.row, q.col);
          }
        }
      } else {
        const int mlo = d > 2 * n_ ? n_ : (d - n_ + 1) / 2;
        for (int m = mlo < 0 ? 0 : mlo; 2 * m <= d && m <= n_; ++m) {
          const int p = d - 2 * m;
          // z = m: only column 0 is admissible.
          {
            const MinCell<V>& q = rmq.rcq(m, 0);
            opt_[idx(m, p, m)] = q.value;
            pred_[pidx(m, p, m)] = q.absent() ? kNoPred : pack(q.row, q.col);
          }
          for (int z = m - 1; z >= 0; --z) {
            const MinCell<V>& a = rmq.rcq(m, m - z);
            const std::size_t prev = idx(m, p, z + 1);
            const std::size_t at = idx(m, p, z);
            const std::size_t pat = pidx(m, p, z);  // pat + 1 holds z + 1
            const std::size_t back = kPrefetch * rowstep;
            const std::size_t pf = at > back ? at - back : 0;
            __builtin_prefetch(&opt_[pf], 1);
            // Hand-down branch: every candidate with column < m-z picks up
            // the extra leaf credit/debit for symbol m-z relative to the
            // z+1 entry, a uniform shift that keeps its argmin.
            V hand = opt_[prev];
            bool hand_ok = !num_traits<V>::is_infinite(hand);
            if (hand_ok) {
              hand = side_ == Side::t0 ? hand : hand - Cv * probs_[m - z - 1];
            }
            if (!hand_ok || (!a.absent() && a.value < hand)) {
              opt_[at] = a.value;
              pred_[pat] = a.absent() ? kNoPred : pack(a.row, a.col);
            } else if (a.absent() || hand < a.value) {
              opt_[at] = hand;
              pred_[pat] = pred_[pat + 1];
            } else {
              // Exact tie: keep the lexicographically smaller (row, col).
              const std::uint32_t hp = pred_[pat + 1];
              const int hrow = static_cast<int>(hp >> 16);
              if (a.row < hrow) {
                opt_[at] = a.value;
                pred_[pat] = pack(a.row, a.col);
              } else {
                opt_[at] = hand;
                pred_[pat] = hp;
              }
            }
          }
        }
      }
    }
  }

  Side side_;
  int n_;
  FillStrategy strategy_;
  CostParam<V> C_;
  PrefixSums<V> W_;
  std::vector<V> probs_;
  std::vector<int> tri_;
  std::vector<std::size_t> layer_off_;
  std::vector<int> layer_mlo_;
  std::vector<V, BigTableAllocator<V>> opt_;
  std::vector<std::uint32_t, BigTableAllocator<std::uint32_t>> pred_;
};

template <class V>
DpTables<V> fill_naive(Side side, const SourceDistribution<V>& dist,
                       const CostParam<V>& C) {
  return DpTables<V>::fill(side, dist, C, FillStrategy::naive);
}

template <class V>
DpTables<V> fill_batched(Side side, const SourceDistribution<V>& dist,
                         const CostParam<V>& C) {
  return DpTables<V>::fill(side, dist, C, FillStrategy::batched);
}

// Cost of the best finished tree: the table value at (n; 0; 0).
template <class V>
V optimal_cost(const DpTables<V>& t) {
  V v = t.opt(Signature{t.n(), 0, 0});
  if (num_traits<V>::is_infinite(v))
    throw InternalError("dp: no code tree exists (target unreachable)");
  return v;
}

// Expansion path from an initial signature to `target` (default (n;0;0)),
// reconstructed through the predecessor table.
template <class V>
std::vector<Signature> trace_path(const DpTables<V>& t,
                                  std::optional<Signature> target = std::nullopt) {
  Signature cur = target.value_or(Signature{t.n(), 0, 0});
  if (num_traits<V>::is_infinite(t.opt(cur)))
    throw InternalError("dp: cannot trace a path to an unreachable signature " +
                        cur.to_string());
  std::vector<Signature> rev{cur};
  int guard = 2 * t.n() + 2;
  while (auto p = t.pred_of(cur)) {
    if (--guard < 0) throw InternalError("dp: predecessor chain does not terminate");
    cur = *p;
    rev.push_back(cur);
  }
  if (!is_initial(t.side(), cur))
    throw InternalError("dp: predecessor chain ends at non-initial signature " +
                        cur.to_string());
  return {rev.rbegin(), rev.rend()};
}

// Debug dump: one row per signature in the universe, "inf" for unreachable
// entries, empty predecessor columns where none exists.
template <class V>
void dump_csv(const DpTables<V>& t, std::ostream& os) {
  os << "s,m,p,z,opt,pred_m,pred_p,pred_z\n";
  const int s = side_index(t.side());
  for (int m = 0; m <= t.n(); ++m) {
    for (int p = 0; p <= t.n(); ++p) {
      for (int z = 0; z <= m; ++z) {
        Signature sig{m, p, z};
        os << s << ',' << m << ',' << p << ',' << z << ','
           << num_traits<V>::to_string(t.opt(sig));
        if (auto pr = t.pred_of(sig)) {
          os << ',' << pr->m << ',' << pr->p << ',' << pr->z;
        } else {
          os << ",,,";
        }
        os << '\n';
      }
    }
  }
}

}  // namespace aifv2
