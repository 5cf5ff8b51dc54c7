#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "aifv2/codetree.hpp"
#include "aifv2/distribution.hpp"
#include "aifv2/dp.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"
#include "aifv2/signature.hpp"

namespace aifv2 {

// Stationary distribution of the two-state encoding chain.  State 0 is left
// after emitting from a leaf, state 1 after emitting from a master, so the
// transition weights are q1(T0) out of state 0 and q0(T1) out of state 1.
// A zero denominator means state 0 is absorbing: P = (1, 0).
template <class V>
std::pair<V, V> stationary(const V& q1_t0, const V& q0_t1) {
  const V zero = num_traits<V>::from_int(0);
  const V one = num_traits<V>::from_int(1);
  V denom = q1_t0 + q0_t1;
  if (denom == zero) return {one, zero};
  return {q0_t1 / denom, q1_t0 / denom};
}

// Long-run bits per symbol of a pair: P(0) L(T0) + P(1) L(T1).
template <class V>
V average_length(const V& l_t0, const V& l_t1, const std::pair<V, V>& P) {
  return P.first * l_t0 + P.second * l_t1;
}

enum class OptimizeStatus { converged, degenerate };

template <class V>
struct BestTree {
  CodeTree tree;
  V cost;  // DP objective: L + C q1 for side 0, L - C q0 for side 1
  CodeFunctionals<V> fn;
};

// Fills one side's tables at cost parameter C, traces the optimal path and
// materializes the tree.  The reconstructed tree's level cost is checked
// against the table value.
template <class V>
BestTree<V> best_tree(Side side, const SourceDistribution<V>& dist,
                      const CostParam<V>& C,
                      FillStrategy strategy = FillStrategy::batched) {
  DpTables<V> tables = DpTables<V>::fill(side, dist, C, strategy);
  V cost = optimal_cost(tables);
  std::vector<Signature> path = trace_path(tables);
  CodeTree tree = tree_from_path(side, path, dist.n());
  CodeFunctionals<V> fn = code_functionals(tree, dist);

  // The DP objective must match the functionals of the realized tree.
  V realized = side == Side::t0 ? fn.L + C.value() * fn.q1
                                : fn.L - C.value() * fn.q0;
  bool ok;
  if constexpr (num_traits<V>::exact) {
    ok = realized == cost;
  } else {
    ok = std::abs(realized - cost) <= 1e-9 * (1.0 + std::abs(cost));
  }
  if (!ok)
    throw InternalError("best_tree: realized tree cost disagrees with the table");
  return BestTree<V>{std::move(tree), std::move(cost), std::move(fn)};
}

template <class V>
struct CodePair {
  CodeTree t0;
  CodeTree t1;
  CodeFunctionals<V> f0;
  CodeFunctionals<V> f1;
  V C;                    // cost parameter the pair was built at
  V l_avg;                // long-run bits per symbol
  std::pair<V, V> P;      // stationary state distribution
  int iterations = 0;     // parameter updates performed
  std::vector<V> history; // C after each update, starting with the seed
  OptimizeStatus status = OptimizeStatus::converged;
};

template <class V>
struct OptimizeOptions {
  FillStrategy strategy = FillStrategy::batched;
  int max_iterations = 640;
};

// Iterative cost-parameter search.  Starting from C ~ 2 - log2(3), each round
// builds both optimal trees at the current parameter and re-estimates
//   C' = (L(T1) - L(T0)) / (q1(T0) + q0(T1)),
// stopping when the parameter moves by at most `epsilon` (exact mode uses
// epsilon = 0 and terminates on exact equality).  Every update must land in
// [0, 1]; float mode tolerates rounding within 1e-9 outside and clamps.
template <class V>
CodePair<V> optimize(const SourceDistribution<V>& dist, const V& epsilon,
                     const OptimizeOptions<V>& opts = {}) {
  const V zero = num_traits<V>::from_int(0);
  const V one = num_traits<V>::from_int(1);
  if (epsilon < zero) throw InputError("optimize: negative epsilon");

  V C = num_traits<V>::initial_cost_param();
  std::vector<V> history{C};

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    CostParam<V> Cp(C);
    BestTree<V> b0 = best_tree(Side::t0, dist, Cp, opts.strategy);
    BestTree<V> b1 = best_tree(Side::t1, dist, Cp, opts.strategy);

    V denom = b0.fn.q1 + b1.fn.q0;
    if (denom == zero) {
      // Side 0 never leaves state 0: the pair behaves like (T0, unused T1).
      CodePair<V> out{std::move(b0.tree), std::move(b1.tree),
                      std::move(b0.fn),  std::move(b1.fn),
                      C,
                      zero,
                      {one, zero},
                      iter,
                      std::move(history),
                      OptimizeStatus::degenerate};
      out.l_avg = out.f0.L;
      return out;
    }

    V Cnew = (b1.fn.L - b0.fn.L) / denom;
    if (Cnew < zero || one < Cnew) {
      if constexpr (num_traits<V>::exact) {
        throw InternalError("optimize: parameter update left [0, 1]: " +
                            num_traits<V>::to_string(Cnew));
      } else {
        if (Cnew < -1e-9 || Cnew > 1.0 + 1e-9)
          throw InternalError("optimize: parameter update left [0, 1]: " +
                              num_traits<V>::to_string(Cnew));
        Cnew = Cnew < zero ? zero : one;
      }
    }
    history.push_back(Cnew);

    V delta = Cnew - C;
    if (delta < zero) delta = zero - delta;
    if (delta <= epsilon) {
      std::pair<V, V> P = stationary(b0.fn.q1, b1.fn.q0);
      V lavg = average_length(b0.fn.L, b1.fn.L, P);
      return CodePair<V>{std::move(b0.tree), std::move(b1.tree),
                         std::move(b0.fn),  std::move(b1.fn),
                         Cnew,
                         std::move(lavg),
                         std::move(P),
                         iter,
                         std::move(history),
                         OptimizeStatus::converged};
    }
    C = Cnew;
  }
  throw ConvergenceError("optimize: no convergence within " +
                         std::to_string(opts.max_iterations) + " iterations");
}

// ---------------------------------------------------------------------------
// Huffman baseline

template <class V>
struct HuffmanCode {
  std::vector<int> lengths;  // by sorted symbol index
  V cost;                    // average codeword length
};

// Two-queue Huffman construction over the sorted distribution.  Ties prefer
// original leaves over merged packages, which keeps the result deterministic.
template <class V>
HuffmanCode<V> huffman(const SourceDistribution<V>& dist) {
  const int n = dist.n();
  struct Item {
    V weight;
    std::vector<int> symbols;
  };
  std::vector<Item> leaves;
  leaves.reserve(n);
  for (int s = n - 1; s >= 0; --s) leaves.push_back({dist.prob(s), {s}});
  std::vector<Item> merged;
  std::size_t li = 0, mi = 0;
  std::vector<int> lengths(n, 0);

  auto take_smallest = [&]() -> Item {
    bool from_leaves;
    if (li >= leaves.size())
      from_leaves = false;
    else if (mi >= merged.size())
      from_leaves = true;
    else
      from_leaves = !(merged[mi].weight < leaves[li].weight);
    Item it = from_leaves ? std::move(leaves[li++]) : std::move(merged[mi++]);
    return it;
  };

  for (int round = 0; round < n - 1; ++round) {
    Item a = take_smallest();
    Item b = take_smallest();
    for (int s : a.symbols) ++lengths[s];
    for (int s : b.symbols) ++lengths[s];
    Item c;
    c.weight = a.weight + b.weight;
    c.symbols = std::move(a.symbols);
    c.symbols.insert(c.symbols.end(), b.symbols.begin(), b.symbols.end());
    merged.push_back(std::move(c));
  }

  V cost = num_traits<V>::from_int(0);
  for (int s = 0; s < n; ++s)
    cost = cost + dist.prob(s) * num_traits<V>::from_int(lengths[s]);
  return HuffmanCode<V>{std::move(lengths), std::move(cost)};
}

// ---------------------------------------------------------------------------
// Brute-force pair search (small n)

template <class V>
struct BruteForceResult {
  CodePair<V> pair;
  V cost;  // minimal long-run bits per symbol over all tree pairs
};

namespace detail {

// Enumerates every finished tree of one side as (L, q0, path) profiles.
// Dominance: for fixed leaf mass q0 the pair objective is increasing in L,
// so only the cheapest profile per q0 value is kept.
template <class V>
std::map<V, std::pair<V, std::vector<Signature>>> enumerate_side_profiles(
    Side side, const SourceDistribution<V>& dist, int max_depth) {
  const int n = dist.n();
  const PrefixSums<V> W(dist);
  std::map<V, std::pair<V, std::vector<Signature>>> best;  // q0 -> (L, path)

  std::vector<Signature> path;
  // L and q0 are accumulated incrementally: between levels every unplaced
  // symbol deepens by one (add Wp(m)), and new leaves add their mass to q0.
  struct Frame {
    Signature sig;
    V L;
    V q0;
  };

  auto record = [&](const Frame& f) {
    auto it = best.find(f.q0);
    if (it == best.end() || f.L < it->second.first)
      best[f.q0] = {f.L, path};
  };

  std::function<void(Frame, int)> go = [&](Frame f, int level) {
    if (f.sig.m == n && f.sig.p == 0 && f.sig.z == 0) {
      record(f);
      return;
    }
    if (level >= max_depth) return;
    // A finishable state needs one distinct symbol per open slot and per
    // pending slave hand-down.
    if (n - f.sig.m < f.sig.p + f.sig.z) return;
    if (f.sig.p == 0 && f.sig.z == 0) return;
    const int e_cap = std::min(f.sig.p, n - f.sig.m);
    for (int e0 = 0; e0 <= e_cap; ++e0) {
      for (int e1 = 0; e0 + e1 <= e_cap; ++e1) {
        Signature nxt{f.sig.m + e0 + e1, f.sig.z + 2 * (f.sig.p - e0 - e1), e1};
        Frame g;
        g.sig = nxt;
        g.L = f.L + W.Wp(f.sig.m);
        g.q0 = f.q0;
        for (int k = f.sig.m + 1; k <= f.sig.m + e0; ++k)
          g.q0 = g.q0 + dist.prob1(k);
        path.push_back(nxt);
        go(std::move(g), level + 1);
        path.pop_back();
      }
    }
  };

  const V vzero = num_traits<V>::from_int(0);
  for (const Signature& sig : initial_signatures(side)) {
    Frame f;
    f.sig = sig;
    f.q0 = vzero;
    if (side == Side::t0) {
      // Any symbol placed by a side-0 start sits on the depth-0 root.
      f.L = vzero;
    } else {
      // No side-1 symbol sits at depth 0, so the root level already charges
      // one full unit of tail weight (symbol 1, if placed, is at depth 1).
      f.L = num_traits<V>::from_int(1);
      if (sig == Signature{1, 1, 0}) f.q0 = dist.prob1(1);
    }
    path.assign(1, sig);
    go(std::move(f), side == Side::t0 ? 0 : 1);
  }
  return best;
}

}  // namespace detail

// Exhaustive search over all pairs of finished trees with depth at most
// `max_depth` (default n+2).  Only supported for n <= 5.
template <class V>
BruteForceResult<V> brute_force_pair(const SourceDistribution<V>& dist,
                                     std::optional<int> max_depth_opt = std::nullopt) {
  const int n = dist.n();
  if (n > 5) throw InputError("brute_force_pair: only supported for n <= 5");
  const int max_depth = max_depth_opt.value_or(n + 2);

  auto side0 = detail::enumerate_side_profiles<V>(Side::t0, dist, max_depth);
  auto side1 = detail::enumerate_side_profiles<V>(Side::t1, dist, max_depth);
  if (side0.empty() || side1.empty())
    throw InternalError("brute_force_pair: no finished trees found");

  const V one = num_traits<V>::from_int(1);
  bool have = false;
  V best_cost = num_traits<V>::from_int(0);
  const std::vector<Signature>* best_p0 = nullptr;
  const std::vector<Signature>* best_p1 = nullptr;
  for (const auto& [q0_a, la] : side0) {
    V q1_t0 = one - q0_a;
    for (const auto& [q0_b, lb] : side1) {
      std::pair<V, V> P = stationary(q1_t0, q0_b);
      V cost = average_length(la.first, lb.first, P);
      if (!have || cost < best_cost) {
        have = true;
        best_cost = cost;
        best_p0 = &la.second;
        best_p1 = &lb.second;
      }
    }
  }

  CodeTree t0 = tree_from_path(Side::t0, *best_p0, n);
  CodeTree t1 = tree_from_path(Side::t1, *best_p1, n);
  CodeFunctionals<V> f0 = code_functionals(t0, dist);
  CodeFunctionals<V> f1 = code_functionals(t1, dist);
  std::pair<V, V> P = stationary(f0.q1, f1.q0);
  V lavg = average_length(f0.L, f1.L, P);
  if (!(lavg == best_cost))
    throw InternalError("brute_force_pair: materialized pair cost mismatch");

  V denom = f0.q1 + f1.q0;
  V C = denom == num_traits<V>::from_int(0) ? num_traits<V>::from_int(0)
                                            : (f1.L - f0.L) / denom;
  CodePair<V> pair{std::move(t0), std::move(t1), std::move(f0), std::move(f1),
                   std::move(C),  lavg,          P,             0,
                   {},            OptimizeStatus::converged};
  return BruteForceResult<V>{std::move(pair), std::move(best_cost)};
}

}  // namespace aifv2
