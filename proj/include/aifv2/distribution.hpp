#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"

namespace aifv2 {

// A validated source distribution over at least three symbols.  Probabilities
// are stored sorted in non-increasing order (ties broken by original
// position, so construction is deterministic); the permutation back to the
// caller's order is kept for presentation.
template <class V>
class SourceDistribution {
 public:
  // Validates and sorts.  Requirements: n >= 3, every probability positive,
  // probabilities summing to one (exactly in exact mode, within 1e-12 in
  // float mode), symbol labels distinct and nonempty.
  static SourceDistribution make(std::vector<std::string> symbols,
                                 std::vector<V> probs) {
    if (symbols.size() != probs.size())
      throw InputError("distribution: symbols and probs differ in length");
    const std::size_t n = probs.size();
    if (n < 3) throw InputError("distribution: need at least 3 symbols");
    {
      std::set<std::string> seen;
      for (const auto& s : symbols) {
        if (s.empty()) throw InputError("distribution: empty symbol label");
        if (!seen.insert(s).second)
          throw InputError("distribution: duplicate symbol '" + s + "'");
      }
    }
    V sum = num_traits<V>::from_int(0);
    for (const V& p : probs) {
      if (num_traits<V>::is_infinite(p) || !(num_traits<V>::from_int(0) < p))
        throw InputError("distribution: probabilities must be positive");
      sum = sum + p;
    }
    const V one = num_traits<V>::from_int(1);
    if constexpr (num_traits<V>::exact) {
      if (!(sum == one))
        throw InputError("distribution: probabilities must sum to 1, got " +
                         num_traits<V>::to_string(sum));
    } else {
      if (std::abs(num_traits<V>::to_double(sum) - 1.0) > 1e-12)
        throw InputError("distribution: probabilities must sum to 1, got " +
                         num_traits<V>::to_string(sum));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return probs[b] < probs[a];  // descending, stable on ties
    });

    SourceDistribution d;
    d.symbols_.reserve(n);
    d.probs_.reserve(n);
    d.to_sorted_.assign(n, 0);
    for (std::size_t rank = 0; rank < n; ++rank) {
      d.symbols_.push_back(std::move(symbols[order[rank]]));
      d.probs_.push_back(std::move(probs[order[rank]]));
      d.to_sorted_[order[rank]] = rank;
    }
    return d;
  }

  int n() const { return static_cast<int>(probs_.size()); }

  // 0-based access into the sorted order.
  const V& prob(int idx) const { return probs_.at(idx); }
  const std::string& symbol(int idx) const { return symbols_.at(idx); }

  // 1-based access matching the usual p_1 >= p_2 >= ... notation.
  const V& prob1(int k) const { return probs_.at(k - 1); }

  const std::vector<V>& probs() const { return probs_; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  // Maps an original input position to its rank in sorted order.
  int sorted_index_of_input(int original) const { return static_cast<int>(to_sorted_.at(original)); }

  // Index of a symbol label in sorted order, or -1.
  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == label) return static_cast<int>(i);
    return -1;
  }

  // Shannon entropy in bits (always computed in floating point).
  double entropy() const {
    double h = 0.0;
    for (const V& p : probs_) {
      double pd = num_traits<V>::to_double(p);
      h -= pd * std::log2(pd);
    }
    return h;
  }

 private:
  SourceDistribution() = default;
  std::vector<std::string> symbols_;
  std::vector<V> probs_;
  std::vector<std::size_t> to_sorted_;
};

// Cumulative weights over a sorted distribution:
//   W(m)       = p_1 + ... + p_m            (W(0) = 0, W(n) = 1)
//   Wp(m)      = 1 - W(m)                   (tail weight)
//   range(a,b) = W(b) - W(a) = p_{a+1} + ... + p_b   for a <= b
template <class V>
class PrefixSums {
 public:
  explicit PrefixSums(const SourceDistribution<V>& dist) {
    const int n = dist.n();
    cum_.resize(n + 1);
    cum_[0] = num_traits<V>::from_int(0);
    for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + dist.prob(i);
    const V one = num_traits<V>::from_int(1);
    wp_.resize(n + 1);
    for (int i = 0; i <= n; ++i) wp_[i] = one - cum_[i];
  }

  int n() const { return static_cast<int>(cum_.size()) - 1; }
  const V& W(int m) const { return cum_.at(m); }
  const V& Wp(int m) const { return wp_.at(m); }
  V range(int a, int b) const {
    if (a > b) throw InternalError("prefix sums: range with a > b");
    return cum_.at(b) - cum_.at(a);
  }

 private:
  std::vector<V> cum_;
  std::vector<V> wp_;
};

}  // namespace aifv2
