#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "aifv2/distribution.hpp"
#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"
#include "aifv2/rational.hpp"

namespace aifv2 {

// SplitMix64: tiny, fast, and stable across platforms, so seeded runs are
// reproducible everywhere.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] inclusive.
  long long uniform_int(long long lo, long long hi) {
    if (lo > hi) throw InternalError("rng: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(next() % span);
  }
};

inline std::vector<std::string> default_symbols(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

// Random float distribution via sorted spacings, resampled until every
// probability clears `min_prob`.  Pass min_prob <= 0 (the default) to pick a
// floor automatically: 1e-3 for small alphabets, shrinking like 1/n^2 for
// large ones.  The smallest of n uniform spacings has mean about 1/n^2, so a
// fixed floor would make acceptance astronomically unlikely for big n.
inline SourceDistribution<double> random_distribution_float(Rng& rng, int n,
                                                            double min_prob = -1.0) {
  if (min_prob <= 0.0)
    min_prob = std::min(1e-3, 0.25 / (static_cast<double>(n) * n));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> cuts(n - 1);
    for (double& c : cuts) c = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> probs;
    probs.reserve(n);
    double prev = 0.0;
    for (double c : cuts) {
      probs.push_back(c - prev);
      prev = c;
    }
    probs.push_back(1.0 - prev);
    if (*std::min_element(probs.begin(), probs.end()) < min_prob) continue;
    return SourceDistribution<double>::make(default_symbols(n), std::move(probs));
  }
  throw InternalError("random distribution: resampling did not terminate");
}

// Random exact distribution: integer weights in [1, max_weight] normalized
// by their sum, keeping denominators tiny.
inline SourceDistribution<Rat> random_distribution_exact(Rng& rng, int n,
                                                         int max_weight = 64) {
  std::vector<long long> w(n);
  long long total = 0;
  for (long long& x : w) {
    x = rng.uniform_int(1, max_weight);
    total += x;
  }
  std::vector<Rat> probs;
  probs.reserve(n);
  for (long long x : w) probs.push_back(Rat(x, total));
  return SourceDistribution<Rat>::make(default_symbols(n), std::move(probs));
}

// Samples `count` symbols (sorted indices) i.i.d. from the distribution.
template <class V>
std::vector<int> sample_symbols(Rng& rng, const SourceDistribution<V>& dist,
                                std::size_t count) {
  std::vector<double> cdf(dist.n());
  double acc = 0.0;
  for (int i = 0; i < dist.n(); ++i) {
    acc += num_traits<V>::to_double(dist.prob(i));
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  std::vector<int> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double u = rng.uniform();
    int idx = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx >= dist.n()) idx = dist.n() - 1;
    out.push_back(idx);
  }
  return out;
}

}  // namespace aifv2
