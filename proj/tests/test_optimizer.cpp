#include <gtest/gtest.h>

#include <aifv2/optimizer.hpp>
#include <aifv2/random.hpp>
#include <aifv2/rational.hpp>

#include <cmath>
#include <vector>

using aifv2::CostParam;
using aifv2::FillStrategy;
using aifv2::OptimizeOptions;
using aifv2::OptimizeStatus;
using aifv2::Rat;
using aifv2::Side;
using aifv2::SourceDistribution;

namespace {

SourceDistribution<Rat> uniform3() {
  return SourceDistribution<Rat>::make({"a", "b", "c"},
                                       {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
}

SourceDistribution<Rat> dyadic4() {
  return SourceDistribution<Rat>::make(
      {"a", "b", "c", "d"}, {Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)});
}

}  // namespace

TEST(Stationary, FrozenValues) {
  auto P = aifv2::stationary(Rat(1, 4), Rat(3, 4));
  EXPECT_EQ(P.first, Rat(3, 4));
  EXPECT_EQ(P.second, Rat(1, 4));
  EXPECT_EQ(aifv2::average_length(Rat(1), Rat(2), P), Rat(5, 4));

  // Both transition masses zero: state 0 absorbs.
  auto Q = aifv2::stationary(Rat(0), Rat(0));
  EXPECT_EQ(Q.first, Rat(1));
  EXPECT_EQ(Q.second, Rat(0));

  auto R = aifv2::stationary(0.5, 0.25);
  EXPECT_NEAR(R.first, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(R.second, 2.0 / 3.0, 1e-15);
}

TEST(Huffman, FrozenCosts) {
  EXPECT_EQ(aifv2::huffman(uniform3()).cost, Rat(5, 3));
  EXPECT_EQ(aifv2::huffman(dyadic4()).cost, Rat(7, 4));
  auto u4 = SourceDistribution<Rat>::make(
      {"a", "b", "c", "d"}, {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  EXPECT_EQ(aifv2::huffman(u4).cost, Rat(2));
  auto h = aifv2::huffman(dyadic4());
  EXPECT_EQ(h.lengths, (std::vector<int>{1, 2, 3, 3}));
}

TEST(Huffman, MatchesEntropyBoundOnRandomInputs) {
  aifv2::Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.uniform_int(0, 9));
    auto d = aifv2::random_distribution_float(rng, n);
    auto h = aifv2::huffman(d);
    double H = d.entropy();
    EXPECT_GE(h.cost, H - 1e-9);
    EXPECT_LT(h.cost, H + 1.0 + 1e-9);
    // Kraft equality for a full binary tree.
    double kraft = 0.0;
    for (int len : h.lengths) kraft += std::ldexp(1.0, -len);
    EXPECT_NEAR(kraft, 1.0, 1e-9);
  }
}

TEST(BestTree, TwinMastersBeatHuffmanAtCZero) {
  // At C = 0 the side-0 problem minimizes plain average length.  Making both
  // depth-1 nodes masters gives a and b one-bit words while c and d ride the
  // continuation slots at depth 3: 1/2 + 1/4 + 3/8 + 3/8 = 3/2, undercutting
  // any prefix code.
  auto d = dyadic4();
  auto b = aifv2::best_tree(Side::t0, d, CostParam<Rat>(Rat(0)));
  EXPECT_EQ(b.cost, Rat(3, 2));
  EXPECT_EQ(b.fn.L, Rat(3, 2));
  EXPECT_EQ(b.fn.codewords,
            (std::vector<std::string>{"0", "1", "000", "100"}));
  EXPECT_TRUE(b.fn.symbol_is_master[0]);
  EXPECT_TRUE(b.fn.symbol_is_master[1]);
  EXPECT_EQ(b.fn.q1, Rat(3, 4));
  EXPECT_LT(b.cost, aifv2::huffman(d).cost);
}

TEST(BestTree, RealizedCostsMatchTables) {
  aifv2::Rng rng(808);
  for (int n = 3; n <= 6; ++n) {
    auto d = aifv2::random_distribution_exact(rng, n);
    for (const Rat& c : {Rat(0), Rat(2, 5), Rat(1)}) {
      for (FillStrategy st : {FillStrategy::naive, FillStrategy::batched}) {
        for (Side side : {Side::t0, Side::t1}) {
          auto b = aifv2::best_tree(side, d, CostParam<Rat>(c), st);
          EXPECT_TRUE(b.tree.complete());
          Rat realized = side == Side::t0 ? b.fn.L + c * b.fn.q1
                                          : b.fn.L - c * b.fn.q0;
          EXPECT_EQ(realized, b.cost);
        }
      }
    }
  }
}

TEST(Optimize, DyadicReachesEntropy) {
  // For the dyadic distribution Huffman already meets the entropy, so the
  // optimal code-tree pair can do no better: the long-run rate is exactly
  // 7/4 bits per symbol.
  auto pair = aifv2::optimize<Rat>(dyadic4(), Rat(0));
  EXPECT_EQ(pair.status, OptimizeStatus::converged);
  EXPECT_EQ(pair.l_avg, Rat(7, 4));
  EXPECT_LE(pair.iterations, 640);
  EXPECT_EQ(pair.history.size(), static_cast<std::size_t>(pair.iterations) + 1);
  EXPECT_EQ(pair.history.front(), Rat(415037, 1000000));
  // The reported parameter satisfies the fixed-point identity of its trees.
  Rat denom = pair.f0.q1 + pair.f1.q0;
  ASSERT_NE(denom, Rat(0));
  EXPECT_EQ(pair.C, (pair.f1.L - pair.f0.L) / denom);
  // Stationary distribution and average length are consistent.
  auto P = aifv2::stationary(pair.f0.q1, pair.f1.q0);
  EXPECT_EQ(P, pair.P);
  EXPECT_EQ(aifv2::average_length(pair.f0.L, pair.f1.L, P), pair.l_avg);
}

TEST(Optimize, MatchesBruteForceOnSmallAlphabets) {
  aifv2::Rng rng(616);
  std::vector<SourceDistribution<Rat>> dists;
  dists.push_back(uniform3());
  dists.push_back(dyadic4());
  dists.push_back(aifv2::random_distribution_exact(rng, 4));
  dists.push_back(aifv2::random_distribution_exact(rng, 5));
  for (const auto& d : dists) {
    auto pair = aifv2::optimize<Rat>(d, Rat(0));
    auto bf = aifv2::brute_force_pair<Rat>(d);
    EXPECT_EQ(pair.l_avg, bf.cost) << "n=" << d.n();
    EXPECT_LE(pair.l_avg, aifv2::huffman(d).cost);
    double H = d.entropy();
    EXPECT_GE(aifv2::num_traits<Rat>::to_double(pair.l_avg), H - 1e-9);
    // Every parameter in the history stays in [0, 1].
    for (const Rat& c : pair.history) {
      EXPECT_GE(c, Rat(0));
      EXPECT_LE(c, Rat(1));
    }
  }
}

TEST(Optimize, StrategiesAgreeExactly) {
  for (const auto& d : {uniform3(), dyadic4()}) {
    OptimizeOptions<Rat> naive;
    naive.strategy = FillStrategy::naive;
    OptimizeOptions<Rat> batched;
    batched.strategy = FillStrategy::batched;
    auto a = aifv2::optimize<Rat>(d, Rat(0), naive);
    auto b = aifv2::optimize<Rat>(d, Rat(0), batched);
    EXPECT_EQ(a.l_avg, b.l_avg);
    EXPECT_EQ(a.C, b.C);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.history, b.history);
    auto fa = aifv2::code_functionals(a.t0, d);
    auto fb = aifv2::code_functionals(b.t0, d);
    EXPECT_EQ(fa.codewords, fb.codewords);
  }
}

TEST(Optimize, FloatModeConverges) {
  auto d = SourceDistribution<double>::make(
      {"a", "b", "c", "d"}, {0.5, 0.25, 0.125, 0.125});
  auto pair = aifv2::optimize<double>(d, 1e-12);
  EXPECT_EQ(pair.status, OptimizeStatus::converged);
  EXPECT_NEAR(pair.l_avg, 1.75, 1e-9);
  EXPECT_NEAR(pair.history.front(), 2.0 - std::log2(3.0), 1e-15);
  EXPECT_THROW(aifv2::optimize<double>(d, -1.0), aifv2::InputError);
}

TEST(Optimize, IterationCapRaises) {
  OptimizeOptions<Rat> opts;
  opts.max_iterations = 0;
  EXPECT_THROW(aifv2::optimize<Rat>(uniform3(), Rat(0), opts),
               aifv2::ConvergenceError);
}

TEST(BruteForce, RejectsLargeAlphabets) {
  auto d6 = SourceDistribution<Rat>::make(
      {"a", "b", "c", "d", "e", "f"},
      {Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 6)});
  EXPECT_THROW(aifv2::brute_force_pair<Rat>(d6), aifv2::InputError);
}

TEST(BruteForce, PairIsInternallyConsistent) {
  auto bf = aifv2::brute_force_pair<Rat>(uniform3());
  EXPECT_TRUE(bf.pair.t0.complete());
  EXPECT_TRUE(bf.pair.t1.complete());
  EXPECT_EQ(bf.pair.l_avg, bf.cost);
  // Three equiprobable symbols cannot beat Huffman: every usable companion
  // tree averages at least two bits, so the all-leaf tree stands alone.
  EXPECT_EQ(bf.cost, Rat(5, 3));
}

TEST(InitialParameter, MatchesBothModes) {
  EXPECT_EQ(aifv2::num_traits<Rat>::initial_cost_param(), Rat(415037, 1000000));
  EXPECT_NEAR(aifv2::num_traits<double>::initial_cost_param(),
              2.0 - std::log2(3.0), 1e-15);
  EXPECT_NEAR(aifv2::num_traits<Rat>::initial_cost_param().to_double(),
              aifv2::num_traits<double>::initial_cost_param(), 1e-6);
}
