#include <gtest/gtest.h>

#include <aifv2/rational.hpp>

#include <string>
#include <vector>

using aifv2::OverflowError;
using aifv2::Rat;

TEST(Rational, NormalizesOnConstruction) {
  EXPECT_EQ(Rat(2, 4), Rat(1, 2));
  EXPECT_EQ(Rat(-2, 4).num(), -1);
  EXPECT_EQ(Rat(-2, 4).den(), 2);
  EXPECT_EQ(Rat(3, -6), Rat(-1, 2));
  EXPECT_EQ(Rat(0, 7), Rat(0));
  EXPECT_EQ(Rat(0).den(), 1);
  EXPECT_EQ(Rat(42).num(), 42);
  EXPECT_THROW(Rat(1, 0), OverflowError);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rat(1, 3) + Rat(1, 6), Rat(1, 2));
  EXPECT_EQ(Rat(1, 2) - Rat(3, 4), Rat(-1, 4));
  EXPECT_EQ(Rat(1, 2) * Rat(2, 3), Rat(1, 3));
  EXPECT_EQ(Rat(1, 2) / Rat(3, 2), Rat(1, 3));
  EXPECT_EQ(-Rat(2, 5), Rat(-2, 5));
  EXPECT_THROW(Rat(1) / Rat(0), OverflowError);

  Rat acc(0);
  for (int i = 0; i < 64; ++i) acc += Rat(1, 64);
  EXPECT_EQ(acc, Rat(1));
}

TEST(Rational, Comparisons) {
  EXPECT_LT(Rat(1, 3), Rat(1, 2));
  EXPECT_LT(Rat(-1, 2), Rat(0));
  EXPECT_LE(Rat(2, 4), Rat(1, 2));
  EXPECT_GT(Rat(7, 8), Rat(6, 7));
  EXPECT_NE(Rat(1, 3), Rat(1, 4));
  // Large cross-products exercise the wide-integer comparison path.
  EXPECT_LT(Rat(1000000006, 1000000007), Rat(1000000007, 1000000008));
}

TEST(Rational, InfinitySemantics) {
  const Rat inf = Rat::infinity();
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_EQ(inf, Rat::infinity());
  EXPECT_LT(Rat(1LL << 60), inf);
  EXPECT_EQ(inf + Rat(5), inf);
  EXPECT_EQ(Rat(5) + inf, inf);
  EXPECT_EQ(inf - Rat(5), inf);
  EXPECT_EQ(inf * Rat(3), inf);
  EXPECT_THROW(inf - inf, OverflowError);
  EXPECT_THROW(Rat(1) - inf, OverflowError);
  EXPECT_THROW(inf * Rat(0), OverflowError);
  EXPECT_THROW(-inf, OverflowError);
}

TEST(Rational, OverflowDetection) {
  const Rat tiny(1, 4000000019LL);
  EXPECT_THROW(tiny * tiny, OverflowError);
  const Rat big(4000000019LL);
  EXPECT_THROW(big * big, OverflowError);
  // Addition overflow: coprime denominators whose product exceeds int64.
  const Rat a(1, 1LL << 32);
  const Rat b(1, (1LL << 32) - 1);
  EXPECT_THROW(a + b, OverflowError);
  // Exact but large decimal expansions overflow rather than round.
  EXPECT_THROW(Rat::parse("0.1234567890123456789"), OverflowError);
}

TEST(Rational, Parsing) {
  EXPECT_EQ(Rat::parse("0"), Rat(0));
  EXPECT_EQ(Rat::parse("7"), Rat(7));
  EXPECT_EQ(Rat::parse("-3"), Rat(-3));
  EXPECT_EQ(Rat::parse("1/4"), Rat(1, 4));
  EXPECT_EQ(Rat::parse("-2/8"), Rat(-1, 4));
  EXPECT_EQ(Rat::parse("0.25"), Rat(1, 4));
  EXPECT_EQ(Rat::parse("-0.5"), Rat(-1, 2));
  EXPECT_EQ(Rat::parse(".5"), Rat(1, 2));
  EXPECT_EQ(Rat::parse("3/2^3"), Rat(3, 8));
  EXPECT_EQ(Rat::parse("1/2^10"), Rat(1, 1024));
  EXPECT_EQ(Rat::parse("415037/1000000"), Rat(415037, 1000000));
  EXPECT_EQ(Rat::parse(" 1/2 "), Rat(1, 2));

  const std::vector<std::string> bad = {"", "   ", "abc", "1/0", "2^",
                                        "1/2^70", "1.2.3", "--1", "1//2"};
  for (const auto& s : bad) {
    EXPECT_THROW(Rat::parse(s), aifv2::InputError) << "input: '" << s << "'";
  }
}

TEST(Rational, Formatting) {
  EXPECT_EQ(Rat(5, 3).to_string(), "5/3");
  EXPECT_EQ(Rat(-1, 2).to_string(), "-1/2");
  EXPECT_EQ(Rat(7).to_string(), "7");
  EXPECT_EQ(Rat::infinity().to_string(), "inf");
  EXPECT_DOUBLE_EQ(Rat(1, 2).to_double(), 0.5);
  EXPECT_DOUBLE_EQ(Rat(-3, 4).to_double(), -0.75);
}

TEST(Rational, AbsAndSign) {
  EXPECT_EQ(Rat(-5, 3).abs(), Rat(5, 3));
  EXPECT_EQ(Rat(5, 3).abs(), Rat(5, 3));
  EXPECT_EQ(Rat(0).abs(), Rat(0));
}
