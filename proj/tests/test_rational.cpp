#include <gtest/gtest.h>

#include "dynpat/rational.hpp"

using dynpat::Rational;

TEST(Rational, ReducesAndNormalizesSign) {
  const Rational a(6, -8);
  EXPECT_EQ(a.num, -3);
  EXPECT_EQ(a.den, 4);
  EXPECT_EQ(a.str(), "-3/4");
  EXPECT_EQ(Rational(0, 5), Rational(0, 1));
}

TEST(Rational, ZeroDenominatorThrows) { EXPECT_THROW(Rational(1, 0), dynpat::ValidationError); }

TEST(Rational, OrderingByValue) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_LT(Rational(21, 34), Rational(34, 55));
  EXPECT_DOUBLE_EQ(Rational(3, 8).value(), 0.375);
}

TEST(Rational, Parse) {
  EXPECT_EQ(dynpat::parse_rational("21/34"), Rational(21, 34));
  EXPECT_EQ(dynpat::parse_rational("4/8"), Rational(1, 2));
  EXPECT_EQ(dynpat::parse_rational("0"), Rational(0, 1));
  EXPECT_THROW(dynpat::parse_rational("abc"), dynpat::ValidationError);
  EXPECT_THROW(dynpat::parse_rational("1/0"), dynpat::ValidationError);
}

TEST(Rational, ReducedFractionsUpToTwo) {
  const auto f = dynpat::reduced_fractions(2);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], Rational(0, 1));
  EXPECT_EQ(f[1], Rational(1, 2));
}

TEST(Rational, ReducedFractionsCountMatchesTotient) {
  // 1 + sum_{q=2}^{Q} phi(q), with phi computed by brute force
  for (int qmax = 1; qmax <= 12; ++qmax) {
    std::size_t expected = 1;
    for (int q = 2; q <= qmax; ++q) {
      for (int p = 1; p < q; ++p) expected += std::gcd(p, q) == 1 ? 1 : 0;
    }
    EXPECT_EQ(dynpat::reduced_fractions(qmax).size(), expected) << qmax;
  }
}

TEST(Rational, ReducedFractionsOrderedByDenominatorThenNumerator) {
  const auto f = dynpat::reduced_fractions(5);
  const std::vector<Rational> expected{{0, 1}, {1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4},
                                       {1, 5}, {2, 5}, {3, 5}, {4, 5}};
  EXPECT_EQ(f, expected);
}

TEST(Rational, FareySequenceIsIncreasingWithNeighbourDeterminantOne) {
  const auto f = dynpat::farey_sequence(8);
  for (std::size_t i = 1; i < f.size(); ++i) {
    EXPECT_LT(f[i - 1], f[i]);
    EXPECT_EQ(f[i].num * f[i - 1].den - f[i - 1].num * f[i].den, 1);
  }
}
