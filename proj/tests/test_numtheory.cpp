#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "chernslope/numtheory.hpp"
#include "oracles.hpp"

using namespace chernslope;

TEST(HjExpansion, KnownExpansions) {
  EXPECT_EQ(hj_expand(7, 3).digits, (std::vector<std::int64_t>{3, 2, 2}));
  EXPECT_EQ(hj_expand(17, 5).digits, (std::vector<std::int64_t>{4, 2, 3}));
  EXPECT_EQ(hj_expand(5, 1).digits, (std::vector<std::int64_t>{5}));
  EXPECT_EQ(hj_expand(5, 4).digits, (std::vector<std::int64_t>{2, 2, 2, 2}));
}

TEST(HjExpansion, EvaluatesBackAndMatchesOracle) {
  for (std::int64_t q = 2; q <= 120; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const auto hj = hj_expand(q, a);
      EXPECT_EQ(hj_evaluate(hj.digits), exact_rational(q, a));
      EXPECT_EQ(hj.digits, oracle::hj_digits(q, a));
      EXPECT_EQ(hj.length(), hj_length(q, a));
      for (std::int64_t digit : hj.digits) EXPECT_GE(digit, 2);
    }
  }
}

TEST(HjExpansion, RejectsBadInput) {
  EXPECT_THROW(hj_expand(6, 4), domain_error);
  EXPECT_THROW(hj_expand(6, 0), domain_error);
  EXPECT_THROW(hj_expand(6, 6), domain_error);
  EXPECT_THROW(hj_evaluate(std::vector<std::int64_t>{}), domain_error);
  EXPECT_THROW(hj_evaluate(std::vector<std::int64_t>{2, 1, 1}), degenerate_error);
}

TEST(DedekindSum, KnownValues) {
  EXPECT_EQ(dedekind_sum(3, 1), exact_rational(1, 18));
  EXPECT_EQ(dedekind_sum(5, 2), exact_rational(0));
  EXPECT_EQ(dedekind_sum(17, 5), exact_rational(1, 17));
  EXPECT_EQ(c_value(17, 5), exact_rational(63, 17));
}

TEST(DedekindSum, AgreesWithDefiningSum) {
  for (std::int64_t q = 2; q <= 150; ++q)
    for (std::int64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) ASSERT_EQ(dedekind_sum(q, a), oracle::dedekind_defining_sum(q, a)) << a << "/" << q;
}

TEST(DedekindSum, ReciprocityLaw) {
  for (std::int64_t q = 2; q <= 150; ++q) {
    for (std::int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const exact_rational lhs = dedekind_sum(q, a) + (a == 1 ? exact_rational(0) : dedekind_sum(a, q % a));
      const exact_rational rhs = exact_rational(-1, 4) +
                                 (exact_rational(a, q) + exact_rational(q, a) + exact_rational(1, a * q)) / 12;
      ASSERT_EQ(lhs, rhs) << a << "/" << q;
    }
  }
}

TEST(DedekindSum, SymmetriesUnderInverseAndNegation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t q = 3 + static_cast<std::int64_t>(rng() % 4000);
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q - 1));
    if (std::gcd(a, q) != 1) continue;
    std::int64_t inverse = 1;
    while ((inverse * a) % q != 1) ++inverse;
    EXPECT_EQ(dedekind_sum(q, inverse), dedekind_sum(q, a));
    EXPECT_EQ(dedekind_sum(q, q - a), -dedekind_sum(q, a));
  }
}

TEST(DedekindSum, TwelveQTimesSumIsIntegral) {
  for (std::int64_t q = 2; q <= 200; ++q)
    for (std::int64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) EXPECT_TRUE(is_integer(dedekind_sum(q, a) * 6 * q)) << a << "/" << q;
}

TEST(DedekindData, ExtremeResidues) {
  for (std::int64_t q : {17, 101, 997}) {
    const auto top = dedekind(q, q - 1);
    EXPECT_EQ(top.c, 2 - exact_rational(2, q));
    EXPECT_EQ(top.l, q - 1);
    const auto one = dedekind(q, 1);
    EXPECT_EQ(one.l, 1);
  }
}

TEST(Sawtooth, Values) {
  EXPECT_EQ(sawtooth(exact_rational(1, 4)), exact_rational(-1, 4));
  EXPECT_EQ(sawtooth(exact_rational(3)), exact_rational(0));
  EXPECT_EQ(sawtooth(exact_rational(-1, 3)), exact_rational(1, 6));
}
