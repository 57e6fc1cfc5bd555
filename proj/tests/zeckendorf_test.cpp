#include "fibnim/zeckendorf.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracle.hpp"

using namespace fibnim;

TEST(Fib, BaseCasesAndRecurrence) {
  EXPECT_EQ(fib(0), 0u);
  EXPECT_EQ(fib(1), 1u);
  EXPECT_EQ(fib(10), 55u);
  for (FibIndex t = 0; t <= kMaxFibIndex; ++t) EXPECT_EQ(fib(t), oracle::fib(t)) << t;
}

TEST(Fib, SupportsAtLeastNinety) {
  EXPECT_EQ(fib(90), 2880067194370816120ull);
  EXPECT_EQ(fib(93), 12200160415121876738ull);
}

TEST(Fib, RangeErrorBeyondSupport) { EXPECT_THROW(fib(kMaxFibIndex + 1), std::out_of_range); }

TEST(Zeckendorf, Examples) {
  EXPECT_TRUE(zeckendorf(0).empty());
  EXPECT_EQ(zeckendorf(8).parts(), std::vector<FibIndex>{6});
  EXPECT_EQ(zeckendorf(17).parts(), (std::vector<FibIndex>{2, 4, 7}));
  EXPECT_EQ(zeckendorf(17).values(), (std::vector<Tokens>{1, 3, 13}));
  // The part 1 is always F_2.
  EXPECT_EQ(zeckendorf(1).parts(), std::vector<FibIndex>{2});
}

TEST(Zeckendorf, CanonicalFormUpToAMillion) {
  for (Tokens n = 0; n <= 1000000; ++n) {
    const auto rep = zeckendorf(n);
    Tokens sum = 0;
    for (std::size_t i = 0; i < rep.size(); ++i) {
      ASSERT_GE(rep.parts()[i], 2u);
      if (i > 0) ASSERT_GE(rep.parts()[i], rep.parts()[i - 1] + 2) << n;
      sum += oracle::fib(rep.parts()[i]);
    }
    ASSERT_EQ(sum, n);
    ASSERT_EQ(rep.empty(), n == 0);
  }
}

TEST(Zeckendorf, UniqueByExhaustiveEnumeration) {
  for (Tokens n = 0; n <= 10000; ++n) {
    const auto all = oracle::zeckendorf_subsets(n);
    ASSERT_EQ(all.size(), 1u) << n;
    ASSERT_EQ(all.front(), zeckendorf(n).parts()) << n;
  }
}

TEST(Zeckendorf, LargeValues) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Tokens n = rng() >> 1;
    const auto rep = zeckendorf(n);
    Tokens sum = 0;
    for (auto t : rep.parts()) sum += fib(t);
    ASSERT_EQ(sum, n);
  }
  EXPECT_EQ(zeckendorf(fib(93)).parts(), std::vector<FibIndex>{93});
}

TEST(ZeckendorfRep, RejectsNonCanonicalParts) {
  EXPECT_THROW(ZeckendorfRep({1}, 1), std::invalid_argument);     // 1 must be F_2
  EXPECT_THROW(ZeckendorfRep({2, 3}, 3), std::invalid_argument);  // consecutive
  EXPECT_THROW(ZeckendorfRep({4, 2}, 4), std::invalid_argument);  // not ascending
  EXPECT_THROW(ZeckendorfRep({2, 4}, 5), std::invalid_argument);  // wrong sum
  EXPECT_NO_THROW(ZeckendorfRep({2, 4}, 4));
}

TEST(ZPart, Examples) {
  EXPECT_EQ(z_part(1, 12), 1u);
  EXPECT_EQ(z_part(2, 12), 3u);
  EXPECT_EQ(z_part(3, 12), 8u);
  EXPECT_TRUE(z_part(4, 12).is_infinite());
  EXPECT_TRUE(z_part(1, 0).is_infinite());
  EXPECT_THROW(z_part(0, 12), std::invalid_argument);
}

TEST(ZPart, InfinityOrdering) {
  const ZPart inf = ZPart::infinity();
  EXPECT_TRUE(Tokens{0} < inf);
  EXPECT_TRUE(std::numeric_limits<Tokens>::max() < inf);
  EXPECT_FALSE(inf < Tokens{5});
  EXPECT_FALSE(inf == Tokens{5});
  EXPECT_TRUE(ZPart(3) < inf);
  EXPECT_EQ(inf, ZPart::infinity());
  EXPECT_THROW((void)inf.value(), std::logic_error);
}

TEST(ZPart, SmallestPartShortcutMatchesRepresentation) {
  for (Tokens n = 0; n <= 200000; ++n) ASSERT_EQ(z1(n), z_part(1, n)) << n;
}

TEST(IsFibonacci, Examples) {
  EXPECT_TRUE(is_fibonacci(13));
  EXPECT_FALSE(is_fibonacci(12));
  EXPECT_TRUE(is_fibonacci(0));
  EXPECT_TRUE(is_fibonacci(1));
  EXPECT_TRUE(is_fibonacci(fib(93)));
  EXPECT_FALSE(is_fibonacci(fib(93) - 1));
}

TEST(IsFibonacci, AgreesWithSinglePartRepresentation) {
  for (Tokens n = 1; n <= 100000; ++n) ASSERT_EQ(is_fibonacci(n), zeckendorf(n).size() == 1) << n;
}

TEST(FibIndex, Lookup) {
  EXPECT_EQ(fib_index(1), 2u);
  EXPECT_EQ(fib_index(2), 3u);
  EXPECT_EQ(fib_index(55), 10u);
  EXPECT_THROW(fib_index(4), std::invalid_argument);
}
