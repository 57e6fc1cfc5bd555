#include "fibnim/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracle.hpp"

using namespace fibnim;

namespace {

const GrundyTable& table20() {
  static const GrundyTable t = build_table(20);
  return t;
}

const GrundyTable& table2000() {
  static const GrundyTable t = build_table(2000);
  return t;
}

std::uint64_t violations_of(const ScanReport& rep, std::string_view id) {
  for (const auto& c : rep.checks) {
    if (c.id == id) return c.violations;
  }
  return 0;
}

std::uint64_t checked_of(const ScanReport& rep, std::string_view id) {
  for (const auto& c : rep.checks) {
    if (c.id == id) return c.checked;
  }
  return 0;
}

}  // namespace

TEST(ClassifySmall, Examples) {
  EXPECT_EQ(classify_small(11, 3), SmallValueClass::V3);
  EXPECT_EQ(classify_small(18, 4), SmallValueClass::V0);
  EXPECT_EQ(classify_small(9, 5), SmallValueClass::V1);
  EXPECT_EQ(classify_small(20, 13), SmallValueClass::GE4);
  EXPECT_EQ(classify_small(0, 0), SmallValueClass::V0);
  // 1 + 3 + 13: first clause of the value-3 characterization.
  EXPECT_EQ(classify_small(17, 3), SmallValueClass::V3);
  EXPECT_EQ(classify_small(17, 12), SmallValueClass::V3);
  EXPECT_EQ(classify_small(17, 13), SmallValueClass::GE4);
  // Cap clamps to the heap.
  EXPECT_EQ(classify_small(4, 99), classify_small(4, 4));
}

TEST(ClassifySmall, ExactlyOneClassEverywhere) {
  for (Tokens n = 0; n <= 3000; ++n) {
    for (Tokens r = 0; r <= n; ++r) ASSERT_NO_THROW(classify_small(n, r)) << n << ',' << r;
  }
}

TEST(ClassifySmall, AgreesWithNaiveOracleOnSmallHeaps) {
  oracle::NaiveGrundy naive;
  for (Tokens n = 0; n <= 300; ++n) {
    for (Tokens r = 0; r <= n; ++r) {
      const unsigned g = naive(n, r);
      ASSERT_EQ(class_floor(classify_small(n, r)), std::min(g, 4u)) << n << ',' << r;
    }
  }
}

TEST(VerifySmallValues, Table) {
  EXPECT_TRUE(verify_small_values(table20(), 20).ok());
  EXPECT_TRUE(verify_small_values(table20(), 0).ok());
  const auto rep = verify_small_values(table2000(), 2000);
  EXPECT_TRUE(rep.ok());
  std::uint64_t total = 0;
  for (const auto& c : rep.checks) total += c.checked;
  EXPECT_EQ(total, 2001u * 2002u / 2u);
}

TEST(VerifySmallValues, HorizonGuard) { EXPECT_THROW(verify_small_values(table20(), 21), HorizonError); }

TEST(HOf, FirstAppearances) {
  const auto h = h_of(table20());
  const std::vector<HEntry> expected{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 5}, {5, 8}, {6, 12}, {7, 16}};
  EXPECT_EQ(h, expected);
}

TEST(HOf, EqualsDiagonalFirstAppearance) {
  const auto& t = table2000();
  for (const auto& e : h_of(t)) {
    Tokens n = 0;
    while (t.row(n).full() != e.g) ++n;
    EXPECT_EQ(n, e.h) << e.g;
  }
}

TEST(JPrefix, Examples) {
  const auto j = j_prefix(table20());
  auto at = [&](Grundy g) {
    return std::find_if(j.begin(), j.end(), [g](const JEntry& e) { return e.g == g; })->r_upper;
  };
  EXPECT_EQ(at(0), 0u);
  EXPECT_EQ(at(3), 3u);
  EXPECT_EQ(at(5), 7u);
  for (const auto& e : j) EXPECT_GE(e.r_upper, e.g);
}

TEST(FirstBlock, Examples) {
  const auto a0 = first_block(table20(), 0);
  EXPECT_EQ(a0.h_next, 1u);
  EXPECT_EQ(a0.members, std::vector<Position>{Position(0, 0)});

  const auto a3 = first_block(table20(), 3);
  EXPECT_EQ(a3.h_next, 5u);
  EXPECT_EQ(a3.members, (std::vector<Position>{{3, 3}, {4, 3}, {4, 4}}));

  const auto a6 = first_block(table20(), 6);
  EXPECT_EQ(a6.h_next, 16u);
  for (const auto& p : a6.members) EXPECT_LT(p.tokens(), 16u);
  EXPECT_FALSE(a6.members.empty());
}

TEST(FirstBlock, NeedsNextValueInTable) { EXPECT_THROW(first_block(table20(), 7), HorizonError); }

TEST(FirstBlock, UpwardClosedForEveryRealizedValue) {
  const auto t = build_table(300);
  const auto h = h_of(t);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const auto block = first_block(t, h[i].g);
    std::set<std::pair<Tokens, Tokens>> members;
    for (const auto& p : block.members) members.emplace(p.tokens(), p.cap());
    for (const auto& p : block.members) {
      for (Tokens r = p.cap() + 1; r <= p.tokens(); ++r) ASSERT_TRUE(members.count({p.tokens(), r}));
    }
  }
}

TEST(VerifyGrowth, DeskScale) {
  const auto rep = verify_growth(table20(), 20);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(violations_of(rep, "growth.step"), 0u);
  EXPECT_EQ(checked_of(rep, "growth.step"), 20u);
  ASSERT_TRUE(rep.endpoint.has_value());
  EXPECT_EQ(rep.endpoint->g, 7u);
  EXPECT_EQ(rep.endpoint->upper_bound, 10u);
  // m-sequence 1, 2, 3, 5, 8, 12, 18 puts seven terms at or below 18 and 20.
  EXPECT_EQ(rep.endpoint->mseq_bound, 7u);
}

TEST(VerifyGrowth, LogBoundGapsAreReportedNotFailed) {
  const auto rep = verify_growth(table20(), 20);
  auto has = [&](Tokens n) {
    return std::any_of(rep.log_bound_gaps.begin(), rep.log_bound_gaps.end(),
                       [n](const LogBoundGap& g) { return g.n == n; });
  };
  EXPECT_TRUE(has(8));
  EXPECT_TRUE(has(20));
  EXPECT_FALSE(has(5));
  EXPECT_TRUE(rep.ok());
}

TEST(VerifyGrowth, TwoThousand) {
  const auto rep = verify_growth(table2000(), 2000);
  EXPECT_TRUE(rep.ok()) << to_json(rep).dump(2);
  EXPECT_GT(checked_of(rep, "growth.start"), 0u);
  EXPECT_GT(checked_of(rep, "growth.h_gap"), 0u);
}

TEST(SmallFibsLemma, Holds) {
  const auto rep = verify_smallfibs_lemma(5000);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(checked_of(rep, "lemma.double_k4"), 0u);
}

TEST(Strategy, SmallestPartFromStart) { EXPECT_TRUE(verify_strategy(table2000(), 2000).ok()); }

TEST(ScanReport, MergeIsAssociative) {
  const auto a = verify_small_values(table20(), 10);
  const auto b = verify_growth(table20(), 15);
  const auto c = verify_strategy(table20(), 20);
  const auto left = merge(merge(a, b), c);
  const auto right = merge(a, merge(b, c));
  EXPECT_EQ(left.checks, right.checks);
  EXPECT_EQ(left.violations, right.violations);
  EXPECT_EQ(left.h_seq, right.h_seq);
  EXPECT_EQ(left.j_prefix_seq, right.j_prefix_seq);
  EXPECT_EQ(left.n_lo, right.n_lo);
  EXPECT_EQ(left.n_hi, right.n_hi);
}

TEST(ScanReport, ViolationsAreRecorded) {
  ScanReport rep;
  rep.check("x", true, {1, 1}, "a", "a");
  rep.check("x", false, {2, 1}, "a", "b");
  EXPECT_FALSE(rep.ok());
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_EQ(rep.checks[0].checked, 2u);
  EXPECT_EQ(rep.checks[0].violations, 1u);
  EXPECT_EQ(rep.violations[0].witness, Position(2, 1));
}

TEST(ScanReport, JsonFieldNames) {
  const auto j = to_json(verify_growth(table20(), 20));
  for (const char* key : {"range", "violations", "h_seq", "j_prefix_seq", "conjecture_counterexamples", "elapsed_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["range"], nlohmann::json({0, 20}));
  EXPECT_EQ(j["h_seq"][4], nlohmann::json({4, 5}));
}
