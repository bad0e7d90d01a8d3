/*
 * Copyright 2026 The pbe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "domain.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"

namespace pbe {
namespace {

TEST(PlatformTest, RoundTripsNames) {
  for (const Platform p : {Platform::kWeb, Platform::kMobile}) {
    auto parsed = ParsePlatform(PlatformName(p));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, p);
  }
  EXPECT_EQ(ParsePlatform("tablet").status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(DecimalTest, EquivalentSpellingsCompareEqual) {
  auto a = ParseDecimal("19.90");
  auto b = ParseDecimal("19.9");
  auto c = ParseDecimal("+19.900");
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(*a, *c);
  EXPECT_EQ(a->ToString(), "19.9");
  EXPECT_NE(*ParseDecimal("19.91"), *a);
}

TEST(DecimalTest, FormatsSmallAndNegativeValues) {
  EXPECT_EQ(ParseDecimal("0.05")->ToString(), "0.05");
  EXPECT_EQ(ParseDecimal("-1.50")->ToString(), "-1.5");
  EXPECT_EQ(ParseDecimal("1200")->ToString(), "1200");
}

TEST(DecimalTest, RejectsMalformedText) {
  for (const char* bad : {"", "-", "1.2.3", "1e5", "abc", "."}) {
    EXPECT_FALSE(ParseDecimal(bad).ok()) << bad;
  }
  EXPECT_EQ(ParseDecimal("1234567890123456789").status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(PairGroupTest, CountsClicksAndRanks) {
  const PairGroup g{"q", "d", {{3, true}, {5, false}, {3, false}}};
  EXPECT_EQ(g.NumClicks(), 1);
  EXPECT_EQ(g.NumDistinctRanks(), 2);
  EXPECT_EQ(g.MaxRank(), 5);
}

TEST(CurveMethodTest, RoundTripsNames) {
  for (const CurveMethod m :
       {CurveMethod::kDirect, CurveMethod::kInterpolated, CurveMethod::kRatio,
        CurveMethod::kEm, CurveMethod::kTrueSim}) {
    EXPECT_EQ(*ParseCurveMethod(CurveMethodName(m)), m);
  }
  EXPECT_FALSE(ParseCurveMethod("cascade").ok());
}

TEST(PropensityCurveTest, NormalizesToFirstRank) {
  const std::vector<double> raw = {0.5, 0.25, 0.125};
  auto curve = PropensityCurve::Normalize(raw);
  ASSERT_TRUE(curve.ok());
  EXPECT_EQ(curve->rank_max(), 3);
  EXPECT_DOUBLE_EQ(curve->value(1), 1.0);
  EXPECT_DOUBLE_EQ(curve->value(2), 0.5);
  EXPECT_DOUBLE_EQ(curve->value(3), 0.25);
}

TEST(PropensityCurveTest, RejectsNonPositiveAndNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  for (const std::vector<double>& bad :
       std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, -0.2}, {1.0, nan},
                                        {inf, 1.0}, {}}) {
    EXPECT_FALSE(PropensityCurve::Normalize(bad).ok());
  }
}

TEST(PropensityCurveTest, ValueAtChecksRange) {
  auto curve = *PropensityCurve::Normalize(std::vector<double>{1.0, 0.5});
  EXPECT_DOUBLE_EQ(*curve.ValueAt(2), 0.5);
  EXPECT_EQ(curve.ValueAt(0).status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(curve.ValueAt(3).status().code(), absl::StatusCode::kOutOfRange);
}

TEST(KnotSpecTest, DefaultSetForFiveHundredRanks) {
  const KnotSpec knots = KnotSpec::Default(500);
  const std::vector<int> expected = {1, 2, 4, 8, 20, 50, 100, 200, 300, 500};
  EXPECT_EQ(std::vector<int>(knots.ranks().begin(), knots.ranks().end()),
            expected);
  EXPECT_EQ(knots.rank_max(), 500);
}

TEST(KnotSpecTest, DefaultSetIsClosedAtSmallerRankMax) {
  const KnotSpec knots = KnotSpec::Default(30);
  const std::vector<int> expected = {1, 2, 4, 8, 20, 30};
  EXPECT_EQ(std::vector<int>(knots.ranks().begin(), knots.ranks().end()),
            expected);
}

TEST(KnotSpecTest, ValidatesKnotLists) {
  EXPECT_TRUE(KnotSpec::Create({1, 10}).ok());
  EXPECT_FALSE(KnotSpec::Create({1}).ok());
  EXPECT_FALSE(KnotSpec::Create({2, 10}).ok());
  EXPECT_FALSE(KnotSpec::Create({1, 5, 5, 10}).ok());
  EXPECT_FALSE(KnotSpec::Create({1, 8, 4}).ok());
}

}  // namespace
}  // namespace pbe
