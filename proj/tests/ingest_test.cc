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

#include "ingest.h"

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace pbe {
namespace {

ImpressionRecord Record(const std::string& q, const std::string& d, int rank,
                        bool clicked) {
  ImpressionRecord r;
  r.query_id = q;
  r.doc_id = d;
  r.rank = rank;
  r.clicked = clicked;
  r.price = *ParseDecimal("10.00");
  return r;
}

TEST(ParseImpressionLineTest, MapsAllFields) {
  auto r = ParseImpressionLine(
      R"({"query_id":"q1","doc_id":"d1","rank":3,"clicked":true,"day":7,)"
      R"("is_auction":false,"platform":"web","sort_type":"best_match"})",
      500);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->query_id, "q1");
  EXPECT_EQ(r->doc_id, "d1");
  EXPECT_EQ(r->rank, 3);
  EXPECT_TRUE(r->clicked);
  EXPECT_EQ(r->day, 7);
  EXPECT_FALSE(r->price.has_value());
  EXPECT_FALSE(r->is_auction);
  EXPECT_EQ(r->platform, Platform::kWeb);
  EXPECT_EQ(r->sort_type, "best_match");
}

TEST(ParseImpressionLineTest, AppliesDefaultsForOptionalFields) {
  auto r = ParseImpressionLine(
      R"({"query_id":"q","doc_id":"d","rank":1,"clicked":0})", 500);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_FALSE(r->clicked);
  EXPECT_EQ(r->day, 0);
  EXPECT_EQ(r->platform, Platform::kWeb);
  EXPECT_EQ(r->sort_type, "");
}

TEST(ParseImpressionLineTest, PricesAreExactDecimals) {
  auto a = ParseImpressionLine(
      R"({"query_id":"q","doc_id":"d","rank":1,"clicked":false,"price":"19.90"})",
      500);
  auto b = ParseImpressionLine(
      R"({"query_id":"q","doc_id":"d","rank":2,"clicked":false,"price":19.9})",
      500);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->price, b->price);
}

TEST(ParseImpressionLineTest, RejectsRanksOutsideRange) {
  EXPECT_EQ(ParseImpressionLine(
                R"({"query_id":"q","doc_id":"d","rank":501,"clicked":false})",
                500)
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(ParseImpressionLine(
                R"({"query_id":"q","doc_id":"d","rank":0,"clicked":false})",
                500)
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
}

TEST(ParseImpressionLineTest, RejectsMissingOrMistypedFields) {
  for (const char* bad : {
           R"({"doc_id":"d","rank":1,"clicked":false})",
           R"({"query_id":"q","doc_id":"d","clicked":false})",
           R"({"query_id":"q","doc_id":"d","rank":1})",
           R"({"query_id":"q","doc_id":"d","rank":"1","clicked":false})",
           R"({"query_id":"q","doc_id":"d","rank":1,"clicked":2})",
           R"({"query_id":"q","doc_id":"d","rank":1,"clicked":true,"platform":"tv"})",
           R"({"query_id":"q","doc_id":"d","rank":1.5,"clicked":true})",
           R"([1,2,3])",
           R"({"query_id":)",
       }) {
    EXPECT_FALSE(ParseImpressionLine(bad, 500).ok()) << bad;
  }
}

TEST(ParseImpressionLogTest, ReportsLineNumbers) {
  std::istringstream in(
      "{\"query_id\":\"q\",\"doc_id\":\"d\",\"rank\":1,\"clicked\":true}\n"
      "\n"
      "{\"query_id\":\"q\",\"doc_id\":\"d\",\"rank\":900,\"clicked\":true}\n");
  auto records = ParseImpressionLog(in, 500);
  ASSERT_FALSE(records.ok());
  EXPECT_NE(records.status().message().find("line 3"), std::string::npos)
      << records.status();
}

TEST(ParseImpressionLogTest, EmptyInputGivesNoRecords) {
  std::istringstream in("");
  auto records = ParseImpressionLog(in, 500);
  ASSERT_TRUE(records.ok());
  EXPECT_TRUE(records->empty());
}

TEST(GroupPairsTest, GroupsByQueryDocAndDay) {
  std::vector<ImpressionRecord> records = {
      Record("q1", "d1", 2, true), Record("q1", "d1", 5, false),
      Record("q1", "d2", 1, false), Record("q2", "d1", 3, true)};
  records.push_back(Record("q1", "d1", 7, false));
  records.back().day = 1;
  ExtractionSummary summary;
  const std::vector<PairGroup> groups =
      GroupPairs(records, ExtractionConfig{}, &summary);
  ASSERT_EQ(groups.size(), 4u);
  // Sorted by (query, doc, day); appearances keep input order.
  EXPECT_EQ(groups[0].doc_id, "d1");
  EXPECT_EQ(groups[0].appearances,
            (std::vector<Appearance>{{2, true}, {5, false}}));
  EXPECT_EQ(groups[1].appearances, (std::vector<Appearance>{{7, false}}));
  EXPECT_EQ(groups[2].doc_id, "d2");
  EXPECT_EQ(groups[3].query_id, "q2");
  EXPECT_EQ(summary.records_seen, 5);
  EXPECT_EQ(summary.groups_seen, 4);
}

TEST(GroupPairsTest, CrossDayGroupingWhenAllowed) {
  std::vector<ImpressionRecord> records = {Record("q", "d", 2, true),
                                           Record("q", "d", 5, false)};
  records[1].day = 3;
  ExtractionConfig config;
  EXPECT_EQ(GroupPairs(records, config).size(), 2u);
  config.require_same_day = false;
  EXPECT_EQ(GroupPairs(records, config).size(), 1u);
}

TEST(GroupPairsTest, DropsAuctionGroups) {
  std::vector<ImpressionRecord> records = {Record("q", "d", 2, true),
                                           Record("q", "d", 5, false)};
  records[1].is_auction = true;
  ExtractionSummary summary;
  EXPECT_TRUE(GroupPairs(records, ExtractionConfig{}, &summary).empty());
  EXPECT_EQ(summary.groups_dropped_auction, 1);
  ExtractionConfig keep;
  keep.exclude_auctions = false;
  EXPECT_EQ(GroupPairs(records, keep).size(), 1u);
}

TEST(GroupPairsTest, DropsGroupsWithChangedOrMissingPrice) {
  std::vector<ImpressionRecord> changed = {Record("q", "d", 2, true),
                                           Record("q", "d", 5, false)};
  changed[1].price = *ParseDecimal("10.01");
  std::vector<ImpressionRecord> missing = changed;
  missing[1].price.reset();
  std::vector<ImpressionRecord> same = changed;
  same[1].price = *ParseDecimal("10");

  ExtractionSummary summary;
  EXPECT_TRUE(GroupPairs(changed, ExtractionConfig{}, &summary).empty());
  EXPECT_TRUE(GroupPairs(missing, ExtractionConfig{}, &summary).empty());
  EXPECT_EQ(summary.groups_dropped_price, 2);
  EXPECT_EQ(GroupPairs(same, ExtractionConfig{}).size(), 1u);

  ExtractionConfig ignore;
  ignore.require_same_price = false;
  EXPECT_EQ(GroupPairs(changed, ignore).size(), 1u);
  EXPECT_EQ(GroupPairs(missing, ignore).size(), 1u);
}

TEST(GroupPairsTest, PlatformAndSortTypeFiltersDropRecords) {
  std::vector<ImpressionRecord> records = {
      Record("q", "d", 2, true), Record("q", "d", 5, false),
      Record("q", "e", 1, true)};
  records[1].platform = Platform::kMobile;
  records[2].sort_type = "price_low";

  ExtractionConfig config;
  config.platform_filter = Platform::kWeb;
  ExtractionSummary summary;
  const std::vector<PairGroup> groups = GroupPairs(records, config, &summary);
  EXPECT_EQ(summary.records_dropped_platform, 1);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].appearances.size(), 1u);

  config.sort_type_filter = "price_low";
  summary = {};
  const std::vector<PairGroup> sorted = GroupPairs(records, config, &summary);
  EXPECT_EQ(summary.records_dropped_sort_type, 1);
  ASSERT_EQ(sorted.size(), 1u);
  EXPECT_EQ(sorted[0].doc_id, "e");
}

TEST(SelectionTest, StrictModeKeepsTwoRanksOneClick) {
  const auto mode = SelectionMode::kExactlyTwoRanksOneClick;
  EXPECT_TRUE(SatisfiesSelection({"q", "d", {{2, true}, {5, false}}}, mode));
  EXPECT_FALSE(SatisfiesSelection({"q", "d", {{2, false}, {5, false}}}, mode));
  EXPECT_FALSE(SatisfiesSelection({"q", "d", {{4, true}, {4, false}}}, mode));
  EXPECT_FALSE(SatisfiesSelection({"q", "d", {{2, true}, {5, true}}}, mode));
  EXPECT_FALSE(SatisfiesSelection(
      {"q", "d", {{2, true}, {5, false}, {6, false}}}, mode));
}

TEST(SelectionTest, RelaxedModeKeepsMultiRankClickedGroups) {
  const auto mode = SelectionMode::kAtLeastTwoRanksOnePlusClicks;
  EXPECT_TRUE(SatisfiesSelection(
      {"q", "d", {{2, true}, {5, true}, {6, false}}}, mode));
  EXPECT_FALSE(SatisfiesSelection({"q", "d", {{2, false}, {5, false}}}, mode));
  EXPECT_FALSE(SatisfiesSelection({"q", "d", {{4, true}, {4, false}}}, mode));
}

TEST(SelectionTest, SummaryCountsDroppedAndRetained) {
  const std::vector<PairGroup> groups = {
      {"q", "a", {{2, true}, {5, false}}},
      {"q", "b", {{2, false}, {5, false}}},
      {"q", "c", {{4, true}, {4, false}}}};
  ExtractionSummary summary;
  const std::vector<PairGroup> kept =
      SelectEstimationPairs(groups, ExtractionConfig{}, &summary);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].doc_id, "a");
  EXPECT_EQ(summary.groups_dropped_selection, 2);
  EXPECT_EQ(summary.groups_retained, 1);
}

}  // namespace
}  // namespace pbe
