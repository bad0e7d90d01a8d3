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

// Impression log parsing and extraction of query-document pairs that
// appeared at several ranks.
//
// The pipeline is: ParseImpressionLog -> GroupPairs -> SelectEstimationPairs.
// Grouping applies the relevance-stability filters (same day, unchanged price,
// no auctions, optional platform / sort type). Selection keeps the groups the
// likelihood estimator can use.

#ifndef PBE_INGEST_H_
#define PBE_INGEST_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "domain.h"

namespace pbe {

enum class SelectionMode {
  // Exactly two appearances at two distinct ranks, exactly one clicked.
  kExactlyTwoRanksOneClick,
  // At least two distinct ranks and at least one click.
  kAtLeastTwoRanksOnePlusClicks,
};

struct ExtractionConfig {
  bool require_same_day = true;
  bool require_same_price = true;
  bool exclude_auctions = true;
  std::optional<Platform> platform_filter;
  std::optional<std::string> sort_type_filter;
  SelectionMode selection_mode = SelectionMode::kExactlyTwoRanksOneClick;
};

struct ExtractionSummary {
  int64_t records_seen = 0;
  int64_t records_dropped_platform = 0;
  int64_t records_dropped_sort_type = 0;
  int64_t groups_seen = 0;
  int64_t groups_dropped_auction = 0;
  int64_t groups_dropped_price = 0;
  int64_t groups_dropped_selection = 0;
  int64_t groups_retained = 0;

  std::string ToString() const;
};

// Parses one JSON object. Required fields: query_id, doc_id, rank, clicked.
// Optional: day (0), price (absent), is_auction (false), platform ("web"),
// sort_type (""). Ranks outside [1, rank_max] are rejected.
absl::StatusOr<ImpressionRecord> ParseImpressionLine(absl::string_view line,
                                                     int rank_max);

// One record per non-blank line, in input order. Errors carry the 1-based
// line number.
absl::StatusOr<std::vector<ImpressionRecord>> ParseImpressionLog(
    std::istream& input, int rank_max = kDefaultRankMax);

// Output is sorted by (query_id, doc_id[, day]); appearances keep input order.
std::vector<PairGroup> GroupPairs(std::span<const ImpressionRecord> records,
                                  const ExtractionConfig& config,
                                  ExtractionSummary* summary = nullptr);

bool SatisfiesSelection(const PairGroup& group, SelectionMode mode);

// Pure filter; the output is a subsequence of `groups`.
std::vector<PairGroup> SelectEstimationPairs(std::span<const PairGroup> groups,
                                             const ExtractionConfig& config,
                                             ExtractionSummary* summary = nullptr);

}  // namespace pbe

#endif  // PBE_INGEST_H_
