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

#include "ratio.h"

#include <map>
#include <set>

#include "absl/strings/str_cat.h"

namespace pbe {
namespace {

struct RankTally {
  int impressions = 0;
  int clicks = 0;
};

// Per-rank tallies for the ranks of interest; returns false when either rank
// is missing from the group.
bool TallyPair(const PairGroup& g, int rank_i, int rank_j, RankTally& at_i,
               RankTally& at_j) {
  at_i = {};
  at_j = {};
  for (const Appearance& a : g.appearances) {
    RankTally* t = a.rank == rank_i ? &at_i : a.rank == rank_j ? &at_j : nullptr;
    if (t == nullptr) continue;
    ++t->impressions;
    t->clicks += a.clicked ? 1 : 0;
  }
  return at_i.impressions > 0 && at_j.impressions > 0;
}

}  // namespace

absl::StatusOr<RatioEstimate> EstimateRatio(std::span<const PairGroup> groups,
                                            int rank_i, int rank_j) {
  if (rank_i < 1 || rank_j < 1) {
    return absl::OutOfRangeError("ranks must be >= 1");
  }
  if (rank_i == rank_j) {
    return absl::InvalidArgumentError("the two ranks must differ");
  }
  RatioEstimate out;
  RankTally at_i, at_j;
  for (const PairGroup& g : groups) {
    if (!TallyPair(g, rank_i, rank_j, at_i, at_j)) continue;
    ++out.n_pairs;
    out.clicks_per_impression_i +=
        static_cast<double>(at_i.clicks) / at_i.impressions;
    out.clicks_per_impression_j +=
        static_cast<double>(at_j.clicks) / at_j.impressions;
  }
  if (out.n_pairs == 0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no pair appeared at both rank ", rank_i, " and rank ", rank_j));
  }
  if (out.clicks_per_impression_j == 0.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no clicks at rank ", rank_j, " among ", out.n_pairs,
        " co-occurring pairs; the ratio is undefined"));
  }
  out.ratio = out.clicks_per_impression_i / out.clicks_per_impression_j;
  return out;
}

std::vector<RatioRow> RatioMatrix(std::span<const PairGroup> groups,
                                  std::span<const int> ranks) {
  const std::set<int> chosen(ranks.begin(), ranks.end());
  // Single pass: accumulate every co-occurring rank pair at once.
  std::map<std::pair<int, int>, RatioEstimate> sums;
  std::map<int, RankTally> present;
  for (const PairGroup& g : groups) {
    present.clear();
    for (const Appearance& a : g.appearances) {
      if (!chosen.empty() && chosen.count(a.rank) == 0) continue;
      RankTally& t = present[a.rank];
      ++t.impressions;
      t.clicks += a.clicked ? 1 : 0;
    }
    for (auto i = present.begin(); i != present.end(); ++i) {
      for (auto j = std::next(i); j != present.end(); ++j) {
        RatioEstimate& e = sums[{i->first, j->first}];
        ++e.n_pairs;
        e.clicks_per_impression_i +=
            static_cast<double>(i->second.clicks) / i->second.impressions;
        e.clicks_per_impression_j +=
            static_cast<double>(j->second.clicks) / j->second.impressions;
      }
    }
  }
  std::vector<RatioRow> rows;
  for (auto& [key, e] : sums) {
    if (e.clicks_per_impression_j == 0.0) continue;
    e.ratio = e.clicks_per_impression_i / e.clicks_per_impression_j;
    rows.push_back({key.first, key.second, e});
  }
  return rows;
}

}  // namespace pbe
