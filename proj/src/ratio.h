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

// Propensity ratio between two ranks from pairs seen at both of them.
//
// For every eligible pair, clicks-per-impression is computed separately at
// each rank; the ratio of the two sums estimates p_i / p_j because each pair's
// relevance contributes to both sums with the same weight.

#ifndef PBE_RATIO_H_
#define PBE_RATIO_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "domain.h"

namespace pbe {

struct RatioEstimate {
  double ratio = 0.0;
  int64_t n_pairs = 0;
  // Summed clicks-per-impression at rank_i and rank_j.
  double clicks_per_impression_i = 0.0;
  double clicks_per_impression_j = 0.0;
};

// Uses raw groups (no click filter). Fails when no group has both ranks or when
// the rank_j sum is zero.
absl::StatusOr<RatioEstimate> EstimateRatio(std::span<const PairGroup> groups,
                                            int rank_i, int rank_j);

struct RatioRow {
  int rank_i = 0;
  int rank_j = 0;
  RatioEstimate estimate;
};

// All rank pairs i < j from `ranks` (every observed rank when empty) that
// yield a defined ratio.
std::vector<RatioRow> RatioMatrix(std::span<const PairGroup> groups,
                                  std::span<const int> ranks);

}  // namespace pbe

#endif  // PBE_RATIO_H_
