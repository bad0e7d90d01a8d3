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

// Synthetic click logs with a known propensity curve.
//
// Each candidate query-document pair gets a mean rank uniform on
// [1, rank_max], a latent relevance drawn around a power-law click-through
// rate, and two distinct ranks drawn from N(mean, (mean / divisor)^2). Clicks
// follow the position-based model: P(click at r) = relevance * propensity(r).
// Candidate i always uses the random stream derived from (seed, i), so the
// output does not depend on the thread count.

#ifndef PBE_SIMULATOR_H_
#define PBE_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "domain.h"
#include "ipw_eval.h"
#include "random.h"

namespace pbe {

struct RelevanceModel {
  double base_ctr_scale = 0.3;
  double base_ctr_exponent = 0.4;
  double noise_sigma = 0.3;
};

struct SimConfig {
  int rank_max = kDefaultRankMax;
  int64_t n_pairs_target = 40000;
  double rank_spread_divisor = 5.0;
  RelevanceModel relevance;
  uint64_t seed = 0;
  int threads = 1;
};

absl::Status ValidateSimConfig(const SimConfig& config);

// min(1 / ln(rank), 1). Rank 1 maps to 1.
absl::StatusOr<double> TruePropensity(int rank);

// Normalized true curve over [1, rank_max].
PropensityCurve TrueCurve(int rank_max);

// clamp(scale * rank_mean^-exponent * exp(sigma * g) / propensity(rank_mean),
// 0, 1) with g standard normal. Consumes two draws.
double SampleRelevance(const RelevanceModel& model, int rank_mean,
                       SplitMix64& rng);

struct SimCandidate {
  int64_t index = 0;
  int rank_mean = 1;
  double relevance = 0.0;
  std::array<Appearance, 2> appearances;
  // False when 100 redraws failed to produce a second, different rank.
  bool distinct_ranks = false;
};

SimCandidate SimulateCandidate(const SimConfig& config, int64_t index);

// Whether a candidate survives the estimation selection: two distinct ranks
// and exactly one click.
bool IsRetained(const SimCandidate& candidate);

PairGroup CandidateGroup(const SimCandidate& candidate);

struct SimResult {
  std::vector<PairGroup> pairs;
  PropensityCurve true_curve;
  // Candidates drawn to reach the target, i.e. index of the last retained
  // candidate plus one.
  int64_t candidates_drawn = 0;
};

// Draws candidates 0, 1, 2, ... until n_pairs_target are retained.
absl::StatusOr<SimResult> SimulatePairs(const SimConfig& config);

// The first `n_candidates` candidates as a raw impression log, two records per
// candidate, so simulated data can go through extraction.
absl::StatusOr<std::vector<ImpressionRecord>> SimulateImpressions(
    const SimConfig& config, int64_t n_candidates);

// The first `n_candidates` candidates with distinct ranks, no click filter.
absl::StatusOr<std::vector<PairGroup>> SimulateRawGroups(
    const SimConfig& config, int64_t n_candidates);

// Groups seen exactly once at each of two fixed ranks, no click filter.
absl::StatusOr<std::vector<PairGroup>> SimulateFixedRankGroups(
    const SimConfig& config, int rank_a, int rank_b, int64_t n_groups);

// A fixed-rank evaluation set with two scorers per impression:
//   "propensity_aware" - inverse-propensity-weighted click rate from history;
//   "propensity_blind" - raw click rate from the same history.
// Each rank in [1, max_rank] gets `n_per_rank` impressions.
absl::StatusOr<std::vector<ScoredImpression>> SimulateScoredImpressions(
    const SimConfig& config, int max_rank, int64_t n_per_rank);

std::string SimQueryId(int64_t index);
std::string SimDocId(int64_t index);

}  // namespace pbe

#endif  // PBE_SIMULATOR_H_
