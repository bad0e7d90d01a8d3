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

// Inverse-propensity weighting and bias-controlled offline evaluation.
//
// Weights and the unbiased loss turn a propensity curve into training
// corrections. Evaluation sidesteps position bias in the test data by
// comparing scorers only among items shown at one fixed rank, with bootstrap
// error bars.

#ifndef PBE_IPW_EVAL_H_
#define PBE_IPW_EVAL_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "domain.h"

namespace pbe {

absl::StatusOr<double> IpwWeight(const PropensityCurve& curve, int rank);

struct ObservedLoss {
  int rank = 1;
  double loss = 0.0;
};

// Sum of loss / propensity(rank) over observed items.
absl::StatusOr<double> UnbiasedLoss(std::span<const ObservedLoss> observed,
                                    const PropensityCurve& curve);

// Sum over queries and clicked ranks of 1 / log2(rank + 1).
absl::StatusOr<double> Dcg(std::span<const std::vector<int>> clicked_ranks);

// Same, with each click weighted by 1 / propensity(rank).
absl::StatusOr<double> IpwDcg(std::span<const std::vector<int>> clicked_ranks,
                              const PropensityCurve& curve);

struct ScoredImpression {
  std::string query_id;
  std::string doc_id;
  int rank = 1;
  bool clicked = false;
  std::map<std::string, double> model_scores;
};

absl::StatusOr<std::vector<ScoredImpression>> ParseScoredImpressions(
    std::istream& input);

std::vector<std::string> ModelNames(std::span<const ScoredImpression> data);

// Mann-Whitney AUC; tied scores count 1/2. Fails on single-class input.
absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const bool> labels);

// AUC of `model` separating clicked from non-clicked impressions at exactly
// `fixed_rank`.
absl::StatusOr<double> FixedRankAuc(std::span<const ScoredImpression> data,
                                    int fixed_rank, absl::string_view model);

struct EvalRow {
  int rank = 0;
  std::string model_a;
  std::string model_b;
  double mean_improvement = 0.0;  // AUC(model_a) - AUC(model_b)
  double stddev = 0.0;
  // Resamples thrown away because they held a single class.
  int64_t n_redrawn = 0;
};

struct EvalReport {
  int n_bootstrap = 0;
  uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

inline std::vector<int> DefaultEvalRanks() { return {1, 2, 4, 8, 16, 32}; }

struct BootstrapOptions {
  int n_bootstrap = 1000;
  uint64_t seed = 0;
  int threads = 1;
};

// For each fixed rank, resamples that rank's impressions with replacement and
// records AUC(model_a) - AUC(model_b). Resample b of rank r uses the stream
// (seed, r, b), so the report is independent of `threads`.
absl::StatusOr<EvalReport> BootstrapCompare(
    std::span<const ScoredImpression> data, std::span<const int> fixed_ranks,
    absl::string_view model_a, absl::string_view model_b,
    const BootstrapOptions& options);

}  // namespace pbe

#endif  // PBE_IPW_EVAL_H_
