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

// Position-based click model fitted by expectation maximization, used as a
// baseline for the likelihood estimator.
//
// P(click) = p(rank) * z(pair). The E-step computes, for every non-clicked
// impression, the posterior of "observed but not relevant" and "relevant but
// not observed"; clicked impressions are both observed and relevant. The
// M-step sets
//
//   p(r) = (expected observations at r + alpha) / (impressions at r + alpha)
//
// and hands expected relevant events per pair to a RelevanceUpdater (by
// default z = (expected relevant events + alpha) / (impressions + 2 alpha)).

#ifndef PBE_EM_H_
#define PBE_EM_H_

#include <memory>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "domain.h"

namespace pbe {

// Strategy for the relevance half of the M-step.
class RelevanceUpdater {
 public:
  virtual ~RelevanceUpdater() = default;

  // `expected_relevant[j]` is the E-step count for groups[j]; writes the new
  // relevance of each group into `relevance`.
  virtual void Update(std::span<const PairGroup> groups,
                      std::span<const double> expected_relevant,
                      std::span<double> relevance) const = 0;

  // Log-prior whose MAP update Update() computes; EM ascends
  // PbmLogLikelihood + propensity prior + this.
  virtual double LogPrior(std::span<const double> relevance) const {
    (void)relevance;
    return 0.0;
  }
};

// Add-alpha smoothed per-pair rate, the MAP estimate under a symmetric
// Beta(alpha + 1, alpha + 1) prior. With only a couple of impressions per pair
// the unsmoothed rate collapses to 0 or 1 and leaves propensities unidentified.
class PerPairRelevance : public RelevanceUpdater {
 public:
  explicit PerPairRelevance(double smoothing = 0.0) : smoothing_(smoothing) {}

  void Update(std::span<const PairGroup> groups,
              std::span<const double> expected_relevant,
              std::span<double> relevance) const override;
  double LogPrior(std::span<const double> relevance) const override;

 private:
  double smoothing_;
};

struct EmConfig {
  int max_iterations = 200;
  // Stop when |delta LL| < ll_tolerance * |LL|.
  double ll_tolerance = 1e-7;
  // Add-alpha smoothing of the per-rank observation aggregates and of the
  // default per-pair relevance.
  double smoothing = 1.0;
  int rank_max = kDefaultRankMax;
  // Null selects PerPairRelevance.
  std::shared_ptr<const RelevanceUpdater> relevance_updater;
};

// Observed-data log-likelihood of the position-based model:
// sum over impressions of ln(p z) if clicked, ln(1 - p z) otherwise.
// `propensity[r - 1]` and `relevance[j]` index ranks and groups.
double PbmLogLikelihood(std::span<const PairGroup> groups,
                        std::span<const double> propensity,
                        std::span<const double> relevance);

// Takes groups before click/rank selection. The report's trace holds the
// penalized objective PbmLogLikelihood + smoothing * sum of ln p(r) over ranks
// with impressions + the updater's LogPrior, which EM never decreases; initial_log_likelihood and
// final_log_likelihood are unpenalized. Unobserved ranks are filled by
// log-log interpolation between observed neighbours.
absl::StatusOr<EstimationReport> FitEm(std::span<const PairGroup> groups,
                                       const EmConfig& config);

}  // namespace pbe

#endif  // PBE_EM_H_
