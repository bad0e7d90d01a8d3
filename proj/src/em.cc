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

#include "em.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "mle.h"
#include "status_macros.h"

namespace pbe {
namespace {

constexpr double kInitialPropensity = 0.5;
constexpr double kInitialRelevance = 0.5;

// The smoothed M-step is the exact maximizer of the expected complete-data
// log-likelihood plus alpha * ln p(r) at every rank with impressions plus the
// relevance prior, so EM ascends this penalized objective.
double PenalizedObjective(std::span<const PairGroup> groups,
                          std::span<const double> p, std::span<const double> z,
                          std::span<const double> impressions, double alpha,
                          const RelevanceUpdater& updater) {
  double total = PbmLogLikelihood(groups, p, z) + updater.LogPrior(z);
  if (alpha > 0.0) {
    for (size_t r = 0; r < p.size(); ++r) {
      if (impressions[r] > 0.0) total += alpha * std::log(p[r]);
    }
  }
  return total;
}

}  // namespace

void PerPairRelevance::Update(std::span<const PairGroup> groups,
                              std::span<const double> expected_relevant,
                              std::span<double> relevance) const {
  for (size_t j = 0; j < groups.size(); ++j) {
    relevance[j] = std::min(
        1.0, (expected_relevant[j] + smoothing_) /
                 (static_cast<double>(groups[j].appearances.size()) +
                  2.0 * smoothing_));
  }
}

double PerPairRelevance::LogPrior(std::span<const double> relevance) const {
  if (smoothing_ == 0.0) return 0.0;
  double total = 0.0;
  for (const double z : relevance) {
    total += std::log(z) + std::log1p(-z);
  }
  return smoothing_ * total;
}

double PbmLogLikelihood(std::span<const PairGroup> groups,
                        std::span<const double> propensity,
                        std::span<const double> relevance) {
  double total = 0.0;
  for (size_t j = 0; j < groups.size(); ++j) {
    for (const Appearance& a : groups[j].appearances) {
      const double q = propensity[a.rank - 1] * relevance[j];
      total += a.clicked ? std::log(q) : std::log1p(-q);
    }
  }
  return total;
}

absl::StatusOr<EstimationReport> FitEm(std::span<const PairGroup> groups,
                                       const EmConfig& config) {
  if (groups.empty()) {
    return absl::FailedPreconditionError("no groups to fit");
  }
  if (config.max_iterations < 1) {
    return absl::InvalidArgumentError("max_iterations must be >= 1");
  }
  if (!(config.smoothing >= 0.0)) {
    return absl::InvalidArgumentError("smoothing must be non-negative");
  }
  if (!(config.ll_tolerance >= 0.0)) {
    return absl::InvalidArgumentError("ll_tolerance must be non-negative");
  }
  std::vector<double> impressions(config.rank_max, 0.0);
  for (size_t j = 0; j < groups.size(); ++j) {
    if (groups[j].appearances.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("group ", j, " has no appearances"));
    }
    for (const Appearance& a : groups[j].appearances) {
      if (a.rank < 1 || a.rank > config.rank_max) {
        return absl::OutOfRangeError(absl::StrCat(
            "group ", j, ": rank ", a.rank, " outside [1, ", config.rank_max,
            "]"));
      }
      impressions[a.rank - 1] += 1.0;
    }
  }

  const PerPairRelevance default_updater(config.smoothing);
  const RelevanceUpdater& updater = config.relevance_updater != nullptr
                                        ? *config.relevance_updater
                                        : default_updater;

  std::vector<double> p(config.rank_max, kInitialPropensity);
  std::vector<double> z(groups.size(), kInitialRelevance);
  std::vector<double> observed(config.rank_max);
  std::vector<double> relevant(groups.size());

  double ll = PenalizedObjective(groups, p, z, impressions, config.smoothing,
                                 updater);
  const double initial = PbmLogLikelihood(groups, p, z);
  EstimationReport report{*PropensityCurve::Normalize(
                              std::vector<double>(config.rank_max, 1.0)),
                          initial,
                          initial,
                          0,
                          false,
                          static_cast<int64_t>(groups.size()),
                          0,
                          {ll}};

  for (int it = 0; it < config.max_iterations; ++it) {
    std::fill(observed.begin(), observed.end(), 0.0);
    for (size_t j = 0; j < groups.size(); ++j) {
      double rel = 0.0;
      for (const Appearance& a : groups[j].appearances) {
        const double pr = p[a.rank - 1];
        if (a.clicked) {
          observed[a.rank - 1] += 1.0;
          rel += 1.0;
        } else {
          const double no_click = 1.0 - pr * z[j];
          observed[a.rank - 1] += pr * (1.0 - z[j]) / no_click;
          rel += (1.0 - pr) * z[j] / no_click;
        }
      }
      relevant[j] = rel;
    }
    for (int r = 0; r < config.rank_max; ++r) {
      if (impressions[r] > 0.0) {
        p[r] = (observed[r] + config.smoothing) /
               (impressions[r] + config.smoothing);
      }
    }
    updater.Update(groups, relevant, z);

    const double next = PenalizedObjective(groups, p, z, impressions,
                                           config.smoothing, updater);
    ++report.iterations;
    report.log_likelihood_trace.push_back(next);
    const bool small_change =
        std::abs(next - ll) < config.ll_tolerance * std::abs(ll);
    ll = next;
    if (small_change) {
      report.converged = true;
      break;
    }
  }
  report.final_log_likelihood = PbmLogLikelihood(groups, p, z);

  // Log-log fill of ranks without impressions.
  std::vector<int> observed_ranks;
  std::vector<double> log_p;
  for (int r = 1; r <= config.rank_max; ++r) {
    if (impressions[r - 1] > 0.0) {
      observed_ranks.push_back(r);
      log_p.push_back(std::log(p[r - 1]));
    }
  }
  report.n_interpolated_ranks =
      config.rank_max - static_cast<int>(observed_ranks.size());
  ASSIGN_OR_RETURN(const LogLogInterpolator fill,
                   LogLogInterpolator::Create(observed_ranks, config.rank_max));
  std::vector<double> values = fill.Expand(log_p);
  for (double& v : values) v = std::exp(v);
  ASSIGN_OR_RETURN(report.curve,
                   PropensityCurve::Normalize(values, CurveMethod::kEm));
  return report;
}

}  // namespace pbe
