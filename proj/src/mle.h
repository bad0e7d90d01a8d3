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

// Maximum-likelihood propensity estimation from query-document pairs seen at
// several ranks with exactly one click.
//
// With relevance eliminated, each pair j contributes
//
//   ln p(clicked rank) - ln sum_k p(r_jk)
//
// to the objective. In log-propensity coordinates theta = ln p this is a
// linear term minus a log-sum-exp, hence concave, and invariant under adding a
// constant to every theta. The fit pins theta at the first parameter rank to
// zero and runs damped Newton with a backtracking line search.
//
// Two parametrizations share the same machinery: a piecewise linear map in
// (ln rank, ln p) from a set of parameter ranks ("knots") to every rank.
//   - interpolated: user knots, 1 and rank_max included;
//   - direct: one knot per observed rank; unobserved ranks are interpolated
//     between neighbours and held constant beyond the outermost ones.

#ifndef PBE_MLE_H_
#define PBE_MLE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "domain.h"

namespace pbe {

enum class Parametrization { kDirect, kInterpolated };

struct MleConfig {
  Parametrization parametrization = Parametrization::kInterpolated;
  // Interpolated mode only; defaults to KnotSpec::Default(rank_max).
  std::optional<KnotSpec> knots;
  int rank_max = kDefaultRankMax;
  int max_iterations = 1000;
  // Max-norm of the gradient over the free log-propensities.
  double gradient_tolerance = 1e-8;
  // Direct mode: ranks with fewer appearances are interpolated instead of
  // getting their own parameter.
  int min_rank_observations = 1;
};

// Piecewise linear map in (ln rank, ln p) from knot values to every rank in
// [1, rank_max]; constant below the first and above the last knot.
class LogLogInterpolator {
 public:
  // theta(rank) = weight_lo * knot[lo] + (1 - weight_lo) * knot[hi].
  struct Stencil {
    int lo = 0;
    int hi = 0;
    double weight_lo = 1.0;
  };

  static absl::StatusOr<LogLogInterpolator> Create(std::vector<int> knot_ranks,
                                                   int rank_max);

  int rank_max() const { return static_cast<int>(stencils_.size()); }
  int num_knots() const { return static_cast<int>(knot_ranks_.size()); }
  std::span<const int> knot_ranks() const { return knot_ranks_; }
  const Stencil& stencil(int rank) const { return stencils_[rank - 1]; }

  // Per-rank values (size rank_max) from knot values.
  std::vector<double> Expand(std::span<const double> knot_values) const;
  // Transposed map: per-rank gradient to knot gradient.
  std::vector<double> PullBack(std::span<const double> rank_gradient) const;

 private:
  LogLogInterpolator(std::vector<int> knot_ranks, std::vector<Stencil> stencils)
      : knot_ranks_(std::move(knot_ranks)), stencils_(std::move(stencils)) {}

  std::vector<int> knot_ranks_;
  std::vector<Stencil> stencils_;
};

// Every pair must have exactly one clicked appearance, at least two distinct
// ranks, and all ranks in [1, rank_max].
absl::Status ValidateEstimationPairs(std::span<const PairGroup> pairs,
                                     int rank_max);

// `propensities[r - 1]` is the (not necessarily normalized) propensity at rank
// r; all entries must be positive.
absl::StatusOr<double> LogLikelihood(std::span<const double> propensities,
                                     std::span<const PairGroup> pairs);
absl::StatusOr<double> LogLikelihood(const PropensityCurve& curve,
                                     std::span<const PairGroup> pairs);

// Gradient with respect to ln p at every rank; sums to zero.
absl::StatusOr<std::vector<double>> LogLikelihoodGradient(
    std::span<const double> propensities, std::span<const PairGroup> pairs);
absl::StatusOr<std::vector<double>> LogLikelihoodGradient(
    const PropensityCurve& curve, std::span<const PairGroup> pairs);

// Fails on empty input, invalid pairs, or when the rank co-occurrence graph
// over parameters is disconnected (the error lists the components). Not
// converging within max_iterations is reported through `converged`.
absl::StatusOr<EstimationReport> FitMle(std::span<const PairGroup> pairs,
                                        const MleConfig& config);

}  // namespace pbe

#endif  // PBE_MLE_H_
