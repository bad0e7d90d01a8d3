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

#include "mle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "status_macros.h"

namespace pbe {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxLineSearchHalvings = 60;

// One pair with its distinct ranks and multiplicities.
struct CompiledPair {
  int clicked_rank;
  int begin;  // into the flat term arrays
  int end;
};

class Objective {
 public:
  Objective(std::span<const PairGroup> pairs,
            const LogLogInterpolator& interpolator)
      : interpolator_(interpolator) {
    compiled_.reserve(pairs.size());
    for (const PairGroup& g : pairs) {
      std::map<int, int> counts;
      int clicked_rank = 0;
      for (const Appearance& a : g.appearances) {
        ++counts[a.rank];
        if (a.clicked) clicked_rank = a.rank;
      }
      const int begin = static_cast<int>(ranks_.size());
      for (const auto& [rank, count] : counts) {
        ranks_.push_back(rank);
        log_counts_.push_back(std::log(static_cast<double>(count)));
      }
      compiled_.push_back(
          {clicked_rank, begin, static_cast<int>(ranks_.size())});
    }
  }

  double Value(std::span<const double> theta) const {
    double total = 0.0;
    for (const CompiledPair& p : compiled_) {
      total += theta[p.clicked_rank - 1] - LogSumExp(p, theta);
    }
    return total;
  }

  // Exact objective change for theta -> theta + delta, accurate even when the
  // change is far below the objective's rounding error.
  double Delta(std::span<const double> theta,
               std::span<const double> delta) const {
    double total = 0.0;
    for (const CompiledPair& p : compiled_) {
      const double lse = LogSumExp(p, theta);
      double acc = 0.0;
      for (int k = p.begin; k < p.end; ++k) {
        const int r = ranks_[k] - 1;
        const double share = std::exp(theta[r] + log_counts_[k] - lse);
        acc += share * std::expm1(delta[r]);
      }
      total += delta[p.clicked_rank - 1] - std::log1p(acc);
    }
    return total;
  }

  // Gradient and Hessian with respect to knot values. The Hessian is the
  // negative of a sum of softmax covariance matrices pushed through the
  // interpolation stencils.
  void KnotDerivatives(std::span<const double> theta, Eigen::VectorXd& grad,
                       Eigen::MatrixXd& hess) const {
    const int n = interpolator_.num_knots();
    grad.setZero(n);
    hess.setZero(n, n);
    // At most two knots per rank; terms per pair are few.
    std::vector<std::pair<int, double>> u;
    for (const CompiledPair& p : compiled_) {
      const double lse = LogSumExp(p, theta);
      AddStencil(p.clicked_rank, 1.0, grad);
      u.clear();
      for (int k = p.begin; k < p.end; ++k) {
        const double share = std::exp(theta[ranks_[k] - 1] + log_counts_[k] - lse);
        const auto& s = interpolator_.stencil(ranks_[k]);
        const double w_lo = s.weight_lo;
        const double w_hi = 1.0 - s.weight_lo;
        // -share * e e^T
        hess(s.lo, s.lo) -= share * w_lo * w_lo;
        if (s.hi != s.lo) {
          hess(s.hi, s.hi) -= share * w_hi * w_hi;
          hess(s.lo, s.hi) -= share * w_lo * w_hi;
          hess(s.hi, s.lo) -= share * w_lo * w_hi;
          u.emplace_back(s.hi, share * w_hi);
        }
        u.emplace_back(s.lo, share * w_lo);
      }
      for (const auto& [i, ui] : u) {
        grad(i) -= ui;
        for (const auto& [k, uk] : u) hess(i, k) += ui * uk;
      }
    }
  }

 private:
  double LogSumExp(const CompiledPair& p, std::span<const double> theta) const {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = p.begin; k < p.end; ++k) {
      m = std::max(m, theta[ranks_[k] - 1] + log_counts_[k]);
    }
    double s = 0.0;
    for (int k = p.begin; k < p.end; ++k) {
      s += std::exp(theta[ranks_[k] - 1] + log_counts_[k] - m);
    }
    return m + std::log(s);
  }

  void AddStencil(int rank, double scale, Eigen::VectorXd& v) const {
    const auto& s = interpolator_.stencil(rank);
    v(s.lo) += scale * s.weight_lo;
    if (s.hi != s.lo) v(s.hi) += scale * (1.0 - s.weight_lo);
  }

  const LogLogInterpolator& interpolator_;
  std::vector<CompiledPair> compiled_;
  std::vector<int> ranks_;
  std::vector<double> log_counts_;
};

// Union-find over knots; two knots are joined when some pair touches both.
absl::Status CheckConnected(std::span<const PairGroup> pairs,
                            const LogLogInterpolator& interpolator) {
  const int n = interpolator.num_knots();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> touched(n, false);
  for (const PairGroup& g : pairs) {
    int anchor = -1;
    for (const Appearance& a : g.appearances) {
      const auto& s = interpolator.stencil(a.rank);
      for (const int knot : {s.lo, s.hi}) {
        touched[knot] = true;
        if (anchor < 0) {
          anchor = knot;
        } else {
          parent[find(knot)] = find(anchor);
        }
      }
    }
  }
  std::map<int, std::vector<int>> components;
  for (int k = 0; k < n; ++k) {
    components[touched[k] ? find(k) : n + k].push_back(
        interpolator.knot_ranks()[k]);
  }
  if (components.size() == 1) return absl::OkStatus();

  std::vector<std::string> parts;
  for (const auto& [root, ranks] : components) {
    parts.push_back(absl::StrCat("{", absl::StrJoin(ranks, ","), "}"));
  }
  return absl::FailedPreconditionError(absl::StrCat(
      "propensity ratios are not identifiable: parameter ranks split into ",
      components.size(), " groups that never co-occur in a pair: ",
      absl::StrJoin(parts, " ")));
}

absl::Status ValidatePropensities(std::span<const double> propensities,
                                  std::span<const PairGroup> pairs) {
  for (size_t i = 0; i < propensities.size(); ++i) {
    if (!(propensities[i] > 0.0) || !std::isfinite(propensities[i])) {
      return absl::OutOfRangeError(absl::StrCat(
          "propensity at rank ", i + 1, " must be positive and finite"));
    }
  }
  return ValidateEstimationPairs(pairs, static_cast<int>(propensities.size()));
}

absl::StatusOr<EstimationReport> Optimize(
    std::span<const PairGroup> pairs, const LogLogInterpolator& interpolator,
    const MleConfig& config, CurveMethod method) {
  const Objective objective(pairs, interpolator);
  const int n = interpolator.num_knots();
  // Knot 0 is pinned; the free block is [1, n).
  const int free = n - 1;

  std::vector<double> knots(n, 0.0);
  std::vector<double> theta = interpolator.Expand(knots);
  double value = objective.Value(theta);

  EstimationReport report{*PropensityCurve::Normalize(std::vector<double>(
                              config.rank_max, 1.0)),
                          value,
                          value,
                          0,
                          false,
                          static_cast<int64_t>(pairs.size()),
                          0,
                          {value}};

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  std::vector<double> step_knots(n, 0.0);
  while (true) {
    objective.KnotDerivatives(theta, grad, hess);
    const double grad_norm =
        free > 0 ? grad.tail(free).cwiseAbs().maxCoeff() : 0.0;
    if (grad_norm <= config.gradient_tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= config.max_iterations) break;

    // Solve (-H + mu I) d = g on the free block.
    const Eigen::MatrixXd neg_hess = -hess.bottomRightCorner(free, free);
    const Eigen::VectorXd g = grad.tail(free);
    const double scale = 1.0 + neg_hess.diagonal().cwiseAbs().maxCoeff();
    Eigen::VectorXd direction;
    for (double mu = 0.0;; mu = mu == 0.0 ? 1e-10 * scale : mu * 10.0) {
      Eigen::LLT<Eigen::MatrixXd> llt(
          neg_hess + mu * Eigen::MatrixXd::Identity(free, free));
      if (llt.info() == Eigen::Success) {
        direction = llt.solve(g);
        if (direction.allFinite()) break;
      }
      if (mu > 1e6 * scale) {
        direction = g;  // steepest ascent
        break;
      }
    }

    const double slope = g.dot(direction);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> delta;
    double gain = 0.0;
    for (int halving = 0; halving < kMaxLineSearchHalvings; ++halving, t *= 0.5) {
      step_knots[0] = 0.0;
      for (int k = 0; k < free; ++k) step_knots[k + 1] = t * direction(k);
      delta = interpolator.Expand(step_knots);
      gain = objective.Delta(theta, delta);
      if (std::isfinite(gain) && gain >= kArmijo * t * slope && gain >= 0.0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no ascent left at working precision

    for (int k = 0; k < n; ++k) knots[k] += step_knots[k];
    theta = interpolator.Expand(knots);
    ++report.iterations;
    report.log_likelihood_trace.push_back(report.log_likelihood_trace.back() +
                                          gain);
  }

  report.final_log_likelihood = objective.Value(theta);
  std::vector<double> propensities(theta.size());
  for (size_t r = 0; r < theta.size(); ++r) propensities[r] = std::exp(theta[r]);
  auto curve = PropensityCurve::Normalize(propensities, method);
  if (!curve.ok()) {
    return absl::InternalError(absl::StrCat(
        "fitted propensities left the representable range: ",
        curve.status().message()));
  }
  report.curve = *std::move(curve);
  return report;
}

}  // namespace

absl::StatusOr<LogLogInterpolator> LogLogInterpolator::Create(
    std::vector<int> knot_ranks, int rank_max) {
  if (knot_ranks.empty()) {
    return absl::InvalidArgumentError("at least one knot is required");
  }
  for (size_t i = 0; i < knot_ranks.size(); ++i) {
    if (knot_ranks[i] < 1 || knot_ranks[i] > rank_max) {
      return absl::OutOfRangeError(absl::StrCat(
          "knot rank ", knot_ranks[i], " outside [1, ", rank_max, "]"));
    }
    if (i > 0 && knot_ranks[i] <= knot_ranks[i - 1]) {
      return absl::InvalidArgumentError("knot ranks must be strictly increasing");
    }
  }
  std::vector<Stencil> stencils(rank_max);
  size_t next = 0;  // first knot with rank >= r
  const int last = static_cast<int>(knot_ranks.size()) - 1;
  for (int r = 1; r <= rank_max; ++r) {
    while (next < knot_ranks.size() && knot_ranks[next] < r) ++next;
    Stencil& s = stencils[r - 1];
    if (next == knot_ranks.size()) {
      s = {last, last, 1.0};
    } else if (knot_ranks[next] == r || next == 0) {
      s = {static_cast<int>(next), static_cast<int>(next), 1.0};
    } else {
      const int lo = static_cast<int>(next) - 1;
      const double log_lo = std::log(static_cast<double>(knot_ranks[lo]));
      const double log_hi = std::log(static_cast<double>(knot_ranks[next]));
      const double log_r = std::log(static_cast<double>(r));
      s = {lo, static_cast<int>(next), (log_hi - log_r) / (log_hi - log_lo)};
    }
  }
  return LogLogInterpolator(std::move(knot_ranks), std::move(stencils));
}

std::vector<double> LogLogInterpolator::Expand(
    std::span<const double> knot_values) const {
  std::vector<double> out(stencils_.size());
  for (size_t r = 0; r < stencils_.size(); ++r) {
    const Stencil& s = stencils_[r];
    out[r] = s.lo == s.hi ? knot_values[s.lo]
                          : s.weight_lo * knot_values[s.lo] +
                                (1.0 - s.weight_lo) * knot_values[s.hi];
  }
  return out;
}

std::vector<double> LogLogInterpolator::PullBack(
    std::span<const double> rank_gradient) const {
  std::vector<double> out(knot_ranks_.size(), 0.0);
  for (size_t r = 0; r < stencils_.size(); ++r) {
    const Stencil& s = stencils_[r];
    if (s.lo == s.hi) {
      out[s.lo] += rank_gradient[r];
    } else {
      out[s.lo] += s.weight_lo * rank_gradient[r];
      out[s.hi] += (1.0 - s.weight_lo) * rank_gradient[r];
    }
  }
  return out;
}

absl::Status ValidateEstimationPairs(std::span<const PairGroup> pairs,
                                     int rank_max) {
  for (size_t j = 0; j < pairs.size(); ++j) {
    const PairGroup& g = pairs[j];
    for (const Appearance& a : g.appearances) {
      if (a.rank < 1 || a.rank > rank_max) {
        return absl::OutOfRangeError(absl::StrCat(
            "pair ", j, " (", g.query_id, ", ", g.doc_id, "): rank ", a.rank,
            " outside [1, ", rank_max, "]"));
      }
    }
    if (g.NumClicks() != 1) {
      return absl::FailedPreconditionError(absl::StrCat(
          "pair ", j, " (", g.query_id, ", ", g.doc_id, ") has ",
          g.NumClicks(), " clicks; the likelihood needs exactly one"));
    }
    if (g.NumDistinctRanks() < 2) {
      return absl::FailedPreconditionError(absl::StrCat(
          "pair ", j, " (", g.query_id, ", ", g.doc_id,
          ") appeared at a single rank"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> LogLikelihood(std::span<const double> propensities,
                                     std::span<const PairGroup> pairs) {
  RETURN_IF_ERROR(ValidatePropensities(propensities, pairs));
  double total = 0.0;
  for (const PairGroup& g : pairs) {
    double clicked = 0.0;
    double sum = 0.0;
    for (const Appearance& a : g.appearances) {
      sum += propensities[a.rank - 1];
      if (a.clicked) clicked = propensities[a.rank - 1];
    }
    total += std::log(clicked) - std::log(sum);
  }
  return total;
}

absl::StatusOr<double> LogLikelihood(const PropensityCurve& curve,
                                     std::span<const PairGroup> pairs) {
  return LogLikelihood(curve.values(), pairs);
}

absl::StatusOr<std::vector<double>> LogLikelihoodGradient(
    std::span<const double> propensities, std::span<const PairGroup> pairs) {
  RETURN_IF_ERROR(ValidatePropensities(propensities, pairs));
  std::vector<double> grad(propensities.size(), 0.0);
  for (const PairGroup& g : pairs) {
    double sum = 0.0;
    for (const Appearance& a : g.appearances) sum += propensities[a.rank - 1];
    for (const Appearance& a : g.appearances) {
      if (a.clicked) grad[a.rank - 1] += 1.0;
      grad[a.rank - 1] -= propensities[a.rank - 1] / sum;
    }
  }
  return grad;
}

absl::StatusOr<std::vector<double>> LogLikelihoodGradient(
    const PropensityCurve& curve, std::span<const PairGroup> pairs) {
  return LogLikelihoodGradient(curve.values(), pairs);
}

absl::StatusOr<EstimationReport> FitMle(std::span<const PairGroup> pairs,
                                        const MleConfig& config) {
  if (config.rank_max < 2) {
    return absl::InvalidArgumentError("rank_max must be >= 2");
  }
  if (config.max_iterations < 1) {
    return absl::InvalidArgumentError("max_iterations must be >= 1");
  }
  if (!(config.gradient_tolerance > 0.0)) {
    return absl::InvalidArgumentError("gradient_tolerance must be positive");
  }
  if (pairs.empty()) {
    return absl::FailedPreconditionError("no pairs to estimate from");
  }
  RETURN_IF_ERROR(ValidateEstimationPairs(pairs, config.rank_max));

  std::vector<int> knot_ranks;
  int n_interpolated = 0;
  CurveMethod method;
  if (config.parametrization == Parametrization::kInterpolated) {
    if (config.knots.has_value() && config.knots->rank_max() != config.rank_max) {
      return absl::InvalidArgumentError(absl::StrCat(
          "the last knot (", config.knots->rank_max(),
          ") must equal rank_max (", config.rank_max, ")"));
    }
    const KnotSpec knots =
        config.knots.value_or(KnotSpec::Default(config.rank_max));
    knot_ranks.assign(knots.ranks().begin(), knots.ranks().end());
    n_interpolated = config.rank_max - static_cast<int>(knot_ranks.size());
    method = CurveMethod::kInterpolated;
  } else {
    if (config.knots.has_value()) {
      return absl::InvalidArgumentError(
          "knots only apply to the interpolated parametrization");
    }
    if (config.min_rank_observations < 1) {
      return absl::InvalidArgumentError("min_rank_observations must be >= 1");
    }
    std::vector<int> counts(config.rank_max + 1, 0);
    for (const PairGroup& g : pairs) {
      for (const Appearance& a : g.appearances) ++counts[a.rank];
    }
    for (int r = 1; r <= config.rank_max; ++r) {
      if (counts[r] >= config.min_rank_observations) knot_ranks.push_back(r);
    }
    if (knot_ranks.size() < 2) {
      return absl::FailedPreconditionError(absl::StrCat(
          "fewer than two ranks have at least ", config.min_rank_observations,
          " observations"));
    }
    n_interpolated = config.rank_max - static_cast<int>(knot_ranks.size());
    method = CurveMethod::kDirect;
  }

  ASSIGN_OR_RETURN(const LogLogInterpolator interpolator,
                   LogLogInterpolator::Create(knot_ranks, config.rank_max));
  RETURN_IF_ERROR(CheckConnected(pairs, interpolator));
  ASSIGN_OR_RETURN(EstimationReport report,
                   Optimize(pairs, interpolator, config, method));
  report.n_interpolated_ranks = n_interpolated;
  return report;
}

}  // namespace pbe
