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

#include "simulator.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "status_macros.h"

namespace pbe {
namespace {

constexpr int kMaxRankRedraws = 100;
constexpr int64_t kCandidateBlock = 4096;
// History length behind each simulated scorer.
constexpr int kScoreHistoryImpressions = 100;
constexpr int kScoreHistoryRankMax = 50;

double Propensity(int rank) {
  return rank <= 2 ? 1.0 : std::min(1.0 / std::log(static_cast<double>(rank)), 1.0);
}

int DrawRank(SplitMix64& rng, int rank_mean, double divisor, int rank_max) {
  const double mean = rank_mean;
  const double draw = mean + (mean / divisor) * StandardNormal(rng);
  const double clamped = std::clamp(std::round(draw), 1.0,
                                    static_cast<double>(rank_max));
  return static_cast<int>(clamped);
}

// Fills out[i] = fn(begin + i) for i in [0, out.size()) on `threads` workers.
template <typename T, typename Fn>
void ParallelFill(std::vector<T>& out, int64_t begin, int threads, Fn fn) {
  const int64_t n = static_cast<int64_t>(out.size());
  const int64_t workers = std::clamp<int64_t>(threads, 1, std::max<int64_t>(n, 1));
  if (workers == 1) {
    for (int64_t i = 0; i < n; ++i) out[i] = fn(begin + i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int64_t i = w; i < n; i += workers) out[i] = fn(begin + i);
    });
  }
}

}  // namespace

absl::Status ValidateSimConfig(const SimConfig& config) {
  if (config.rank_max < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("rank_max must be >= 2, got ", config.rank_max));
  }
  if (config.n_pairs_target < 0) {
    return absl::InvalidArgumentError("n_pairs_target must be non-negative");
  }
  if (!(config.rank_spread_divisor > 0.0)) {
    return absl::InvalidArgumentError("rank_spread_divisor must be positive");
  }
  if (!(config.relevance.base_ctr_scale > 0.0) ||
      !(config.relevance.noise_sigma >= 0.0) ||
      !std::isfinite(config.relevance.base_ctr_exponent)) {
    return absl::InvalidArgumentError("invalid relevance model parameters");
  }
  if (config.threads < 1) {
    return absl::InvalidArgumentError("threads must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> TruePropensity(int rank) {
  if (rank < 1) {
    return absl::OutOfRangeError(absl::StrCat("rank must be >= 1, got ", rank));
  }
  return Propensity(rank);
}

PropensityCurve TrueCurve(int rank_max) {
  std::vector<double> values(rank_max);
  for (int r = 1; r <= rank_max; ++r) values[r - 1] = Propensity(r);
  return *PropensityCurve::Normalize(values, CurveMethod::kTrueSim);
}

double SampleRelevance(const RelevanceModel& model, int rank_mean,
                       SplitMix64& rng) {
  const double g = StandardNormal(rng);
  const double ctr = model.base_ctr_scale *
                     std::pow(static_cast<double>(rank_mean),
                              -model.base_ctr_exponent) *
                     std::exp(model.noise_sigma * g);
  return std::clamp(ctr / Propensity(rank_mean), 0.0, 1.0);
}

SimCandidate SimulateCandidate(const SimConfig& config, int64_t index) {
  SplitMix64 rng(DeriveStreamSeed(config.seed, StreamDomain::kSimCandidate,
                                  static_cast<uint64_t>(index)));
  SimCandidate c;
  c.index = index;
  c.rank_mean = static_cast<int>(UniformInt(rng, 1, config.rank_max));
  c.relevance = SampleRelevance(config.relevance, c.rank_mean, rng);

  const int first = DrawRank(rng, c.rank_mean, config.rank_spread_divisor,
                             config.rank_max);
  int second = first;
  for (int attempt = 0; attempt < kMaxRankRedraws && second == first; ++attempt) {
    second = DrawRank(rng, c.rank_mean, config.rank_spread_divisor,
                      config.rank_max);
  }
  c.distinct_ranks = first != second;
  c.appearances[0] = {first,
                      Bernoulli(rng, c.relevance * Propensity(first))};
  c.appearances[1] = {second,
                      Bernoulli(rng, c.relevance * Propensity(second))};
  return c;
}

bool IsRetained(const SimCandidate& candidate) {
  return candidate.distinct_ranks &&
         (candidate.appearances[0].clicked != candidate.appearances[1].clicked);
}

std::string SimQueryId(int64_t index) {
  return absl::StrFormat("q%010d", index);
}

std::string SimDocId(int64_t index) { return absl::StrFormat("d%010d", index); }

PairGroup CandidateGroup(const SimCandidate& candidate) {
  return PairGroup{SimQueryId(candidate.index), SimDocId(candidate.index),
                   {candidate.appearances.begin(), candidate.appearances.end()}};
}

absl::StatusOr<SimResult> SimulatePairs(const SimConfig& config) {
  RETURN_IF_ERROR(ValidateSimConfig(config));
  SimResult result{{}, TrueCurve(config.rank_max), 0};
  result.pairs.reserve(config.n_pairs_target);

  const int64_t block = kCandidateBlock * config.threads;
  std::vector<SimCandidate> batch(block);
  int64_t next = 0;
  while (static_cast<int64_t>(result.pairs.size()) < config.n_pairs_target) {
    ParallelFill(batch, next, config.threads, [&](int64_t index) {
      return SimulateCandidate(config, index);
    });
    for (const SimCandidate& c : batch) {
      if (!IsRetained(c)) continue;
      result.pairs.push_back(CandidateGroup(c));
      result.candidates_drawn = c.index + 1;
      if (static_cast<int64_t>(result.pairs.size()) == config.n_pairs_target) {
        break;
      }
    }
    next += block;
  }
  return result;
}

absl::StatusOr<std::vector<ImpressionRecord>> SimulateImpressions(
    const SimConfig& config, int64_t n_candidates) {
  RETURN_IF_ERROR(ValidateSimConfig(config));
  std::vector<SimCandidate> candidates(std::max<int64_t>(n_candidates, 0));
  ParallelFill(candidates, 0, config.threads, [&](int64_t index) {
    return SimulateCandidate(config, index);
  });
  std::vector<ImpressionRecord> records;
  records.reserve(2 * candidates.size());
  for (const SimCandidate& c : candidates) {
    for (const Appearance& a : c.appearances) {
      ImpressionRecord r;
      r.query_id = SimQueryId(c.index);
      r.doc_id = SimDocId(c.index);
      r.rank = a.rank;
      r.clicked = a.clicked;
      r.day = 0;
      r.price = Decimal{100, 0};
      r.is_auction = false;
      r.platform = Platform::kWeb;
      r.sort_type = "best_match";
      records.push_back(std::move(r));
    }
  }
  return records;
}

absl::StatusOr<std::vector<PairGroup>> SimulateRawGroups(
    const SimConfig& config, int64_t n_candidates) {
  RETURN_IF_ERROR(ValidateSimConfig(config));
  std::vector<SimCandidate> candidates(std::max<int64_t>(n_candidates, 0));
  ParallelFill(candidates, 0, config.threads, [&](int64_t index) {
    return SimulateCandidate(config, index);
  });
  std::vector<PairGroup> groups;
  groups.reserve(candidates.size());
  for (const SimCandidate& c : candidates) {
    if (c.distinct_ranks) groups.push_back(CandidateGroup(c));
  }
  return groups;
}

absl::StatusOr<std::vector<PairGroup>> SimulateFixedRankGroups(
    const SimConfig& config, int rank_a, int rank_b, int64_t n_groups) {
  RETURN_IF_ERROR(ValidateSimConfig(config));
  if (rank_a < 1 || rank_b < 1 || rank_a > config.rank_max ||
      rank_b > config.rank_max || rank_a == rank_b) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fixed ranks must be distinct and in [1, ", config.rank_max, "]"));
  }
  std::vector<PairGroup> groups(std::max<int64_t>(n_groups, 0));
  ParallelFill(groups, 0, config.threads, [&](int64_t index) {
    SplitMix64 rng(DeriveStreamSeed(config.seed, StreamDomain::kSimFixedRank,
                                    static_cast<uint64_t>(index)));
    const int rank_mean = static_cast<int>(UniformInt(rng, 1, config.rank_max));
    const double z = SampleRelevance(config.relevance, rank_mean, rng);
    PairGroup g{SimQueryId(index), SimDocId(index), {}};
    g.appearances.push_back({rank_a, Bernoulli(rng, z * Propensity(rank_a))});
    g.appearances.push_back({rank_b, Bernoulli(rng, z * Propensity(rank_b))});
    return g;
  });
  return groups;
}

absl::StatusOr<std::vector<ScoredImpression>> SimulateScoredImpressions(
    const SimConfig& config, int max_rank, int64_t n_per_rank) {
  RETURN_IF_ERROR(ValidateSimConfig(config));
  if (max_rank < 1 || n_per_rank < 0) {
    return absl::InvalidArgumentError("invalid scored-impression dimensions");
  }
  std::vector<ScoredImpression> out(max_rank * n_per_rank);
  ParallelFill(out, 0, config.threads, [&](int64_t flat) {
    const int rank = static_cast<int>(flat / n_per_rank) + 1;
    const int64_t i = flat % n_per_rank;
    SplitMix64 rng(DeriveStreamSeed(config.seed, StreamDomain::kSimScores,
                                    static_cast<uint64_t>(rank),
                                    static_cast<uint64_t>(i)));
    const int relevance_rank =
        static_cast<int>(UniformInt(rng, 1, kScoreHistoryRankMax));
    const double z = SampleRelevance(config.relevance, relevance_rank, rng);
    // The document was historically shown at a single rank unrelated to z.
    const int history_rank =
        static_cast<int>(UniformInt(rng, 1, kScoreHistoryRankMax));
    const double history_p = Propensity(history_rank);
    int history_clicks = 0;
    for (int k = 0; k < kScoreHistoryImpressions; ++k) {
      history_clicks += Bernoulli(rng, z * history_p) ? 1 : 0;
    }
    ScoredImpression s;
    s.query_id = absl::StrFormat("eq%02d_%08d", rank, i);
    s.doc_id = absl::StrFormat("ed%02d_%08d", rank, i);
    s.rank = rank;
    s.clicked = Bernoulli(rng, z * Propensity(rank));
    s.model_scores["propensity_blind"] =
        static_cast<double>(history_clicks) / kScoreHistoryImpressions;
    s.model_scores["propensity_aware"] =
        static_cast<double>(history_clicks) /
        (kScoreHistoryImpressions * history_p);
    return s;
  });
  return out;
}

}  // namespace pbe
