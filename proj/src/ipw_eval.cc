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

#include "ipw_eval.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "random.h"
#include "status_macros.h"

namespace pbe {
namespace {

using Json = nlohmann::json;

constexpr int kMaxResampleRedraws = 1000;

absl::StatusOr<ScoredImpression> ParseScoredLine(const std::string& line) {
  const Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    return absl::InvalidArgumentError("malformed JSON object");
  }
  ScoredImpression s;
  const auto query_id = obj.find("query_id");
  const auto doc_id = obj.find("doc_id");
  const auto rank = obj.find("rank");
  const auto clicked = obj.find("clicked");
  const auto scores = obj.find("model_scores");
  if (query_id == obj.end() || !query_id->is_string() || doc_id == obj.end() ||
      !doc_id->is_string()) {
    return absl::InvalidArgumentError("query_id and doc_id must be strings");
  }
  if (rank == obj.end() || !rank->is_number_integer() ||
      rank->get<int64_t>() < 1) {
    return absl::OutOfRangeError("rank must be an integer >= 1");
  }
  if (clicked == obj.end() ||
      !(clicked->is_boolean() || clicked->is_number_integer())) {
    return absl::InvalidArgumentError("clicked must be a boolean");
  }
  if (scores == obj.end() || !scores->is_object() || scores->empty()) {
    return absl::InvalidArgumentError(
        "model_scores must be a non-empty object of numbers");
  }
  s.query_id = query_id->get<std::string>();
  s.doc_id = doc_id->get<std::string>();
  s.rank = static_cast<int>(rank->get<int64_t>());
  s.clicked = clicked->is_boolean() ? clicked->get<bool>()
                                    : clicked->get<int64_t>() != 0;
  for (const auto& [name, value] : scores->items()) {
    if (!value.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("score for model \"", name, "\" is not a number"));
    }
    s.model_scores[name] = value.get<double>();
  }
  return s;
}

// AUC from sorted-rank statistics. `order` is scratch space.
double AucUnchecked(std::span<const double> scores,
                    std::span<const bool> labels, std::vector<size_t>& order,
                    int64_t n_pos, int64_t n_neg) {
  const size_t n = scores.size();
  order.resize(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    // Ranks i+1..j+1 share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + j + 2);
    for (size_t k = i; k <= j; ++k) {
      if (labels[order[k]]) positive_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double pos = static_cast<double>(n_pos);
  const double u = positive_rank_sum - pos * (pos + 1.0) / 2.0;
  return u / (pos * static_cast<double>(n_neg));
}

struct RankSlice {
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  std::vector<bool> labels;
};

absl::StatusOr<RankSlice> SliceAtRank(std::span<const ScoredImpression> data,
                                      int rank, absl::string_view model_a,
                                      absl::string_view model_b) {
  RankSlice slice;
  for (const ScoredImpression& s : data) {
    if (s.rank != rank) continue;
    const auto a = s.model_scores.find(std::string(model_a));
    const auto b = s.model_scores.find(std::string(model_b));
    if (a == s.model_scores.end() || b == s.model_scores.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "impression (", s.query_id, ", ", s.doc_id, ") at rank ", rank,
          " lacks a score for model \"",
          a == s.model_scores.end() ? model_a : model_b, "\""));
    }
    slice.scores_a.push_back(a->second);
    slice.scores_b.push_back(b->second);
    slice.labels.push_back(s.clicked);
  }
  const auto n_pos = std::count(slice.labels.begin(), slice.labels.end(), true);
  if (n_pos == 0 || n_pos == static_cast<int64_t>(slice.labels.size())) {
    return absl::FailedPreconditionError(absl::StrCat(
        "rank ", rank, " has ", slice.labels.size(), " impressions and ", n_pos,
        " clicks; AUC needs both clicked and non-clicked impressions"));
  }
  return slice;
}

struct ResampleOutcome {
  double improvement = 0.0;
  int64_t redraws = 0;
  bool ok = true;
};

ResampleOutcome RunResample(const RankSlice& slice, uint64_t seed, int rank,
                            int index) {
  SplitMix64 rng(DeriveStreamSeed(seed, StreamDomain::kBootstrap,
                                  static_cast<uint64_t>(rank),
                                  static_cast<uint64_t>(index)));
  const int64_t n = static_cast<int64_t>(slice.labels.size());
  std::vector<double> a(n), b(n);
  std::unique_ptr<bool[]> labels(new bool[n]);
  std::vector<size_t> order;
  ResampleOutcome out;
  for (int attempt = 0; attempt <= kMaxResampleRedraws; ++attempt) {
    int64_t n_pos = 0;
    for (int64_t k = 0; k < n; ++k) {
      const int64_t pick = UniformInt(rng, 0, n - 1);
      a[k] = slice.scores_a[pick];
      b[k] = slice.scores_b[pick];
      labels[k] = slice.labels[pick];
      n_pos += labels[k] ? 1 : 0;
    }
    if (n_pos == 0 || n_pos == n) {
      ++out.redraws;
      continue;
    }
    const std::span<const bool> label_span(labels.get(), n);
    out.improvement = AucUnchecked(a, label_span, order, n_pos, n - n_pos) -
                      AucUnchecked(b, label_span, order, n_pos, n - n_pos);
    return out;
  }
  out.ok = false;
  return out;
}

}  // namespace

absl::StatusOr<double> IpwWeight(const PropensityCurve& curve, int rank) {
  ASSIGN_OR_RETURN(const double p, curve.ValueAt(rank));
  return 1.0 / p;
}

absl::StatusOr<double> UnbiasedLoss(std::span<const ObservedLoss> observed,
                                    const PropensityCurve& curve) {
  double total = 0.0;
  for (const ObservedLoss& item : observed) {
    ASSIGN_OR_RETURN(const double w, IpwWeight(curve, item.rank));
    total += item.loss * w;
  }
  return total;
}

absl::StatusOr<double> Dcg(std::span<const std::vector<int>> clicked_ranks) {
  double total = 0.0;
  for (const std::vector<int>& query : clicked_ranks) {
    for (const int rank : query) {
      if (rank < 1) {
        return absl::OutOfRangeError(
            absl::StrCat("rank must be >= 1, got ", rank));
      }
      total += 1.0 / std::log2(static_cast<double>(rank) + 1.0);
    }
  }
  return total;
}

absl::StatusOr<double> IpwDcg(std::span<const std::vector<int>> clicked_ranks,
                              const PropensityCurve& curve) {
  double total = 0.0;
  for (const std::vector<int>& query : clicked_ranks) {
    for (const int rank : query) {
      ASSIGN_OR_RETURN(const double w, IpwWeight(curve, rank));
      total += w / std::log2(static_cast<double>(rank) + 1.0);
    }
  }
  return total;
}

absl::StatusOr<std::vector<ScoredImpression>> ParseScoredImpressions(
    std::istream& input) {
  std::vector<ScoredImpression> out;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto parsed = ParseScoredLine(line);
    if (!parsed.ok()) {
      return absl::Status(parsed.status().code(),
                          absl::StrCat("line ", line_number, ": ",
                                       parsed.status().message()));
    }
    out.push_back(*std::move(parsed));
  }
  return out;
}

std::vector<std::string> ModelNames(std::span<const ScoredImpression> data) {
  std::set<std::string> names;
  for (const ScoredImpression& s : data) {
    for (const auto& [name, score] : s.model_scores) names.insert(name);
  }
  return {names.begin(), names.end()};
}

absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const bool> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  const auto n_pos = std::count(labels.begin(), labels.end(), true);
  const auto n_neg = static_cast<int64_t>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    return absl::FailedPreconditionError(
        "AUC is undefined without both positive and negative examples");
  }
  std::vector<size_t> order;
  return AucUnchecked(scores, labels, order, n_pos, n_neg);
}

absl::StatusOr<double> FixedRankAuc(std::span<const ScoredImpression> data,
                                    int fixed_rank, absl::string_view model) {
  ASSIGN_OR_RETURN(const RankSlice slice,
                   SliceAtRank(data, fixed_rank, model, model));
  std::unique_ptr<bool[]> labels(new bool[slice.labels.size()]);
  std::copy(slice.labels.begin(), slice.labels.end(), labels.get());
  return Auc(slice.scores_a, {labels.get(), slice.labels.size()});
}

absl::StatusOr<EvalReport> BootstrapCompare(
    std::span<const ScoredImpression> data, std::span<const int> fixed_ranks,
    absl::string_view model_a, absl::string_view model_b,
    const BootstrapOptions& options) {
  if (options.n_bootstrap < 1) {
    return absl::InvalidArgumentError("n_bootstrap must be >= 1");
  }
  if (options.threads < 1) {
    return absl::InvalidArgumentError("threads must be >= 1");
  }
  EvalReport report;
  report.n_bootstrap = options.n_bootstrap;
  report.seed = options.seed;

  for (const int rank : fixed_ranks) {
    ASSIGN_OR_RETURN(const RankSlice slice,
                     SliceAtRank(data, rank, model_a, model_b));
    std::vector<ResampleOutcome> outcomes(options.n_bootstrap);
    const int workers = std::min(options.threads, options.n_bootstrap);
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int b = w; b < options.n_bootstrap; b += workers) {
            outcomes[b] = RunResample(slice, options.seed, rank, b);
          }
        });
      }
    }

    EvalRow row{rank, std::string(model_a), std::string(model_b), 0.0, 0.0, 0};
    double sum = 0.0;
    for (const ResampleOutcome& o : outcomes) {
      if (!o.ok) {
        return absl::FailedPreconditionError(absl::StrCat(
            "rank ", rank, ": could not draw a two-class resample in ",
            kMaxResampleRedraws, " attempts"));
      }
      sum += o.improvement;
      row.n_redrawn += o.redraws;
    }
    row.mean_improvement = sum / options.n_bootstrap;
    if (options.n_bootstrap > 1) {
      double squares = 0.0;
      for (const ResampleOutcome& o : outcomes) {
        const double d = o.improvement - row.mean_improvement;
        squares += d * d;
      }
      row.stddev = std::sqrt(squares / (options.n_bootstrap - 1));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace pbe
