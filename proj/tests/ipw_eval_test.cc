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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "random.h"
#include "simulator.h"

namespace pbe {
namespace {

PropensityCurve Curve(std::vector<double> values) {
  return *PropensityCurve::Normalize(values);
}

TEST(IpwWeightTest, InverseOfPropensity) {
  const PropensityCurve curve = Curve({1.0, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(*IpwWeight(curve, 1), 1.0);
  EXPECT_DOUBLE_EQ(*IpwWeight(curve, 3), 4.0);
  EXPECT_EQ(IpwWeight(curve, 4).status().code(), absl::StatusCode::kOutOfRange);
}

TEST(UnbiasedLossTest, WeightsEachLoss) {
  const PropensityCurve curve = Curve({1.0, 0.5});
  const std::vector<ObservedLoss> observed = {{1, 0.3}, {2, 0.2}};
  EXPECT_DOUBLE_EQ(*UnbiasedLoss(observed, curve), 0.3 + 0.4);
}

// Monte Carlo: observing each item with its propensity and weighting the
// observed losses recovers the full loss in expectation.
TEST(UnbiasedLossTest, UnbiasedUnderRandomObservation) {
  const PropensityCurve curve = Curve({1.0, 0.6, 0.3, 0.1});
  const std::vector<double> loss = {0.2, 0.5, 0.9, 0.4};
  const double full = 0.2 + 0.5 + 0.9 + 0.4;
  SplitMix64 rng(21);
  const int draws = 200000;
  double total = 0.0;
  for (int d = 0; d < draws; ++d) {
    std::vector<ObservedLoss> observed;
    for (int r = 1; r <= 4; ++r) {
      if (Bernoulli(rng, curve.value(r))) observed.push_back({r, loss[r - 1]});
    }
    total += *UnbiasedLoss(observed, curve);
  }
  EXPECT_NEAR(total / draws, full, 0.01 * full);
}

TEST(DcgTest, HandComputedValues) {
  const std::vector<std::vector<int>> clicks = {{1, 3}};
  EXPECT_DOUBLE_EQ(*Dcg(clicks), 1.5);
  const std::vector<std::vector<int>> none = {{}, {}};
  EXPECT_DOUBLE_EQ(*Dcg(none), 0.0);
  const std::vector<std::vector<int>> third = {{3}};
  EXPECT_DOUBLE_EQ(*IpwDcg(third, Curve({1.0, 0.8, 0.5})), 1.0);
  const std::vector<std::vector<int>> bad = {{0}};
  EXPECT_FALSE(Dcg(bad).ok());
}

TEST(AucTest, MatchesBruteForce) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + trial;
    std::vector<double> scores(n);
    std::vector<bool> labels(n);
    for (int i = 0; i < n; ++i) {
      // Coarse scores so ties occur.
      scores[i] = std::floor(5.0 * Uniform01(rng));
      labels[i] = i % 3 == 0 || Bernoulli(rng, 0.3);
    }
    labels[1] = false;
    std::vector<char> storage(labels.begin(), labels.end());
    const std::span<const bool> label_span(
        reinterpret_cast<const bool*>(storage.data()), storage.size());
    auto auc = Auc(scores, label_span);
    ASSERT_TRUE(auc.ok());
    EXPECT_NEAR(*auc, oracle::BruteForceAuc(scores, labels), 1e-12);
  }
}

TEST(AucTest, HandComputedAndSingleClass) {
  const std::vector<double> scores = {0.9, 0.1, 0.5, 0.5};
  const bool labels[] = {true, false, true, false};
  EXPECT_DOUBLE_EQ(*Auc(scores, labels), (1.0 + 1.0 + 1.0 + 0.5) / 4.0);
  const bool one_class[] = {true, true, true, true};
  EXPECT_EQ(Auc(scores, one_class).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

std::vector<ScoredImpression> SmallScoredSet() {
  SimConfig sim;
  return *SimulateScoredImpressions(sim, 4, 400);
}

TEST(BootstrapCompareTest, IdenticalModelsGiveZero) {
  std::vector<ScoredImpression> data = SmallScoredSet();
  for (ScoredImpression& s : data) {
    s.model_scores["copy"] = s.model_scores["propensity_blind"];
  }
  const std::vector<int> ranks = {1, 2, 4};
  BootstrapOptions options;
  options.n_bootstrap = 50;
  auto report =
      BootstrapCompare(data, ranks, "copy", "propensity_blind", options);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->rows.size(), 3u);
  for (const EvalRow& row : report->rows) {
    EXPECT_DOUBLE_EQ(row.mean_improvement, 0.0);
    EXPECT_DOUBLE_EQ(row.stddev, 0.0);
  }
}

TEST(BootstrapCompareTest, DeterministicAcrossThreads) {
  const std::vector<ScoredImpression> data = SmallScoredSet();
  const std::vector<int> ranks = {1, 3};
  BootstrapOptions options;
  options.n_bootstrap = 100;
  options.seed = 77;
  auto one = BootstrapCompare(data, ranks, "propensity_aware",
                              "propensity_blind", options);
  options.threads = 3;
  auto three = BootstrapCompare(data, ranks, "propensity_aware",
                                "propensity_blind", options);
  ASSERT_TRUE(one.ok() && three.ok());
  for (size_t i = 0; i < one->rows.size(); ++i) {
    EXPECT_EQ(one->rows[i].mean_improvement, three->rows[i].mean_improvement);
    EXPECT_EQ(one->rows[i].stddev, three->rows[i].stddev);
    EXPECT_GT(one->rows[i].stddev, 0.0);
  }
}

TEST(BootstrapCompareTest, SingleClassRankIsNamed) {
  std::vector<ScoredImpression> data = SmallScoredSet();
  for (ScoredImpression& s : data) {
    if (s.rank == 2) s.clicked = false;
  }
  const std::vector<int> ranks = {1, 2};
  auto report = BootstrapCompare(data, ranks, "propensity_aware",
                                 "propensity_blind", BootstrapOptions{});
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.status().message().find("rank 2"), std::string::npos)
      << report.status();
}

TEST(BootstrapCompareTest, MissingModelFails) {
  const std::vector<int> ranks = {1};
  EXPECT_EQ(BootstrapCompare(SmallScoredSet(), ranks, "nope",
                             "propensity_blind", BootstrapOptions{})
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ParseScoredImpressionsTest, ParsesAndListsModels) {
  std::istringstream in(
      R"({"query_id":"q","doc_id":"a","rank":1,"clicked":true,"model_scores":{"m2":0.5,"m1":1}})"
      "\n"
      R"({"query_id":"q","doc_id":"b","rank":2,"clicked":false,"model_scores":{"m3":0.1}})"
      "\n");
  auto data = ParseScoredImpressions(in);
  ASSERT_TRUE(data.ok()) << data.status();
  ASSERT_EQ(data->size(), 2u);
  EXPECT_DOUBLE_EQ((*data)[0].model_scores.at("m1"), 1.0);
  EXPECT_EQ(ModelNames(*data), (std::vector<std::string>{"m1", "m2", "m3"}));

  std::istringstream bad(
      R"({"query_id":"q","doc_id":"a","rank":1,"clicked":true,"model_scores":{}})");
  EXPECT_FALSE(ParseScoredImpressions(bad).ok());
}

}  // namespace
}  // namespace pbe
