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

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "simulator.h"

namespace pbe {
namespace {

using oracle::Group;

// One relevance shared by every group.
class PooledRelevance : public RelevanceUpdater {
 public:
  void Update(std::span<const PairGroup> groups,
              std::span<const double> expected_relevant,
              std::span<double> relevance) const override {
    double events = 0.0, impressions = 0.0;
    for (size_t j = 0; j < groups.size(); ++j) {
      events += expected_relevant[j];
      impressions += static_cast<double>(groups[j].appearances.size());
    }
    for (double& z : relevance) z = std::min(1.0, events / impressions);
  }
};

TEST(PbmLogLikelihoodTest, HandComputed) {
  const std::vector<PairGroup> groups = {Group({{1, true}, {2, false}})};
  const std::vector<double> p = {0.8, 0.5};
  const std::vector<double> z = {0.5};
  EXPECT_NEAR(PbmLogLikelihood(groups, p, z),
              std::log(0.4) + std::log(0.75), 1e-12);
}

TEST(PerPairRelevanceTest, SmoothedRateAndPrior) {
  const std::vector<PairGroup> groups = {Group({{1, true}, {2, false}}),
                                         Group({{1, false}, {3, false}})};
  const std::vector<double> expected = {1.5, 0.0};
  std::vector<double> z(2);
  PerPairRelevance(1.0).Update(groups, expected, z);
  EXPECT_DOUBLE_EQ(z[0], 2.5 / 4.0);
  EXPECT_DOUBLE_EQ(z[1], 1.0 / 4.0);
  EXPECT_NEAR(PerPairRelevance(1.0).LogPrior(z),
              std::log(0.625 * 0.375) + std::log(0.25 * 0.75), 1e-12);
  PerPairRelevance().Update(groups, expected, z);
  EXPECT_DOUBLE_EQ(z[0], 0.75);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
  EXPECT_DOUBLE_EQ(PerPairRelevance().LogPrior(z), 0.0);
}

TEST(FitEmTest, AllClickedGivesFlatCurve) {
  std::vector<PairGroup> groups;
  for (int i = 0; i < 20; ++i) {
    groups.push_back(Group({{1 + i % 3, true}, {4, true}}, std::to_string(i)));
  }
  EmConfig config;
  config.rank_max = 4;
  auto report = FitEm(groups, config);
  ASSERT_TRUE(report.ok()) << report.status();
  for (int r = 1; r <= 4; ++r) {
    EXPECT_NEAR(report->curve.value(r), 1.0, 1e-9) << r;
  }
}

class FitEmMonotoneTest : public ::testing::TestWithParam<double> {};

TEST_P(FitEmMonotoneTest, PenalizedObjectiveNeverDecreases) {
  SimConfig sim;
  sim.rank_max = 50;
  auto groups = SimulateRawGroups(sim, 20000);
  ASSERT_TRUE(groups.ok());
  EmConfig config;
  config.rank_max = 50;
  config.smoothing = GetParam();
  auto report = FitEm(*groups, config);
  ASSERT_TRUE(report.ok()) << report.status();
  const std::vector<double>& trace = report->log_likelihood_trace;
  ASSERT_GT(trace.size(), 2u);
  for (size_t i = 1; i < trace.size(); ++i) {
    EXPECT_GE(trace[i], trace[i - 1] - 1e-9 * std::abs(trace[i - 1])) << i;
  }
  EXPECT_GT(report->final_log_likelihood, report->initial_log_likelihood);
  EXPECT_DOUBLE_EQ(report->curve.value(1), 1.0);
  EXPECT_EQ(report->curve.method(), CurveMethod::kEm);
}

INSTANTIATE_TEST_SUITE_P(Smoothing, FitEmMonotoneTest,
                         ::testing::Values(0.0, 1.0));

// Every group is shown once at rank 1 and once at rank 2, with one shared
// relevance. Click rates at the two ranks are 0.6 and 0.3, so the normalized
// rank-2 propensity is 0.5.
TEST(FitEmTest, HomogeneousTwoRankInstanceMatchesOracle) {
  std::vector<PairGroup> groups;
  SplitMix64 rng(17);
  for (int i = 0; i < 20000; ++i) {
    groups.push_back(Group({{1, Bernoulli(rng, 0.6)}, {2, Bernoulli(rng, 0.3)}},
                           std::to_string(i)));
  }
  // Oracle: full position-based likelihood over (ln p2, ln z), p1 = 1.
  const auto objective = [&](const std::vector<double>& v) {
    const std::vector<double> p = {1.0, v[1]};
    const std::vector<double> z(groups.size(), std::min(v[2], 1.0));
    return PbmLogLikelihood(groups, p, z);
  };
  const std::vector<double> best =
      oracle::CoordinateAscentArgmax(objective, 3, -4.0, 0.0, 20);

  EmConfig config;
  config.rank_max = 2;
  config.smoothing = 0.0;
  config.max_iterations = 2000;
  config.ll_tolerance = 1e-12;
  config.relevance_updater = std::make_shared<PooledRelevance>();
  auto report = FitEm(groups, config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_NEAR(report->curve.value(2), 0.5, 0.05);
  EXPECT_NEAR(report->curve.value(2), best[1], 0.01);
}

TEST(FitEmTest, UnobservedRanksAreInterpolated) {
  const std::vector<PairGroup> groups = {Group({{1, true}, {4, false}}, "a"),
                                         Group({{1, false}, {4, true}}, "b")};
  EmConfig config;
  config.rank_max = 6;
  auto report = FitEm(groups, config);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->n_interpolated_ranks, 4);
  EXPECT_DOUBLE_EQ(report->curve.value(6), report->curve.value(4));
}

TEST(FitEmTest, RejectsBadInput) {
  EmConfig config;
  EXPECT_FALSE(FitEm({}, config).ok());
  config.rank_max = 3;
  const std::vector<PairGroup> out_of_range = {Group({{1, true}, {4, false}})};
  EXPECT_EQ(FitEm(out_of_range, config).status().code(),
            absl::StatusCode::kOutOfRange);
  config.smoothing = -1.0;
  const std::vector<PairGroup> ok = {Group({{1, true}, {2, false}})};
  EXPECT_EQ(FitEm(ok, config).status().code(),
            absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace pbe
