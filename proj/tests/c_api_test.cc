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

// Exercises the shared library strictly through the C header.

#include "pbe/pbe.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Owned = std::unique_ptr<T, Deleter<T, Free>>;

using Pairs = Owned<pbe_pairs, pbe_pairs_free>;
using Curve = Owned<pbe_curve, pbe_curve_free>;
using Report = Owned<pbe_report, pbe_report_free>;
using Impressions = Owned<pbe_impressions, pbe_impressions_free>;
using RatioTable = Owned<pbe_ratio_table, pbe_ratio_table_free>;
using Scored = Owned<pbe_scored, pbe_scored_free>;
using EvalReport = Owned<pbe_eval_report, pbe_eval_report_free>;

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("pbe_c_api_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  static pbe_sim_config SmallSim() {
    pbe_sim_config config;
    pbe_sim_config_init(&config);
    config.n_pairs = 3000;
    config.seed = 4;
    return config;
  }

  fs::path dir_;
};

TEST_F(CApiTest, VersionAndStatusNames) {
  EXPECT_STREQ(pbe_version(), "1.0.0");
  EXPECT_STREQ(pbe_status_name(PBE_OK), "OK");
  EXPECT_STREQ(pbe_status_name(PBE_DATA_ERROR), "DATA_ERROR");
}

TEST_F(CApiTest, NullArgumentsAreRejected) {
  EXPECT_EQ(pbe_pairs_read_jsonl(nullptr, nullptr), PBE_INVALID_ARGUMENT);
  EXPECT_NE(std::string(pbe_last_error()), "");
  EXPECT_EQ(pbe_pairs_size(nullptr), 0);
  pbe_pairs_free(nullptr);
}

TEST_F(CApiTest, SimulateWriteReadRoundTrip) {
  const pbe_sim_config config = SmallSim();
  pbe_pairs* raw = nullptr;
  pbe_curve* truth_raw = nullptr;
  int64_t drawn = 0;
  ASSERT_EQ(pbe_simulate_pairs(&config, &raw, &truth_raw, &drawn), PBE_OK)
      << pbe_last_error();
  Pairs pairs(raw);
  Curve truth(truth_raw);
  EXPECT_EQ(pbe_pairs_size(pairs.get()), 3000);
  EXPECT_GT(drawn, 3000);
  EXPECT_EQ(pbe_curve_rank_max(truth.get()), 500);

  int64_t n = 0;
  ASSERT_EQ(pbe_pairs_num_appearances(pairs.get(), 0, &n), PBE_OK);
  EXPECT_EQ(n, 2);
  int32_t rank = 0;
  int clicked = 0;
  EXPECT_EQ(pbe_pairs_appearance(pairs.get(), 0, 5, &rank, &clicked),
            PBE_OUT_OF_RANGE);

  ASSERT_EQ(pbe_pairs_write_jsonl(pairs.get(), Path("pairs.jsonl").c_str()),
            PBE_OK);
  pbe_pairs* back_raw = nullptr;
  ASSERT_EQ(pbe_pairs_read_jsonl(Path("pairs.jsonl").c_str(), &back_raw),
            PBE_OK);
  Pairs back(back_raw);
  ASSERT_EQ(pbe_pairs_size(back.get()), 3000);
  ASSERT_EQ(pbe_pairs_write_jsonl(back.get(), Path("again.jsonl").c_str()),
            PBE_OK);
  EXPECT_EQ(Slurp(Path("pairs.jsonl")), Slurp(Path("again.jsonl")));
}

TEST_F(CApiTest, FitMleAndReport) {
  const pbe_sim_config config = SmallSim();
  pbe_pairs* raw = nullptr;
  ASSERT_EQ(pbe_simulate_pairs(&config, &raw, nullptr, nullptr), PBE_OK);
  Pairs pairs(raw);

  pbe_mle_config mle;
  pbe_mle_config_init(&mle);
  EXPECT_EQ(mle.parametrization, PBE_PARAM_INTERPOLATED);
  pbe_report* report_raw = nullptr;
  ASSERT_EQ(pbe_fit_mle(pairs.get(), &mle, &report_raw), PBE_OK)
      << pbe_last_error();
  Report report(report_raw);

  pbe_report_summary summary;
  pbe_report_summary_get(report.get(), &summary);
  EXPECT_TRUE(summary.converged);
  EXPECT_EQ(summary.n_pairs_used, 3000);
  EXPECT_GE(summary.final_log_likelihood, summary.initial_log_likelihood);
  EXPECT_GE(pbe_report_trace_size(report.get()), 1);

  pbe_curve* curve_raw = nullptr;
  ASSERT_EQ(pbe_report_curve(report.get(), &curve_raw), PBE_OK);
  Curve curve(curve_raw);
  double v = 0.0;
  ASSERT_EQ(pbe_curve_value(curve.get(), 1, &v), PBE_OK);
  EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(pbe_curve_value(curve.get(), 501, &v), PBE_OUT_OF_RANGE);

  double ll = 0.0;
  ASSERT_EQ(pbe_curve_log_likelihood(curve.get(), pairs.get(), &ll), PBE_OK);
  EXPECT_NEAR(ll, summary.final_log_likelihood, 1e-6 * std::abs(ll));

  ASSERT_EQ(pbe_report_write_json(report.get(), Path("r.json").c_str()),
            PBE_OK);
  EXPECT_NE(Slurp(Path("r.json")).find("\"method\": \"interpolated\""),
            std::string::npos);
}

TEST_F(CApiTest, InvalidKnotsAreInvalidArgument) {
  const pbe_sim_config config = SmallSim();
  pbe_pairs* raw = nullptr;
  ASSERT_EQ(pbe_simulate_pairs(&config, &raw, nullptr, nullptr), PBE_OK);
  Pairs pairs(raw);
  pbe_mle_config mle;
  pbe_mle_config_init(&mle);
  const int32_t knots[] = {1, 9, 4};
  mle.knots = knots;
  mle.n_knots = 3;
  pbe_report* report = nullptr;
  EXPECT_EQ(pbe_fit_mle(pairs.get(), &mle, &report), PBE_INVALID_ARGUMENT);
  EXPECT_EQ(report, nullptr);
}

TEST_F(CApiTest, CurveCsvRoundTripAndErrors) {
  const double values[] = {2.0, 1.0, 0.5};
  pbe_curve* raw = nullptr;
  ASSERT_EQ(pbe_curve_from_values(values, 3, &raw), PBE_OK);
  Curve curve(raw);
  ASSERT_EQ(pbe_curve_write_csv(curve.get(), Path("c.csv").c_str()), PBE_OK);
  EXPECT_EQ(Slurp(Path("c.csv")), "rank,propensity\n1,1\n2,0.5\n3,0.25\n");

  const double bad[] = {1.0, -1.0};
  pbe_curve* none = nullptr;
  EXPECT_EQ(pbe_curve_from_values(bad, 2, &none), PBE_OUT_OF_RANGE);
  EXPECT_EQ(pbe_curve_read_csv(Path("missing.csv").c_str(), &none),
            PBE_IO_ERROR);
  std::ofstream(Path("bad.csv")) << "rank,propensity\n1,1\n3,2\n";
  EXPECT_EQ(pbe_curve_read_csv(Path("bad.csv").c_str(), &none),
            PBE_DATA_ERROR);
  EXPECT_NE(std::string(pbe_last_error()).find("bad.csv"), std::string::npos);
}

TEST_F(CApiTest, ExtractionFromSimulatedImpressions) {
  const pbe_sim_config config = SmallSim();
  pbe_impressions* raw = nullptr;
  ASSERT_EQ(pbe_simulate_impressions(&config, 5000, &raw), PBE_OK);
  Impressions records(raw);
  EXPECT_EQ(pbe_impressions_size(records.get()), 10000);
  ASSERT_EQ(pbe_impressions_write_jsonl(records.get(), Path("i.jsonl").c_str()),
            PBE_OK);
  pbe_impressions* read_raw = nullptr;
  ASSERT_EQ(pbe_impressions_read_jsonl(Path("i.jsonl").c_str(), 500, &read_raw),
            PBE_OK)
      << pbe_last_error();
  Impressions read(read_raw);

  pbe_extract_config extract;
  pbe_extract_config_init(&extract);
  pbe_extract_summary summary;
  pbe_pairs* pairs_raw = nullptr;
  ASSERT_EQ(pbe_extract(read.get(), &extract, &pairs_raw, &summary), PBE_OK);
  Pairs pairs(pairs_raw);
  EXPECT_EQ(summary.records_seen, 10000);
  EXPECT_EQ(summary.groups_seen, 5000);
  EXPECT_EQ(summary.groups_retained, pbe_pairs_size(pairs.get()));
  EXPECT_EQ(summary.groups_seen,
            summary.groups_retained + summary.groups_dropped_selection);

  // A rank limit below the data is a data error naming the line.
  pbe_impressions* small = nullptr;
  EXPECT_EQ(pbe_impressions_read_jsonl(Path("i.jsonl").c_str(), 2, &small),
            PBE_DATA_ERROR);
  EXPECT_NE(std::string(pbe_last_error()).find("line "), std::string::npos);

  extract.platform_filter = "tv";
  EXPECT_EQ(pbe_extract(read.get(), &extract, &pairs_raw, nullptr),
            PBE_INVALID_ARGUMENT);
}

TEST_F(CApiTest, RatioAndEm) {
  pbe_sim_config config = SmallSim();
  pbe_pairs* raw = nullptr;
  ASSERT_EQ(pbe_simulate_fixed_rank_pairs(&config, 1, 10, 50000, &raw), PBE_OK);
  Pairs groups(raw);

  pbe_ratio_table* table_raw = nullptr;
  ASSERT_EQ(pbe_ratio_single(groups.get(), 1, 10, &table_raw), PBE_OK);
  RatioTable table(table_raw);
  ASSERT_EQ(pbe_ratio_table_size(table.get()), 1);
  pbe_ratio_row row;
  ASSERT_EQ(pbe_ratio_table_row(table.get(), 0, &row), PBE_OK);
  EXPECT_NEAR(row.ratio, std::log(10.0), 0.1 * std::log(10.0));
  EXPECT_EQ(row.n_pairs, 50000);

  pbe_ratio_table* missing = nullptr;
  EXPECT_EQ(pbe_ratio_single(groups.get(), 2, 3, &missing), PBE_DATA_ERROR);

  pbe_em_config em;
  pbe_em_config_init(&em);
  em.rank_max = 10;
  pbe_report* report_raw = nullptr;
  ASSERT_EQ(pbe_fit_em(groups.get(), &em, &report_raw), PBE_OK)
      << pbe_last_error();
  Report report(report_raw);
  pbe_report_summary summary;
  pbe_report_summary_get(report.get(), &summary);
  EXPECT_EQ(summary.n_interpolated_ranks, 8);
}

TEST_F(CApiTest, WeightsAnnotation) {
  std::ofstream(Path("in.jsonl"))
      << "{\"query_id\":\"q\",\"doc_id\":\"d\",\"rank\":2,\"clicked\":true}\n";
  const double values[] = {1.0, 0.5};
  pbe_curve* raw = nullptr;
  ASSERT_EQ(pbe_curve_from_values(values, 2, &raw), PBE_OK);
  Curve curve(raw);
  ASSERT_EQ(pbe_annotate_weights(Path("in.jsonl").c_str(), curve.get(),
                                 Path("out.jsonl").c_str()),
            PBE_OK);
  EXPECT_NE(Slurp(Path("out.jsonl")).find("\"weight\":2.0"), std::string::npos);

  std::ofstream(Path("far.jsonl")) << "{\"rank\":9}\n";
  EXPECT_EQ(pbe_annotate_weights(Path("far.jsonl").c_str(), curve.get(),
                                 Path("far_out.jsonl").c_str()),
            PBE_DATA_ERROR);
  EXPECT_FALSE(fs::exists(Path("far_out.jsonl")));
}

TEST_F(CApiTest, EvaluateScoredImpressions) {
  const pbe_sim_config config = SmallSim();
  pbe_scored* raw = nullptr;
  ASSERT_EQ(pbe_simulate_scored(&config, 4, 500, &raw), PBE_OK);
  Scored data(raw);
  ASSERT_EQ(pbe_scored_num_models(data.get()), 2);
  const char* name = nullptr;
  ASSERT_EQ(pbe_scored_model_name(data.get(), 0, &name), PBE_OK);
  EXPECT_STREQ(name, "propensity_aware");

  pbe_bootstrap_config boot;
  pbe_bootstrap_config_init(&boot);
  const int32_t ranks[] = {1, 4};
  boot.ranks = ranks;
  boot.n_ranks = 2;
  boot.n_bootstrap = 50;
  pbe_eval_report* report_raw = nullptr;
  ASSERT_EQ(pbe_evaluate(data.get(), "propensity_aware", "propensity_blind",
                         &boot, &report_raw),
            PBE_OK)
      << pbe_last_error();
  EvalReport report(report_raw);
  ASSERT_EQ(pbe_eval_report_size(report.get()), 2);
  pbe_eval_row row;
  ASSERT_EQ(pbe_eval_report_row(report.get(), 1, &row), PBE_OK);
  EXPECT_EQ(row.rank, 4);
  EXPECT_GT(row.stddev, 0.0);
  ASSERT_EQ(pbe_eval_report_write_csv(report.get(), Path("e.csv").c_str()),
            PBE_OK);
  EXPECT_EQ(Slurp(Path("e.csv")).rfind("rank,model_pair", 0), 0u);
}

}  // namespace
