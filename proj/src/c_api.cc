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

#include "pbe/pbe.h"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "domain.h"
#include "em.h"
#include "formats.h"
#include "ingest.h"
#include "ipw_eval.h"
#include "mle.h"
#include "ratio.h"
#include "simulator.h"

struct pbe_impressions {
  std::vector<pbe::ImpressionRecord> records;
};
struct pbe_pairs {
  std::vector<pbe::PairGroup> groups;
};
struct pbe_curve {
  pbe::PropensityCurve curve;
};
struct pbe_report {
  pbe::EstimationReport report;
};
struct pbe_ratio_table {
  std::vector<pbe::RatioRow> rows;
};
struct pbe_scored {
  std::vector<pbe::ScoredImpression> data;
  std::vector<std::string> model_names;
};
struct pbe_eval_report {
  pbe::EvalReport report;
};

namespace {

thread_local std::string last_error;

pbe_status StatusToCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return PBE_OK;
    case absl::StatusCode::kInvalidArgument:
      return PBE_INVALID_ARGUMENT;
    case absl::StatusCode::kOutOfRange:
      return PBE_OUT_OF_RANGE;
    case absl::StatusCode::kFailedPrecondition:
      return PBE_DATA_ERROR;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kUnavailable:
      return PBE_IO_ERROR;
    default:
      return PBE_INTERNAL;
  }
}

pbe_status Fail(pbe_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

pbe_status Fail(const absl::Status& status) {
  return Fail(StatusToCode(status), std::string(status.message()));
}

// Any failure while parsing a file is a data error, whatever the parser's own
// status code says.
pbe_status FailParse(const char* path, const absl::Status& status) {
  return Fail(PBE_DATA_ERROR, absl::StrCat(path, ": ", status.message()));
}

// Runs `body`, translating exceptions (bad_alloc, mostly) into status codes.
template <typename F>
pbe_status Guard(F&& body) {
  try {
    return body();
  } catch (const std::bad_alloc&) {
    return Fail(PBE_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PBE_INTERNAL, e.what());
  }
}

pbe_status OpenInput(const char* path, std::ifstream& in) {
  if (path == nullptr) return Fail(PBE_INVALID_ARGUMENT, "path is NULL");
  in.open(path, std::ios::binary);
  if (!in) return Fail(PBE_IO_ERROR, absl::StrCat("cannot open ", path));
  return PBE_OK;
}

// Writes the fully rendered contents in one go.
pbe_status WriteFile(const char* path, const std::string& contents) {
  if (path == nullptr) return Fail(PBE_INVALID_ARGUMENT, "path is NULL");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Fail(PBE_IO_ERROR, absl::StrCat("cannot create ", path));
  out << contents;
  out.flush();
  if (!out) return Fail(PBE_IO_ERROR, absl::StrCat("cannot write ", path));
  return PBE_OK;
}

template <typename Writer>
pbe_status RenderToFile(const char* path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  return WriteFile(path, buffer.str());
}

#define PBE_REQUIRE(cond)                                               \
  do {                                                                  \
    if (!(cond)) return Fail(PBE_INVALID_ARGUMENT, "NULL argument: " #cond); \
  } while (0)

pbe::SimConfig ToSimConfig(const pbe_sim_config& c) {
  pbe::SimConfig out;
  out.rank_max = c.rank_max;
  out.n_pairs_target = c.n_pairs;
  out.rank_spread_divisor = c.rank_spread_divisor;
  out.relevance.base_ctr_scale = c.base_ctr_scale;
  out.relevance.base_ctr_exponent = c.base_ctr_exponent;
  out.relevance.noise_sigma = c.noise_sigma;
  out.seed = c.seed;
  out.threads = c.threads;
  return out;
}

void CopySummary(const pbe::ExtractionSummary& s, pbe_extract_summary* out) {
  out->records_seen = s.records_seen;
  out->records_dropped_platform = s.records_dropped_platform;
  out->records_dropped_sort_type = s.records_dropped_sort_type;
  out->groups_seen = s.groups_seen;
  out->groups_dropped_auction = s.groups_dropped_auction;
  out->groups_dropped_price = s.groups_dropped_price;
  out->groups_dropped_selection = s.groups_dropped_selection;
  out->groups_retained = s.groups_retained;
}

}  // namespace

extern "C" {

const char* pbe_status_name(pbe_status status) {
  switch (status) {
    case PBE_OK:
      return "OK";
    case PBE_INVALID_ARGUMENT:
      return "INVALID_ARGUMENT";
    case PBE_OUT_OF_RANGE:
      return "OUT_OF_RANGE";
    case PBE_DATA_ERROR:
      return "DATA_ERROR";
    case PBE_IO_ERROR:
      return "IO_ERROR";
    case PBE_INTERNAL:
      return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* pbe_last_error(void) { return last_error.c_str(); }

const char* pbe_version(void) { return "1.0.0"; }

// ---- Impression logs -------------------------------------------------------

pbe_status pbe_impressions_read_jsonl(const char* path, int32_t rank_max,
                                      pbe_impressions** out) {
  PBE_REQUIRE(out != nullptr);
  return Guard([&] {
    if (rank_max < 1) return Fail(PBE_INVALID_ARGUMENT, "rank_max must be >= 1");
    std::ifstream in;
    if (pbe_status s = OpenInput(path, in); s != PBE_OK) return s;
    auto records = pbe::ParseImpressionLog(in, rank_max);
    if (!records.ok()) return FailParse(path, records.status());
    *out = new pbe_impressions{*std::move(records)};
    return PBE_OK;
  });
}

pbe_status pbe_impressions_write_jsonl(const pbe_impressions* records,
                                       const char* path) {
  PBE_REQUIRE(records != nullptr);
  return Guard([&] {
    return RenderToFile(path, [&](std::ostream& o) {
      pbe::WriteImpressionsJsonl(o, records->records);
    });
  });
}

int64_t pbe_impressions_size(const pbe_impressions* records) {
  return records == nullptr ? 0 : static_cast<int64_t>(records->records.size());
}

void pbe_impressions_free(pbe_impressions* records) { delete records; }

// ---- Pairs -----------------------------------------------------------------

pbe_status pbe_pairs_read_jsonl(const char* path, pbe_pairs** out) {
  PBE_REQUIRE(out != nullptr);
  return Guard([&] {
    std::ifstream in;
    if (pbe_status s = OpenInput(path, in); s != PBE_OK) return s;
    auto groups = pbe::ReadPairsJsonl(in);
    if (!groups.ok()) return FailParse(path, groups.status());
    *out = new pbe_pairs{*std::move(groups)};
    return PBE_OK;
  });
}

pbe_status pbe_pairs_write_jsonl(const pbe_pairs* pairs, const char* path) {
  PBE_REQUIRE(pairs != nullptr);
  return Guard([&] {
    return RenderToFile(
        path, [&](std::ostream& o) { pbe::WritePairsJsonl(o, pairs->groups); });
  });
}

int64_t pbe_pairs_size(const pbe_pairs* pairs) {
  return pairs == nullptr ? 0 : static_cast<int64_t>(pairs->groups.size());
}

pbe_status pbe_pairs_num_appearances(const pbe_pairs* pairs, int64_t index,
                                     int64_t* out) {
  PBE_REQUIRE(pairs != nullptr && out != nullptr);
  if (index < 0 || index >= pbe_pairs_size(pairs)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("pair index ", index));
  }
  *out = static_cast<int64_t>(pairs->groups[index].appearances.size());
  return PBE_OK;
}

pbe_status pbe_pairs_appearance(const pbe_pairs* pairs, int64_t index,
                                int64_t k, int32_t* rank, int* clicked) {
  PBE_REQUIRE(pairs != nullptr && rank != nullptr && clicked != nullptr);
  if (index < 0 || index >= pbe_pairs_size(pairs)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("pair index ", index));
  }
  const auto& apps = pairs->groups[index].appearances;
  if (k < 0 || k >= static_cast<int64_t>(apps.size())) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("appearance index ", k));
  }
  *rank = apps[k].rank;
  *clicked = apps[k].clicked ? 1 : 0;
  return PBE_OK;
}

void pbe_pairs_free(pbe_pairs* pairs) { delete pairs; }

// ---- Extraction ------------------------------------------------------------

void pbe_extract_config_init(pbe_extract_config* config) {
  if (config == nullptr) return;
  const pbe::ExtractionConfig defaults;
  config->require_same_day = defaults.require_same_day;
  config->require_same_price = defaults.require_same_price;
  config->exclude_auctions = defaults.exclude_auctions;
  config->platform_filter = nullptr;
  config->sort_type_filter = nullptr;
  config->selection_mode = PBE_SELECT_TWO_RANKS_ONE_CLICK;
}

pbe_status pbe_extract(const pbe_impressions* records,
                       const pbe_extract_config* config, pbe_pairs** out,
                       pbe_extract_summary* summary) {
  PBE_REQUIRE(records != nullptr && config != nullptr && out != nullptr);
  return Guard([&] {
    pbe::ExtractionConfig cfg;
    cfg.require_same_day = config->require_same_day != 0;
    cfg.require_same_price = config->require_same_price != 0;
    cfg.exclude_auctions = config->exclude_auctions != 0;
    if (config->platform_filter != nullptr) {
      auto platform = pbe::ParsePlatform(config->platform_filter);
      if (!platform.ok()) return Fail(PBE_INVALID_ARGUMENT,
                                      std::string(platform.status().message()));
      cfg.platform_filter = *platform;
    }
    if (config->sort_type_filter != nullptr) {
      cfg.sort_type_filter = config->sort_type_filter;
    }
    switch (config->selection_mode) {
      case PBE_SELECT_TWO_RANKS_ONE_CLICK:
        cfg.selection_mode = pbe::SelectionMode::kExactlyTwoRanksOneClick;
        break;
      case PBE_SELECT_RELAXED:
        cfg.selection_mode = pbe::SelectionMode::kAtLeastTwoRanksOnePlusClicks;
        break;
      case PBE_SELECT_NONE:
        break;
      default:
        return Fail(PBE_INVALID_ARGUMENT, "unknown selection mode");
    }
    pbe::ExtractionSummary s;
    std::vector<pbe::PairGroup> groups =
        pbe::GroupPairs(records->records, cfg, &s);
    if (config->selection_mode == PBE_SELECT_NONE) {
      s.groups_retained = static_cast<int64_t>(groups.size());
    } else {
      groups = pbe::SelectEstimationPairs(groups, cfg, &s);
    }
    if (summary != nullptr) CopySummary(s, summary);
    *out = new pbe_pairs{std::move(groups)};
    return PBE_OK;
  });
}

// ---- Simulation ------------------------------------------------------------

void pbe_sim_config_init(pbe_sim_config* config) {
  if (config == nullptr) return;
  const pbe::SimConfig d;
  config->rank_max = d.rank_max;
  config->n_pairs = d.n_pairs_target;
  config->rank_spread_divisor = d.rank_spread_divisor;
  config->base_ctr_scale = d.relevance.base_ctr_scale;
  config->base_ctr_exponent = d.relevance.base_ctr_exponent;
  config->noise_sigma = d.relevance.noise_sigma;
  config->seed = d.seed;
  config->threads = d.threads;
}

pbe_status pbe_simulate_pairs(const pbe_sim_config* config, pbe_pairs** pairs,
                              pbe_curve** truth, int64_t* candidates_drawn) {
  PBE_REQUIRE(config != nullptr && pairs != nullptr);
  return Guard([&] {
    auto result = pbe::SimulatePairs(ToSimConfig(*config));
    if (!result.ok()) return Fail(result.status());
    if (candidates_drawn != nullptr) {
      *candidates_drawn = result->candidates_drawn;
    }
    if (truth != nullptr) *truth = new pbe_curve{result->true_curve};
    *pairs = new pbe_pairs{std::move(result->pairs)};
    return PBE_OK;
  });
}

pbe_status pbe_simulate_impressions(const pbe_sim_config* config,
                                    int64_t n_candidates,
                                    pbe_impressions** out) {
  PBE_REQUIRE(config != nullptr && out != nullptr);
  return Guard([&] {
    auto records = pbe::SimulateImpressions(ToSimConfig(*config), n_candidates);
    if (!records.ok()) return Fail(records.status());
    *out = new pbe_impressions{*std::move(records)};
    return PBE_OK;
  });
}

pbe_status pbe_simulate_fixed_rank_pairs(const pbe_sim_config* config,
                                         int32_t rank_a, int32_t rank_b,
                                         int64_t n_pairs, pbe_pairs** out) {
  PBE_REQUIRE(config != nullptr && out != nullptr);
  return Guard([&] {
    auto groups = pbe::SimulateFixedRankGroups(ToSimConfig(*config), rank_a,
                                               rank_b, n_pairs);
    if (!groups.ok()) return Fail(groups.status());
    *out = new pbe_pairs{*std::move(groups)};
    return PBE_OK;
  });
}

pbe_status pbe_simulate_scored(const pbe_sim_config* config, int32_t max_rank,
                               int64_t n_per_rank, pbe_scored** out) {
  PBE_REQUIRE(config != nullptr && out != nullptr);
  return Guard([&] {
    auto data = pbe::SimulateScoredImpressions(ToSimConfig(*config), max_rank,
                                               n_per_rank);
    if (!data.ok()) return Fail(data.status());
    std::vector<std::string> names = pbe::ModelNames(*data);
    *out = new pbe_scored{*std::move(data), std::move(names)};
    return PBE_OK;
  });
}

// ---- Curves ----------------------------------------------------------------

pbe_status pbe_curve_from_values(const double* values, size_t n,
                                 pbe_curve** out) {
  PBE_REQUIRE(values != nullptr && out != nullptr);
  return Guard([&] {
    auto curve = pbe::PropensityCurve::Normalize(
        std::span<const double>(values, n));
    if (!curve.ok()) return Fail(curve.status());
    *out = new pbe_curve{*std::move(curve)};
    return PBE_OK;
  });
}

pbe_status pbe_curve_read_csv(const char* path, pbe_curve** out) {
  PBE_REQUIRE(out != nullptr);
  return Guard([&] {
    std::ifstream in;
    if (pbe_status s = OpenInput(path, in); s != PBE_OK) return s;
    auto curve = pbe::ReadCurveCsv(in);
    if (!curve.ok()) return FailParse(path, curve.status());
    *out = new pbe_curve{*std::move(curve)};
    return PBE_OK;
  });
}

pbe_status pbe_curve_write_csv(const pbe_curve* curve, const char* path) {
  PBE_REQUIRE(curve != nullptr);
  return Guard([&] {
    return RenderToFile(
        path, [&](std::ostream& o) { pbe::WriteCurveCsv(o, curve->curve); });
  });
}

int32_t pbe_curve_rank_max(const pbe_curve* curve) {
  return curve == nullptr ? 0 : curve->curve.rank_max();
}

pbe_status pbe_curve_value(const pbe_curve* curve, int32_t rank, double* out) {
  PBE_REQUIRE(curve != nullptr && out != nullptr);
  auto value = curve->curve.ValueAt(rank);
  if (!value.ok()) return Fail(value.status());
  *out = *value;
  return PBE_OK;
}

pbe_status pbe_curve_log_likelihood(const pbe_curve* curve,
                                    const pbe_pairs* pairs, double* out) {
  PBE_REQUIRE(curve != nullptr && pairs != nullptr && out != nullptr);
  return Guard([&] {
    auto ll = pbe::LogLikelihood(curve->curve, pairs->groups);
    if (!ll.ok()) return Fail(ll.status());
    *out = *ll;
    return PBE_OK;
  });
}

void pbe_curve_free(pbe_curve* curve) { delete curve; }

// ---- Estimation ------------------------------------------------------------

void pbe_mle_config_init(pbe_mle_config* config) {
  if (config == nullptr) return;
  const pbe::MleConfig d;
  config->parametrization = PBE_PARAM_INTERPOLATED;
  config->knots = nullptr;
  config->n_knots = 0;
  config->rank_max = d.rank_max;
  config->max_iterations = d.max_iterations;
  config->gradient_tolerance = d.gradient_tolerance;
  config->min_rank_observations = d.min_rank_observations;
}

void pbe_em_config_init(pbe_em_config* config) {
  if (config == nullptr) return;
  const pbe::EmConfig d;
  config->rank_max = d.rank_max;
  config->max_iterations = d.max_iterations;
  config->ll_tolerance = d.ll_tolerance;
  config->smoothing = d.smoothing;
}

pbe_status pbe_fit_mle(const pbe_pairs* pairs, const pbe_mle_config* config,
                       pbe_report** out) {
  PBE_REQUIRE(pairs != nullptr && config != nullptr && out != nullptr);
  return Guard([&] {
    pbe::MleConfig cfg;
    switch (config->parametrization) {
      case PBE_PARAM_DIRECT:
        cfg.parametrization = pbe::Parametrization::kDirect;
        break;
      case PBE_PARAM_INTERPOLATED:
        cfg.parametrization = pbe::Parametrization::kInterpolated;
        break;
      default:
        return Fail(PBE_INVALID_ARGUMENT, "unknown parametrization");
    }
    if (config->knots != nullptr) {
      auto knots = pbe::KnotSpec::Create(std::vector<int>(
          config->knots, config->knots + config->n_knots));
      if (!knots.ok()) return Fail(PBE_INVALID_ARGUMENT,
                                   std::string(knots.status().message()));
      cfg.knots = *std::move(knots);
    }
    cfg.rank_max = config->rank_max;
    cfg.max_iterations = config->max_iterations;
    cfg.gradient_tolerance = config->gradient_tolerance;
    cfg.min_rank_observations = config->min_rank_observations;
    auto report = pbe::FitMle(pairs->groups, cfg);
    if (!report.ok()) return Fail(report.status());
    *out = new pbe_report{*std::move(report)};
    return PBE_OK;
  });
}

pbe_status pbe_fit_em(const pbe_pairs* groups, const pbe_em_config* config,
                      pbe_report** out) {
  PBE_REQUIRE(groups != nullptr && config != nullptr && out != nullptr);
  return Guard([&] {
    pbe::EmConfig cfg;
    cfg.rank_max = config->rank_max;
    cfg.max_iterations = config->max_iterations;
    cfg.ll_tolerance = config->ll_tolerance;
    cfg.smoothing = config->smoothing;
    auto report = pbe::FitEm(groups->groups, cfg);
    if (!report.ok()) return Fail(report.status());
    *out = new pbe_report{*std::move(report)};
    return PBE_OK;
  });
}

void pbe_report_summary_get(const pbe_report* report,
                            pbe_report_summary* out) {
  if (report == nullptr || out == nullptr) return;
  const pbe::EstimationReport& r = report->report;
  out->initial_log_likelihood = r.initial_log_likelihood;
  out->final_log_likelihood = r.final_log_likelihood;
  out->iterations = r.iterations;
  out->converged = r.converged ? 1 : 0;
  out->n_pairs_used = r.n_pairs_used;
  out->n_interpolated_ranks = r.n_interpolated_ranks;
}

pbe_status pbe_report_curve(const pbe_report* report, pbe_curve** out) {
  PBE_REQUIRE(report != nullptr && out != nullptr);
  return Guard([&] {
    *out = new pbe_curve{report->report.curve};
    return PBE_OK;
  });
}

int64_t pbe_report_trace_size(const pbe_report* report) {
  return report == nullptr
             ? 0
             : static_cast<int64_t>(report->report.log_likelihood_trace.size());
}

pbe_status pbe_report_trace_value(const pbe_report* report, int64_t index,
                                  double* out) {
  PBE_REQUIRE(report != nullptr && out != nullptr);
  if (index < 0 || index >= pbe_report_trace_size(report)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("trace index ", index));
  }
  *out = report->report.log_likelihood_trace[index];
  return PBE_OK;
}

pbe_status pbe_report_write_json(const pbe_report* report, const char* path) {
  PBE_REQUIRE(report != nullptr);
  return Guard([&] {
    return RenderToFile(path, [&](std::ostream& o) {
      pbe::WriteReportJson(o, report->report);
    });
  });
}

void pbe_report_free(pbe_report* report) { delete report; }

// ---- Ratios ----------------------------------------------------------------

pbe_status pbe_ratio_single(const pbe_pairs* groups, int32_t rank_i,
                            int32_t rank_j, pbe_ratio_table** out) {
  PBE_REQUIRE(groups != nullptr && out != nullptr);
  return Guard([&] {
    auto estimate = pbe::EstimateRatio(groups->groups, rank_i, rank_j);
    if (!estimate.ok()) return Fail(estimate.status());
    *out = new pbe_ratio_table{{pbe::RatioRow{rank_i, rank_j, *estimate}}};
    return PBE_OK;
  });
}

pbe_status pbe_ratio_matrix(const pbe_pairs* groups, const int32_t* ranks,
                            size_t n_ranks, pbe_ratio_table** out) {
  PBE_REQUIRE(groups != nullptr && out != nullptr);
  return Guard([&] {
    std::vector<int> chosen;
    if (ranks != nullptr) chosen.assign(ranks, ranks + n_ranks);
    *out = new pbe_ratio_table{pbe::RatioMatrix(groups->groups, chosen)};
    return PBE_OK;
  });
}

int64_t pbe_ratio_table_size(const pbe_ratio_table* table) {
  return table == nullptr ? 0 : static_cast<int64_t>(table->rows.size());
}

pbe_status pbe_ratio_table_row(const pbe_ratio_table* table, int64_t index,
                               pbe_ratio_row* out) {
  PBE_REQUIRE(table != nullptr && out != nullptr);
  if (index < 0 || index >= pbe_ratio_table_size(table)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("row index ", index));
  }
  const pbe::RatioRow& row = table->rows[index];
  *out = {row.rank_i, row.rank_j, row.estimate.ratio, row.estimate.n_pairs};
  return PBE_OK;
}

pbe_status pbe_ratio_table_write_csv(const pbe_ratio_table* table,
                                     const char* path) {
  PBE_REQUIRE(table != nullptr);
  return Guard([&] {
    return RenderToFile(
        path, [&](std::ostream& o) { pbe::WriteRatioCsv(o, table->rows); });
  });
}

void pbe_ratio_table_free(pbe_ratio_table* table) { delete table; }

// ---- Weights ---------------------------------------------------------------

pbe_status pbe_annotate_weights(const char* impressions_path,
                                const pbe_curve* curve,
                                const char* output_path) {
  PBE_REQUIRE(curve != nullptr);
  return Guard([&] {
    std::ifstream in;
    if (pbe_status s = OpenInput(impressions_path, in); s != PBE_OK) return s;
    std::ostringstream buffer;
    const absl::Status status = pbe::AnnotateWeights(in, buffer, curve->curve);
    if (!status.ok()) return FailParse(impressions_path, status);
    return WriteFile(output_path, buffer.str());
  });
}

// ---- Evaluation ------------------------------------------------------------

pbe_status pbe_scored_read_jsonl(const char* path, pbe_scored** out) {
  PBE_REQUIRE(out != nullptr);
  return Guard([&] {
    std::ifstream in;
    if (pbe_status s = OpenInput(path, in); s != PBE_OK) return s;
    auto data = pbe::ParseScoredImpressions(in);
    if (!data.ok()) return FailParse(path, data.status());
    std::vector<std::string> names = pbe::ModelNames(*data);
    *out = new pbe_scored{*std::move(data), std::move(names)};
    return PBE_OK;
  });
}

pbe_status pbe_scored_write_jsonl(const pbe_scored* data, const char* path) {
  PBE_REQUIRE(data != nullptr);
  return Guard([&] {
    return RenderToFile(
        path, [&](std::ostream& o) { pbe::WriteScoredJsonl(o, data->data); });
  });
}

int64_t pbe_scored_size(const pbe_scored* data) {
  return data == nullptr ? 0 : static_cast<int64_t>(data->data.size());
}

int64_t pbe_scored_num_models(const pbe_scored* data) {
  return data == nullptr ? 0 : static_cast<int64_t>(data->model_names.size());
}

pbe_status pbe_scored_model_name(const pbe_scored* data, int64_t index,
                                 const char** out) {
  PBE_REQUIRE(data != nullptr && out != nullptr);
  if (index < 0 || index >= pbe_scored_num_models(data)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("model index ", index));
  }
  *out = data->model_names[index].c_str();
  return PBE_OK;
}

void pbe_scored_free(pbe_scored* data) { delete data; }

void pbe_bootstrap_config_init(pbe_bootstrap_config* config) {
  if (config == nullptr) return;
  const pbe::BootstrapOptions d;
  config->n_bootstrap = d.n_bootstrap;
  config->seed = d.seed;
  config->threads = d.threads;
  config->ranks = nullptr;
  config->n_ranks = 0;
}

pbe_status pbe_evaluate(const pbe_scored* data, const char* model_a,
                        const char* model_b,
                        const pbe_bootstrap_config* config,
                        pbe_eval_report** out) {
  PBE_REQUIRE(data != nullptr && model_a != nullptr && model_b != nullptr &&
              config != nullptr && out != nullptr);
  return Guard([&] {
    pbe::BootstrapOptions options;
    options.n_bootstrap = config->n_bootstrap;
    options.seed = config->seed;
    options.threads = config->threads;
    const std::vector<int> ranks =
        config->ranks != nullptr
            ? std::vector<int>(config->ranks, config->ranks + config->n_ranks)
            : pbe::DefaultEvalRanks();
    auto report =
        pbe::BootstrapCompare(data->data, ranks, model_a, model_b, options);
    if (!report.ok()) return Fail(report.status());
    *out = new pbe_eval_report{*std::move(report)};
    return PBE_OK;
  });
}

int64_t pbe_eval_report_size(const pbe_eval_report* report) {
  return report == nullptr ? 0
                           : static_cast<int64_t>(report->report.rows.size());
}

pbe_status pbe_eval_report_row(const pbe_eval_report* report, int64_t index,
                               pbe_eval_row* out) {
  PBE_REQUIRE(report != nullptr && out != nullptr);
  if (index < 0 || index >= pbe_eval_report_size(report)) {
    return Fail(PBE_OUT_OF_RANGE, absl::StrCat("row index ", index));
  }
  const pbe::EvalRow& row = report->report.rows[index];
  *out = {row.rank, row.mean_improvement, row.stddev, row.n_redrawn};
  return PBE_OK;
}

pbe_status pbe_eval_report_write_csv(const pbe_eval_report* report,
                                     const char* path) {
  PBE_REQUIRE(report != nullptr);
  return Guard([&] {
    return RenderToFile(
        path, [&](std::ostream& o) { pbe::WriteEvalCsv(o, report->report); });
  });
}

void pbe_eval_report_free(pbe_eval_report* report) { delete report; }

}  // extern "C"
