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

// pbe: position-bias propensity estimation from click logs.
//
//   pbe simulate  --pairs 40000 --seed 42 --output pairs.jsonl --truth true.csv
//   pbe extract   --input log.jsonl --output pairs.jsonl
//   pbe estimate  --input pairs.jsonl --method interp --output curve.csv
//   pbe weights   --curve curve.csv --input log.jsonl --output weighted.jsonl
//   pbe evaluate  --input scores.jsonl --output eval.csv
//
// Exit codes: 0 success (also for a fit that did not converge), 1 usage
// error, 2 data error. Every subcommand accepts --config FILE with one
// "key = value" per flag under a [subcommand] section; flags on the command
// line take precedence over the file.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbe/pbe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Owning wrappers for the C handles.
template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Impressions = Handle<pbe_impressions, pbe_impressions_free>;
using Pairs = Handle<pbe_pairs, pbe_pairs_free>;
using Curve = Handle<pbe_curve, pbe_curve_free>;
using Report = Handle<pbe_report, pbe_report_free>;
using RatioTable = Handle<pbe_ratio_table, pbe_ratio_table_free>;
using Scored = Handle<pbe_scored, pbe_scored_free>;
using EvalReport = Handle<pbe_eval_report, pbe_eval_report_free>;

// Reports the last library error and maps it to an exit code.
int Failure(pbe_status status, const std::string& what) {
  std::fprintf(stderr, "pbe: %s: %s\n", what.c_str(), pbe_last_error());
  return status == PBE_INVALID_ARGUMENT || status == PBE_IO_ERROR ? kExitUsage
                                                                  : kExitData;
}

int Usage(const std::string& message) {
  std::fprintf(stderr, "pbe: %s\n", message.c_str());
  return kExitUsage;
}

#define PBE_TRY(call, what)                                   \
  do {                                                        \
    if (const pbe_status s_ = (call); s_ != PBE_OK) {         \
      return Failure(s_, what);                               \
    }                                                         \
  } while (0)

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  pbe_sim_config config;
  std::string output;
  std::string truth;
  std::string impressions_output;
  int64_t candidates = 0;
  std::string scores_output;
  int32_t scores_max_rank = 32;
  int64_t scores_per_rank = 2000;
};

int RunSimulate(const SimulateArgs& args) {
  if (args.output.empty() && args.truth.empty() &&
      args.impressions_output.empty() && args.scores_output.empty()) {
    return Usage(
        "simulate: nothing to write; pass --output, --truth, "
        "--impressions-output or --scores-output");
  }
  if (!args.output.empty() || !args.truth.empty()) {
    pbe_pairs* pairs_raw = nullptr;
    pbe_curve* truth_raw = nullptr;
    int64_t drawn = 0;
    PBE_TRY(pbe_simulate_pairs(&args.config, &pairs_raw, &truth_raw, &drawn),
            "simulate");
    const Pairs pairs(pairs_raw);
    const Curve truth(truth_raw);
    if (!args.output.empty()) {
      PBE_TRY(pbe_pairs_write_jsonl(pairs.get(), args.output.c_str()),
              "writing pairs");
    }
    if (!args.truth.empty()) {
      PBE_TRY(pbe_curve_write_csv(truth.get(), args.truth.c_str()),
              "writing true curve");
    }
    std::printf("retained %lld pairs from %lld candidates\n",
                static_cast<long long>(pbe_pairs_size(pairs.get())),
                static_cast<long long>(drawn));
  }
  if (!args.impressions_output.empty()) {
    const int64_t n =
        args.candidates > 0 ? args.candidates : args.config.n_pairs;
    pbe_impressions* raw = nullptr;
    PBE_TRY(pbe_simulate_impressions(&args.config, n, &raw), "simulate");
    const Impressions records(raw);
    PBE_TRY(pbe_impressions_write_jsonl(records.get(),
                                        args.impressions_output.c_str()),
            "writing impressions");
    std::printf("wrote %lld impressions from %lld candidates\n",
                static_cast<long long>(pbe_impressions_size(records.get())),
                static_cast<long long>(n));
  }
  if (!args.scores_output.empty()) {
    pbe_scored* raw = nullptr;
    PBE_TRY(pbe_simulate_scored(&args.config, args.scores_max_rank,
                                args.scores_per_rank, &raw),
            "simulate");
    const Scored scored(raw);
    PBE_TRY(pbe_scored_write_jsonl(scored.get(), args.scores_output.c_str()),
            "writing scores");
    std::printf("wrote %lld scored impressions\n",
                static_cast<long long>(pbe_scored_size(scored.get())));
  }
  return kExitOk;
}

void AddSimulate(CLI::App& app, SimulateArgs& args, int& exit_code) {
  pbe_sim_config_init(&args.config);
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Generate synthetic click data with a known propensity curve");
  cmd->add_option("--pairs", args.config.n_pairs,
                  "Retained two-rank, one-click pairs to generate")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", args.config.seed, "Random seed")
      ->capture_default_str();
  cmd->add_option("--rank-max", args.config.rank_max, "Largest rank")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  cmd->add_option("--threads", args.config.threads,
                  "Worker threads (output does not depend on this)")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--rank-spread-divisor", args.config.rank_spread_divisor,
                  "Rank standard deviation is rank_mean / divisor")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--base-ctr-scale", args.config.base_ctr_scale,
                  "Relevance model: scale of the click-rate power law")
      ->capture_default_str();
  cmd->add_option("--base-ctr-exponent", args.config.base_ctr_exponent,
                  "Relevance model: exponent of the click-rate power law")
      ->capture_default_str();
  cmd->add_option("--noise-sigma", args.config.noise_sigma,
                  "Relevance model: log-normal noise scale")
      ->capture_default_str();
  cmd->add_option("--output", args.output, "Pairs JSONL to write");
  cmd->add_option("--truth", args.truth, "True curve CSV to write");
  cmd->add_option("--impressions-output", args.impressions_output,
                  "Raw impression log JSONL to write");
  cmd->add_option("--candidates", args.candidates,
                  "Candidates in the raw impression log (default: --pairs)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--scores-output", args.scores_output,
                  "Scored fixed-rank evaluation set JSONL to write");
  cmd->add_option("--scores-max-rank", args.scores_max_rank,
                  "Scored set covers ranks 1..N")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scores-per-rank", args.scores_per_rank,
                  "Scored impressions per rank")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->callback([&] { exit_code = RunSimulate(args); });
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string input;
  std::string output;
  std::string summary_output;
  int32_t rank_max = 500;
  std::string mode = "strict";
  std::string platform;
  std::string sort_type;
  bool allow_cross_day = false;
  bool ignore_price = false;
  bool include_auctions = false;
};

int RunExtract(const ExtractArgs& args) {
  pbe_extract_config config;
  pbe_extract_config_init(&config);
  config.require_same_day = args.allow_cross_day ? 0 : 1;
  config.require_same_price = args.ignore_price ? 0 : 1;
  config.exclude_auctions = args.include_auctions ? 0 : 1;
  config.platform_filter = args.platform.empty() ? nullptr : args.platform.c_str();
  config.sort_type_filter =
      args.sort_type.empty() ? nullptr : args.sort_type.c_str();
  config.selection_mode = args.mode == "strict"    ? PBE_SELECT_TWO_RANKS_ONE_CLICK
                          : args.mode == "relaxed" ? PBE_SELECT_RELAXED
                                                   : PBE_SELECT_NONE;

  pbe_impressions* raw = nullptr;
  PBE_TRY(pbe_impressions_read_jsonl(args.input.c_str(), args.rank_max, &raw),
          "reading impressions");
  const Impressions records(raw);
  pbe_pairs* pairs_raw = nullptr;
  pbe_extract_summary s;
  PBE_TRY(pbe_extract(records.get(), &config, &pairs_raw, &s), "extract");
  const Pairs pairs(pairs_raw);
  PBE_TRY(pbe_pairs_write_jsonl(pairs.get(), args.output.c_str()),
          "writing pairs");

  nlohmann::ordered_json summary;
  summary["records_seen"] = s.records_seen;
  summary["records_dropped_platform"] = s.records_dropped_platform;
  summary["records_dropped_sort_type"] = s.records_dropped_sort_type;
  summary["groups_seen"] = s.groups_seen;
  summary["groups_dropped_auction"] = s.groups_dropped_auction;
  summary["groups_dropped_price"] = s.groups_dropped_price;
  summary["groups_dropped_selection"] = s.groups_dropped_selection;
  summary["groups_retained"] = s.groups_retained;
  std::printf("%s\n", summary.dump().c_str());
  if (!args.summary_output.empty()) {
    std::ofstream out(args.summary_output, std::ios::binary | std::ios::trunc);
    out << summary.dump(2) << '\n';
    if (!out) return Usage("cannot write " + args.summary_output);
  }
  return kExitOk;
}

void AddExtract(CLI::App& app, ExtractArgs& args, int& exit_code) {
  CLI::App* cmd = app.add_subcommand(
      "extract", "Group an impression log into query-document pairs");
  cmd->add_option("--input", args.input, "Impression log JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", args.output, "Pairs JSONL to write")->required();
  cmd->add_option("--summary-output", args.summary_output,
                  "Filter counts JSON to write");
  cmd->add_option("--rank-max", args.rank_max,
                  "Largest accepted rank; larger ranks are a data error")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000000));
  cmd->add_option("--mode", args.mode,
                  "Selection: strict (two ranks, one click), relaxed "
                  "(two or more ranks, one or more clicks) or none")
      ->capture_default_str()
      ->check(CLI::IsMember({"strict", "relaxed", "none"}));
  cmd->add_option("--platform", args.platform, "Keep only this platform")
      ->check(CLI::IsMember({"web", "mobile"}));
  cmd->add_option("--sort-type", args.sort_type, "Keep only this sort type");
  cmd->add_flag("--allow-cross-day", args.allow_cross_day,
                "Group appearances from different days together");
  cmd->add_flag("--ignore-price", args.ignore_price,
                "Do not require an unchanged price within a group");
  cmd->add_flag("--include-auctions", args.include_auctions,
                "Keep groups with auction listings");
  cmd->callback([&] { exit_code = RunExtract(args); });
}

// ---- estimate --------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string output;
  std::string report;
  std::string method = "interp";
  int32_t rank_max = 500;
  std::vector<int32_t> knots;
  int32_t max_iterations = 0;
  double tolerance = 0.0;
  int32_t min_rank_observations = 1;
  double smoothing = 1.0;
  double ll_tolerance = 0.0;
  std::optional<int32_t> rank_i;
  std::optional<int32_t> rank_j;
  bool matrix = false;
  std::vector<int32_t> ranks;
  // Used to tell which method-specific flags were given.
  CLI::App* cmd = nullptr;
};

int WriteFit(const pbe_report* report, const EstimateArgs& args) {
  pbe_curve* raw = nullptr;
  PBE_TRY(pbe_report_curve(report, &raw), "estimate");
  const Curve curve(raw);
  PBE_TRY(pbe_curve_write_csv(curve.get(), args.output.c_str()),
          "writing curve");
  if (!args.report.empty()) {
    PBE_TRY(pbe_report_write_json(report, args.report.c_str()),
            "writing report");
  }
  pbe_report_summary s;
  pbe_report_summary_get(report, &s);
  std::printf(
      "method=%s pairs=%lld iterations=%d converged=%s "
      "log_likelihood=%.9g\n",
      args.method.c_str(), static_cast<long long>(s.n_pairs_used),
      s.iterations, s.converged ? "true" : "false", s.final_log_likelihood);
  if (!s.converged) {
    std::fprintf(stderr,
                 "pbe: warning: the fit did not converge in %d iterations\n",
                 s.iterations);
  }
  return kExitOk;
}

int RunEstimate(const EstimateArgs& args) {
  const auto given = [&](const char* flag) {
    return args.cmd->get_option(flag)->count() > 0;
  };
  const bool is_ratio = args.method == "ratio";
  const bool is_em = args.method == "em";
  const bool is_mle = !is_ratio && !is_em;
  if (given("--knots") && args.method != "interp") {
    return Usage("--knots applies only to --method interp");
  }
  if (given("--min-rank-observations") && args.method != "direct") {
    return Usage("--min-rank-observations applies only to --method direct");
  }
  if ((given("--max-iterations") || given("--tolerance")) && is_ratio) {
    return Usage("--max-iterations and --tolerance do not apply to ratio");
  }
  if ((given("--smoothing") || given("--ll-tolerance")) && !is_em) {
    return Usage("--smoothing and --ll-tolerance apply only to --method em");
  }
  if (given("--tolerance") && is_em) {
    return Usage("use --ll-tolerance with --method em");
  }
  if (!is_ratio && (given("--rank-i") || given("--rank-j") || args.matrix ||
                    given("--ranks"))) {
    return Usage("--rank-i, --rank-j, --matrix and --ranks apply only to "
                 "--method ratio");
  }

  pbe_pairs* raw = nullptr;
  PBE_TRY(pbe_pairs_read_jsonl(args.input.c_str(), &raw), "reading pairs");
  const Pairs pairs(raw);

  if (is_ratio) {
    const bool pair_given = args.rank_i.has_value() && args.rank_j.has_value();
    const bool any_rank = args.rank_i.has_value() || args.rank_j.has_value();
    if (args.matrix ? any_rank : !pair_given) {
      return Usage("--method ratio needs either --rank-i and --rank-j, or "
                   "--matrix");
    }
    if (given("--ranks") && !args.matrix) {
      return Usage("--ranks applies only with --matrix");
    }
    pbe_ratio_table* table_raw = nullptr;
    if (args.matrix) {
      PBE_TRY(pbe_ratio_matrix(pairs.get(),
                               args.ranks.empty() ? nullptr : args.ranks.data(),
                               args.ranks.size(), &table_raw),
              "ratio");
    } else {
      PBE_TRY(pbe_ratio_single(pairs.get(), *args.rank_i, *args.rank_j,
                               &table_raw),
              "ratio");
    }
    const RatioTable table(table_raw);
    PBE_TRY(pbe_ratio_table_write_csv(table.get(), args.output.c_str()),
            "writing ratios");
    std::printf("method=ratio rows=%lld\n",
                static_cast<long long>(pbe_ratio_table_size(table.get())));
    return kExitOk;
  }

  pbe_report* report_raw = nullptr;
  if (is_mle) {
    pbe_mle_config config;
    pbe_mle_config_init(&config);
    config.parametrization =
        args.method == "direct" ? PBE_PARAM_DIRECT : PBE_PARAM_INTERPOLATED;
    if (!args.knots.empty()) {
      config.knots = args.knots.data();
      config.n_knots = args.knots.size();
    }
    config.rank_max = args.rank_max;
    if (given("--max-iterations")) config.max_iterations = args.max_iterations;
    if (given("--tolerance")) config.gradient_tolerance = args.tolerance;
    config.min_rank_observations = args.min_rank_observations;
    PBE_TRY(pbe_fit_mle(pairs.get(), &config, &report_raw), "estimate");
  } else {
    pbe_em_config config;
    pbe_em_config_init(&config);
    config.rank_max = args.rank_max;
    if (given("--max-iterations")) config.max_iterations = args.max_iterations;
    if (given("--ll-tolerance")) config.ll_tolerance = args.ll_tolerance;
    config.smoothing = args.smoothing;
    PBE_TRY(pbe_fit_em(pairs.get(), &config, &report_raw), "estimate");
  }
  const Report report(report_raw);
  return WriteFit(report.get(), args);
}

void AddEstimate(CLI::App& app, EstimateArgs& args, int& exit_code) {
  CLI::App* cmd = app.add_subcommand(
      "estimate", "Estimate the propensity curve from pairs");
  args.cmd = cmd;
  cmd->add_option("--input", args.input, "Pairs JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", args.output,
                  "Curve CSV to write (ratio CSV for --method ratio)")
      ->required();
  cmd->add_option("--report", args.report, "Fit report JSON to write");
  cmd->add_option("--method", args.method, "direct, interp, ratio or em")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "interp", "ratio", "em"}));
  cmd->add_option("--rank-max", args.rank_max, "Largest rank of the curve")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  cmd->add_option("--knots", args.knots,
                  "Comma-separated knot ranks for interp, starting at 1 and "
                  "ending at --rank-max")
      ->delimiter(',');
  cmd->add_option("--max-iterations", args.max_iterations,
                  "Iteration cap (MLE default 1000, EM default 200)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", args.tolerance,
                  "MLE gradient tolerance (default 1e-8)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-rank-observations", args.min_rank_observations,
                  "direct: ranks with fewer appearances are interpolated")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--smoothing", args.smoothing, "em: add-alpha smoothing")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--ll-tolerance", args.ll_tolerance,
                  "em: relative log-likelihood change to stop at "
                  "(default 1e-7)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--rank-i", args.rank_i, "ratio: numerator rank")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rank-j", args.rank_j, "ratio: denominator rank")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--matrix", args.matrix,
                "ratio: every co-occurring rank pair i < j");
  cmd->add_option("--ranks", args.ranks,
                  "ratio --matrix: comma-separated ranks to include")
      ->delimiter(',');
  cmd->callback([&] { exit_code = RunEstimate(args); });
}

// ---- weights ---------------------------------------------------------------

struct WeightsArgs {
  std::string curve;
  std::string input;
  std::string output;
};

int RunWeights(const WeightsArgs& args) {
  pbe_curve* raw = nullptr;
  PBE_TRY(pbe_curve_read_csv(args.curve.c_str(), &raw), "reading curve");
  const Curve curve(raw);
  PBE_TRY(pbe_annotate_weights(args.input.c_str(), curve.get(),
                               args.output.c_str()),
          "weights");
  return kExitOk;
}

void AddWeights(CLI::App& app, WeightsArgs& args, int& exit_code) {
  CLI::App* cmd = app.add_subcommand(
      "weights", "Add inverse-propensity weights to an impression log");
  cmd->add_option("--curve", args.curve, "Curve CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--input", args.input, "Impression log JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", args.output, "Weighted JSONL to write")
      ->required();
  cmd->callback([&] { exit_code = RunWeights(args); });
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string input;
  std::string output;
  std::vector<int32_t> ranks;
  int32_t bootstrap = 1000;
  uint64_t seed = 0;
  int32_t threads = 1;
  std::string model_a;
  std::string model_b;
};

int RunEvaluate(const EvaluateArgs& args) {
  pbe_scored* raw = nullptr;
  PBE_TRY(pbe_scored_read_jsonl(args.input.c_str(), &raw), "reading scores");
  const Scored scored(raw);

  std::string model_a = args.model_a;
  std::string model_b = args.model_b;
  if (model_a.empty() != model_b.empty()) {
    return Usage("pass both --model-a and --model-b, or neither");
  }
  if (model_a.empty()) {
    if (pbe_scored_num_models(scored.get()) != 2) {
      return Usage("the scores name " +
                   std::to_string(pbe_scored_num_models(scored.get())) +
                   " models; choose two with --model-a and --model-b");
    }
    const char* name = nullptr;
    PBE_TRY(pbe_scored_model_name(scored.get(), 0, &name), "evaluate");
    model_a = name;
    PBE_TRY(pbe_scored_model_name(scored.get(), 1, &name), "evaluate");
    model_b = name;
  }

  pbe_bootstrap_config config;
  pbe_bootstrap_config_init(&config);
  config.n_bootstrap = args.bootstrap;
  config.seed = args.seed;
  config.threads = args.threads;
  if (!args.ranks.empty()) {
    config.ranks = args.ranks.data();
    config.n_ranks = args.ranks.size();
  }
  pbe_eval_report* report_raw = nullptr;
  PBE_TRY(pbe_evaluate(scored.get(), model_a.c_str(), model_b.c_str(), &config,
                       &report_raw),
          "evaluate");
  const EvalReport report(report_raw);
  PBE_TRY(pbe_eval_report_write_csv(report.get(), args.output.c_str()),
          "writing report");
  for (int64_t i = 0; i < pbe_eval_report_size(report.get()); ++i) {
    pbe_eval_row row;
    PBE_TRY(pbe_eval_report_row(report.get(), i, &row), "evaluate");
    std::printf("rank %d: %s - %s = %+.4f (sd %.4f)\n", row.rank,
                model_a.c_str(), model_b.c_str(), row.mean_improvement,
                row.stddev);
  }
  return kExitOk;
}

void AddEvaluate(CLI::App& app, EvaluateArgs& args, int& exit_code) {
  CLI::App* cmd = app.add_subcommand(
      "evaluate", "Compare two scorers by fixed-rank AUC with bootstrap");
  cmd->add_option("--input", args.input, "Scored impressions JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", args.output, "Evaluation CSV to write")
      ->required();
  cmd->add_option("--ranks", args.ranks,
                  "Comma-separated fixed ranks (default 1,2,4,8,16,32)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bootstrap", args.bootstrap, "Bootstrap resamples")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000000));
  cmd->add_option("--seed", args.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", args.threads,
                  "Worker threads (output does not depend on this)")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--model-a", args.model_a,
                  "Model whose improvement is reported (default: first of "
                  "exactly two models, by name)");
  cmd->add_option("--model-b", args.model_b, "Baseline model");
  cmd->callback([&] { exit_code = RunEvaluate(args); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Position-bias propensity estimation from click logs", "pbe");
  app.set_version_flag("--version", pbe_version());
  app.set_config("--config", "", "INI/TOML file with one key per flag");
  app.allow_config_extras(false);
  app.require_subcommand(1);

  int exit_code = kExitOk;
  SimulateArgs simulate;
  ExtractArgs extract;
  EstimateArgs estimate;
  WeightsArgs weights;
  EvaluateArgs evaluate;
  AddSimulate(app, simulate, exit_code);
  AddExtract(app, extract, exit_code);
  AddEstimate(app, estimate, exit_code);
  AddWeights(app, weights, exit_code);
  AddEvaluate(app, evaluate, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return exit_code;
}
