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

/*
 * C interface to the position-bias estimation library.
 *
 * Conventions:
 *   - Every fallible call returns a pbe_status. On failure, pbe_last_error()
 *     describes the problem until the next failing call on the same thread,
 *     and output handles are left untouched.
 *   - Objects are opaque handles created by the library and released with the
 *     matching *_free function. Passing NULL to *_free is a no-op.
 *   - Config structs must be initialised with their *_init function before
 *     fields are overridden, so new fields get defaults.
 *   - Ranks are 1-based. Files are written only when the whole output is
 *     ready, so a failed call never leaves a partial file behind.
 */

#ifndef PBE_PBE_H_
#define PBE_PBE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PBE_BUILDING_LIBRARY)
#define PBE_API __attribute__((visibility("default")))
#else
#define PBE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pbe_status {
  PBE_OK = 0,
  PBE_INVALID_ARGUMENT = 1, /* bad config value or NULL pointer */
  PBE_OUT_OF_RANGE = 2,     /* a rank or index outside its valid range */
  PBE_DATA_ERROR = 3,       /* malformed input or data that cannot be fitted */
  PBE_IO_ERROR = 4,         /* file could not be opened, read or written */
  PBE_INTERNAL = 5
} pbe_status;

PBE_API const char* pbe_status_name(pbe_status status);
PBE_API const char* pbe_last_error(void);
PBE_API const char* pbe_version(void);

typedef struct pbe_impressions pbe_impressions;
typedef struct pbe_pairs pbe_pairs;
typedef struct pbe_curve pbe_curve;
typedef struct pbe_report pbe_report;
typedef struct pbe_ratio_table pbe_ratio_table;
typedef struct pbe_scored pbe_scored;
typedef struct pbe_eval_report pbe_eval_report;

/* ---- Impression logs ---------------------------------------------------- */

/* One JSON object per line; ranks above rank_max are rejected. */
PBE_API pbe_status pbe_impressions_read_jsonl(const char* path,
                                              int32_t rank_max,
                                              pbe_impressions** out);
PBE_API pbe_status pbe_impressions_write_jsonl(const pbe_impressions* records,
                                               const char* path);
PBE_API int64_t pbe_impressions_size(const pbe_impressions* records);
PBE_API void pbe_impressions_free(pbe_impressions* records);

/* ---- Query-document pair groups ----------------------------------------- */

PBE_API pbe_status pbe_pairs_read_jsonl(const char* path, pbe_pairs** out);
PBE_API pbe_status pbe_pairs_write_jsonl(const pbe_pairs* pairs,
                                         const char* path);
PBE_API int64_t pbe_pairs_size(const pbe_pairs* pairs);
PBE_API pbe_status pbe_pairs_num_appearances(const pbe_pairs* pairs,
                                             int64_t index, int64_t* out);
PBE_API pbe_status pbe_pairs_appearance(const pbe_pairs* pairs, int64_t index,
                                        int64_t k, int32_t* rank,
                                        int* clicked);
PBE_API void pbe_pairs_free(pbe_pairs* pairs);

/* ---- Extraction --------------------------------------------------------- */

typedef enum pbe_selection_mode {
  /* Exactly two appearances at distinct ranks, exactly one clicked. */
  PBE_SELECT_TWO_RANKS_ONE_CLICK = 0,
  /* At least two distinct ranks and at least one click. */
  PBE_SELECT_RELAXED = 1,
  /* Grouping and filters only; input for the ratio and EM estimators. */
  PBE_SELECT_NONE = 2
} pbe_selection_mode;

typedef struct pbe_extract_config {
  int require_same_day;
  int require_same_price;
  int exclude_auctions;
  const char* platform_filter;  /* "web", "mobile" or NULL for any */
  const char* sort_type_filter; /* NULL for any */
  pbe_selection_mode selection_mode;
} pbe_extract_config;

typedef struct pbe_extract_summary {
  int64_t records_seen;
  int64_t records_dropped_platform;
  int64_t records_dropped_sort_type;
  int64_t groups_seen;
  int64_t groups_dropped_auction;
  int64_t groups_dropped_price;
  int64_t groups_dropped_selection;
  int64_t groups_retained;
} pbe_extract_summary;

PBE_API void pbe_extract_config_init(pbe_extract_config* config);
/* `summary` may be NULL. */
PBE_API pbe_status pbe_extract(const pbe_impressions* records,
                               const pbe_extract_config* config,
                               pbe_pairs** out, pbe_extract_summary* summary);

/* ---- Simulation --------------------------------------------------------- */

typedef struct pbe_sim_config {
  int32_t rank_max;
  int64_t n_pairs;
  double rank_spread_divisor;
  double base_ctr_scale;
  double base_ctr_exponent;
  double noise_sigma;
  uint64_t seed;
  int32_t threads;
} pbe_sim_config;

PBE_API void pbe_sim_config_init(pbe_sim_config* config);
/* Retained two-rank, one-click pairs plus the true curve. Either output
 * pointer except `pairs` may be NULL. */
PBE_API pbe_status pbe_simulate_pairs(const pbe_sim_config* config,
                                      pbe_pairs** pairs, pbe_curve** truth,
                                      int64_t* candidates_drawn);
/* Raw impression records of the first n_candidates candidates. */
PBE_API pbe_status pbe_simulate_impressions(const pbe_sim_config* config,
                                            int64_t n_candidates,
                                            pbe_impressions** out);
/* Pairs shown once at each of two fixed ranks, no click filter. */
PBE_API pbe_status pbe_simulate_fixed_rank_pairs(const pbe_sim_config* config,
                                                 int32_t rank_a,
                                                 int32_t rank_b,
                                                 int64_t n_pairs,
                                                 pbe_pairs** out);
/* Scored impressions at ranks 1..max_rank with models "propensity_aware" and
 * "propensity_blind". */
PBE_API pbe_status pbe_simulate_scored(const pbe_sim_config* config,
                                       int32_t max_rank, int64_t n_per_rank,
                                       pbe_scored** out);

/* ---- Propensity curves -------------------------------------------------- */

/* Normalises by values[0]; every value must be finite and positive. */
PBE_API pbe_status pbe_curve_from_values(const double* values, size_t n,
                                         pbe_curve** out);
PBE_API pbe_status pbe_curve_read_csv(const char* path, pbe_curve** out);
PBE_API pbe_status pbe_curve_write_csv(const pbe_curve* curve,
                                       const char* path);
PBE_API int32_t pbe_curve_rank_max(const pbe_curve* curve);
PBE_API pbe_status pbe_curve_value(const pbe_curve* curve, int32_t rank,
                                   double* out);
/* Conditional log-likelihood of two-rank, one-click pairs under `curve`. */
PBE_API pbe_status pbe_curve_log_likelihood(const pbe_curve* curve,
                                            const pbe_pairs* pairs,
                                            double* out);
PBE_API void pbe_curve_free(pbe_curve* curve);

/* ---- Estimation --------------------------------------------------------- */

typedef enum pbe_parametrization {
  PBE_PARAM_DIRECT = 0,
  PBE_PARAM_INTERPOLATED = 1
} pbe_parametrization;

typedef struct pbe_mle_config {
  pbe_parametrization parametrization;
  /* NULL selects the default knot set (interpolated only). */
  const int32_t* knots;
  size_t n_knots;
  int32_t rank_max;
  int32_t max_iterations;
  double gradient_tolerance;
  int32_t min_rank_observations; /* direct only */
} pbe_mle_config;

typedef struct pbe_em_config {
  int32_t rank_max;
  int32_t max_iterations;
  double ll_tolerance;
  double smoothing;
} pbe_em_config;

typedef struct pbe_report_summary {
  double initial_log_likelihood;
  double final_log_likelihood;
  int32_t iterations;
  int converged;
  int64_t n_pairs_used;
  int32_t n_interpolated_ranks;
} pbe_report_summary;

PBE_API void pbe_mle_config_init(pbe_mle_config* config);
PBE_API void pbe_em_config_init(pbe_em_config* config);
PBE_API pbe_status pbe_fit_mle(const pbe_pairs* pairs,
                               const pbe_mle_config* config, pbe_report** out);
/* Expects groups extracted with PBE_SELECT_NONE. */
PBE_API pbe_status pbe_fit_em(const pbe_pairs* groups,
                              const pbe_em_config* config, pbe_report** out);

PBE_API void pbe_report_summary_get(const pbe_report* report,
                                    pbe_report_summary* out);
/* Returns a new curve owned by the caller. */
PBE_API pbe_status pbe_report_curve(const pbe_report* report, pbe_curve** out);
PBE_API int64_t pbe_report_trace_size(const pbe_report* report);
PBE_API pbe_status pbe_report_trace_value(const pbe_report* report,
                                          int64_t index, double* out);
PBE_API pbe_status pbe_report_write_json(const pbe_report* report,
                                         const char* path);
PBE_API void pbe_report_free(pbe_report* report);

/* ---- Pairwise ratios ---------------------------------------------------- */

typedef struct pbe_ratio_row {
  int32_t rank_i;
  int32_t rank_j;
  double ratio;
  int64_t n_pairs;
} pbe_ratio_row;

/* p(rank_i) / p(rank_j) from groups seen at both ranks. */
PBE_API pbe_status pbe_ratio_single(const pbe_pairs* groups, int32_t rank_i,
                                    int32_t rank_j, pbe_ratio_table** out);
/* Every co-occurring rank pair i < j; ranks == NULL means all ranks. */
PBE_API pbe_status pbe_ratio_matrix(const pbe_pairs* groups,
                                    const int32_t* ranks, size_t n_ranks,
                                    pbe_ratio_table** out);
PBE_API int64_t pbe_ratio_table_size(const pbe_ratio_table* table);
PBE_API pbe_status pbe_ratio_table_row(const pbe_ratio_table* table,
                                       int64_t index, pbe_ratio_row* out);
PBE_API pbe_status pbe_ratio_table_write_csv(const pbe_ratio_table* table,
                                             const char* path);
PBE_API void pbe_ratio_table_free(pbe_ratio_table* table);

/* ---- Inverse-propensity weights ----------------------------------------- */

/* Copies the impressions file adding "weight": 1 / p(rank) to every line. */
PBE_API pbe_status pbe_annotate_weights(const char* impressions_path,
                                        const pbe_curve* curve,
                                        const char* output_path);

/* ---- Fixed-rank evaluation ---------------------------------------------- */

typedef struct pbe_bootstrap_config {
  int32_t n_bootstrap;
  uint64_t seed;
  int32_t threads;
  /* NULL selects ranks 1, 2, 4, 8, 16, 32. */
  const int32_t* ranks;
  size_t n_ranks;
} pbe_bootstrap_config;

typedef struct pbe_eval_row {
  int32_t rank;
  double mean_improvement;
  double stddev;
  int64_t n_redrawn;
} pbe_eval_row;

PBE_API pbe_status pbe_scored_read_jsonl(const char* path, pbe_scored** out);
PBE_API pbe_status pbe_scored_write_jsonl(const pbe_scored* data,
                                          const char* path);
PBE_API int64_t pbe_scored_size(const pbe_scored* data);
PBE_API int64_t pbe_scored_num_models(const pbe_scored* data);
/* Model names in sorted order; the string lives as long as `data`. */
PBE_API pbe_status pbe_scored_model_name(const pbe_scored* data, int64_t index,
                                         const char** out);
PBE_API void pbe_scored_free(pbe_scored* data);

PBE_API void pbe_bootstrap_config_init(pbe_bootstrap_config* config);
/* AUC(model_a) - AUC(model_b) per fixed rank, with bootstrap spread. */
PBE_API pbe_status pbe_evaluate(const pbe_scored* data, const char* model_a,
                                const char* model_b,
                                const pbe_bootstrap_config* config,
                                pbe_eval_report** out);
PBE_API int64_t pbe_eval_report_size(const pbe_eval_report* report);
PBE_API pbe_status pbe_eval_report_row(const pbe_eval_report* report,
                                       int64_t index, pbe_eval_row* out);
PBE_API pbe_status pbe_eval_report_write_csv(const pbe_eval_report* report,
                                             const char* path);
PBE_API void pbe_eval_report_free(pbe_eval_report* report);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif /* PBE_PBE_H_ */
