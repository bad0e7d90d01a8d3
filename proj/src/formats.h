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

// File formats.
//
//   pairs JSONL   {"query_id":..,"doc_id":..,"appearances":[{"rank":..,"clicked":..},..]}
//   curve CSV     header "rank,propensity", one row per rank 1..rank_max,
//                 propensity printed with 9 significant digits
//   report JSON   fit diagnostics
//   ratio CSV     rank_i,rank_j,ratio,n_pairs
//   eval CSV      rank,model_pair,mean_improvement,stddev,n_bootstrap
//
// All writers are deterministic functions of their input.

#ifndef PBE_FORMATS_H_
#define PBE_FORMATS_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "domain.h"
#include "ipw_eval.h"
#include "ratio.h"

namespace pbe {

// "%.9g".
std::string FormatSignificant9(double value);

void WritePairsJsonl(std::ostream& out, std::span<const PairGroup> pairs);
absl::StatusOr<std::vector<PairGroup>> ReadPairsJsonl(std::istream& in);

void WriteImpressionsJsonl(std::ostream& out,
                           std::span<const ImpressionRecord> records);

void WriteScoredJsonl(std::ostream& out,
                      std::span<const ScoredImpression> impressions);

void WriteCurveCsv(std::ostream& out, const PropensityCurve& curve);
// Rows must cover ranks 1..n consecutively. The CSV does not record how the
// curve was produced, so the caller supplies `method`.
absl::StatusOr<PropensityCurve> ReadCurveCsv(
    std::istream& in, CurveMethod method = CurveMethod::kDirect);

void WriteReportJson(std::ostream& out, const EstimationReport& report);

void WriteRatioCsv(std::ostream& out, std::span<const RatioRow> rows);

void WriteEvalCsv(std::ostream& out, const EvalReport& report);

// Copies an impressions JSONL stream, adding "weight": 1 / p(rank) to every
// object. Fails without a usable result if any line is malformed or has a rank
// outside the curve; the message lists the offending line numbers.
absl::Status AnnotateWeights(std::istream& in, std::ostream& out,
                             const PropensityCurve& curve);

}  // namespace pbe

#endif  // PBE_FORMATS_H_
