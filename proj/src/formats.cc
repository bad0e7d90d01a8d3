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

#include "formats.h"

#include <cstdio>
#include <cstdlib>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "status_macros.h"

namespace pbe {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr size_t kMaxListedLines = 20;

absl::StatusOr<PairGroup> ParsePairLine(const std::string& line) {
  const Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    return absl::InvalidArgumentError("malformed JSON object");
  }
  const auto q = obj.find("query_id");
  const auto d = obj.find("doc_id");
  const auto apps = obj.find("appearances");
  if (q == obj.end() || !q->is_string() || d == obj.end() || !d->is_string()) {
    return absl::InvalidArgumentError("query_id and doc_id must be strings");
  }
  if (apps == obj.end() || !apps->is_array() || apps->empty()) {
    return absl::InvalidArgumentError("appearances must be a non-empty array");
  }
  PairGroup g{q->get<std::string>(), d->get<std::string>(), {}};
  for (const Json& a : *apps) {
    const auto rank = a.find("rank");
    const auto clicked = a.find("clicked");
    if (!a.is_object() || rank == a.end() || !rank->is_number_integer() ||
        clicked == a.end() || !clicked->is_boolean()) {
      return absl::InvalidArgumentError(
          "each appearance needs an integer rank and a boolean clicked");
    }
    if (rank->get<int64_t>() < 1) {
      return absl::OutOfRangeError("appearance rank must be >= 1");
    }
    g.appearances.push_back(
        {static_cast<int>(rank->get<int64_t>()), clicked->get<bool>()});
  }
  return g;
}

std::string ListLines(const std::vector<int64_t>& lines) {
  std::vector<int64_t> shown(
      lines.begin(), lines.begin() + std::min(lines.size(), kMaxListedLines));
  std::string out = absl::StrJoin(shown, ", ");
  if (lines.size() > shown.size()) {
    absl::StrAppend(&out, " and ", lines.size() - shown.size(), " more");
  }
  return out;
}

}  // namespace

std::string FormatSignificant9(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void WritePairsJsonl(std::ostream& out, std::span<const PairGroup> pairs) {
  for (const PairGroup& g : pairs) {
    OrderedJson obj;
    obj["query_id"] = g.query_id;
    obj["doc_id"] = g.doc_id;
    OrderedJson apps = OrderedJson::array();
    for (const Appearance& a : g.appearances) {
      apps.push_back(OrderedJson{{"rank", a.rank}, {"clicked", a.clicked}});
    }
    obj["appearances"] = std::move(apps);
    out << obj.dump() << '\n';
  }
}

absl::StatusOr<std::vector<PairGroup>> ReadPairsJsonl(std::istream& in) {
  std::vector<PairGroup> pairs;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto g = ParsePairLine(line);
    if (!g.ok()) {
      return absl::Status(g.status().code(),
                          absl::StrCat("line ", line_number, ": ",
                                       g.status().message()));
    }
    pairs.push_back(*std::move(g));
  }
  return pairs;
}

void WriteImpressionsJsonl(std::ostream& out,
                           std::span<const ImpressionRecord> records) {
  for (const ImpressionRecord& r : records) {
    OrderedJson obj;
    obj["query_id"] = r.query_id;
    obj["doc_id"] = r.doc_id;
    obj["rank"] = r.rank;
    obj["clicked"] = r.clicked;
    obj["day"] = r.day;
    if (r.price.has_value()) obj["price"] = r.price->ToString();
    obj["is_auction"] = r.is_auction;
    obj["platform"] = std::string(PlatformName(r.platform));
    obj["sort_type"] = r.sort_type;
    out << obj.dump() << '\n';
  }
}

void WriteScoredJsonl(std::ostream& out,
                      std::span<const ScoredImpression> impressions) {
  for (const ScoredImpression& s : impressions) {
    OrderedJson obj;
    obj["query_id"] = s.query_id;
    obj["doc_id"] = s.doc_id;
    obj["rank"] = s.rank;
    obj["clicked"] = s.clicked;
    OrderedJson scores = OrderedJson::object();
    for (const auto& [name, score] : s.model_scores) scores[name] = score;
    obj["model_scores"] = std::move(scores);
    out << obj.dump() << '\n';
  }
}

void WriteCurveCsv(std::ostream& out, const PropensityCurve& curve) {
  out << "rank,propensity\n";
  for (int r = 1; r <= curve.rank_max(); ++r) {
    out << r << ',' << FormatSignificant9(curve.value(r)) << '\n';
  }
}

absl::StatusOr<PropensityCurve> ReadCurveCsv(std::istream& in,
                                             CurveMethod method) {
  std::string line;
  if (!std::getline(in, line) ||
      absl::StripTrailingAsciiWhitespace(line) != "rank,propensity") {
    return absl::InvalidArgumentError(
        "curve CSV must start with the header \"rank,propensity\"");
  }
  std::vector<double> values;
  int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const absl::string_view row = absl::StripTrailingAsciiWhitespace(line);
    if (row.empty()) continue;
    const std::vector<absl::string_view> cells = absl::StrSplit(row, ',');
    int rank = 0;
    double value = 0.0;
    if (cells.size() != 2 || !absl::SimpleAtoi(cells[0], &rank) ||
        !absl::SimpleAtod(cells[1], &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected \"rank,propensity\""));
    }
    if (rank != static_cast<int>(values.size()) + 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": expected rank ", values.size() + 1,
          ", got ", rank));
    }
    values.push_back(value);
  }
  return PropensityCurve::Normalize(values, method);
}

void WriteReportJson(std::ostream& out, const EstimationReport& report) {
  OrderedJson obj;
  obj["method"] = std::string(CurveMethodName(report.curve.method()));
  obj["rank_max"] = report.curve.rank_max();
  obj["final_log_likelihood"] = report.final_log_likelihood;
  obj["initial_log_likelihood"] = report.initial_log_likelihood;
  obj["iterations"] = report.iterations;
  obj["converged"] = report.converged;
  obj["n_pairs_used"] = report.n_pairs_used;
  obj["n_interpolated_ranks"] = report.n_interpolated_ranks;
  out << obj.dump(2) << '\n';
}

void WriteRatioCsv(std::ostream& out, std::span<const RatioRow> rows) {
  out << "rank_i,rank_j,ratio,n_pairs\n";
  for (const RatioRow& row : rows) {
    out << row.rank_i << ',' << row.rank_j << ','
        << FormatSignificant9(row.estimate.ratio) << ','
        << row.estimate.n_pairs << '\n';
  }
}

void WriteEvalCsv(std::ostream& out, const EvalReport& report) {
  out << "rank,model_pair,mean_improvement,stddev,n_bootstrap\n";
  for (const EvalRow& row : report.rows) {
    out << row.rank << ',' << row.model_a << ':' << row.model_b << ','
        << FormatSignificant9(row.mean_improvement) << ','
        << FormatSignificant9(row.stddev) << ',' << report.n_bootstrap << '\n';
  }
}

absl::Status AnnotateWeights(std::istream& in, std::ostream& out,
                             const PropensityCurve& curve) {
  std::vector<int64_t> malformed;
  std::vector<int64_t> out_of_range;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    OrderedJson obj =
        OrderedJson::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      malformed.push_back(line_number);
      continue;
    }
    const auto rank = obj.find("rank");
    if (rank == obj.end() || !rank->is_number_integer()) {
      malformed.push_back(line_number);
      continue;
    }
    const int64_t r = rank->get<int64_t>();
    if (r < 1 || r > curve.rank_max()) {
      out_of_range.push_back(line_number);
      continue;
    }
    obj["weight"] = 1.0 / curve.value(static_cast<int>(r));
    out << obj.dump() << '\n';
  }
  if (!malformed.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "malformed impression or missing integer rank on line(s) ",
        ListLines(malformed)));
  }
  if (!out_of_range.empty()) {
    return absl::OutOfRangeError(absl::StrCat(
        "rank outside the curve range [1, ", curve.rank_max(), "] on line(s) ",
        ListLines(out_of_range)));
  }
  return absl::OkStatus();
}

}  // namespace pbe
