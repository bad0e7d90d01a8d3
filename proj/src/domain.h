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

// Core value types shared by extraction, estimation and evaluation.

#ifndef PBE_DOMAIN_H_
#define PBE_DOMAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace pbe {

inline constexpr int kDefaultRankMax = 500;

enum class Platform { kWeb, kMobile };

absl::StatusOr<Platform> ParsePlatform(absl::string_view name);
absl::string_view PlatformName(Platform platform);

// Exact decimal number, canonicalized so that "19.90", "19.9" and 19.9 compare
// equal. Prices are compared with operator== only.
struct Decimal {
  int64_t mantissa = 0;
  int32_t scale = 0;  // value = mantissa * 10^-scale

  friend bool operator==(const Decimal&, const Decimal&) = default;
  std::string ToString() const;
};

// Accepts an optional sign, digits, and an optional fractional part.
absl::StatusOr<Decimal> ParseDecimal(absl::string_view text);

// One logged impression of a document for a query.
struct ImpressionRecord {
  std::string query_id;
  std::string doc_id;
  int rank = 1;
  bool clicked = false;
  int64_t day = 0;
  // The fields below are only consulted by extraction filters.
  std::optional<Decimal> price;
  bool is_auction = false;
  Platform platform = Platform::kWeb;
  std::string sort_type;
};

struct Appearance {
  int rank = 1;
  bool clicked = false;

  friend bool operator==(const Appearance&, const Appearance&) = default;
};

// All appearances of one query-document pair. The likelihood factorizes over
// these groups.
struct PairGroup {
  std::string query_id;
  std::string doc_id;
  std::vector<Appearance> appearances;

  int NumClicks() const;
  int NumDistinctRanks() const;
  int MaxRank() const;

  friend bool operator==(const PairGroup&, const PairGroup&) = default;
};

enum class CurveMethod { kDirect, kInterpolated, kRatio, kEm, kTrueSim };

absl::string_view CurveMethodName(CurveMethod method);
absl::StatusOr<CurveMethod> ParseCurveMethod(absl::string_view name);

// Propensity per rank 1..rank_max, stored as ratios to rank 1. The only way to
// build one is through Normalize, so value(1) == 1 always holds.
class PropensityCurve {
 public:
  // Divides every value by values[0]. Fails if `values` is empty or contains a
  // non-positive or non-finite entry.
  static absl::StatusOr<PropensityCurve> Normalize(
      std::span<const double> values, CurveMethod method = CurveMethod::kDirect);

  int rank_max() const { return static_cast<int>(values_.size()); }
  CurveMethod method() const { return method_; }
  std::span<const double> values() const { return values_; }

  // 1-based; `rank` must be in [1, rank_max].
  double value(int rank) const { return values_[rank - 1]; }
  absl::StatusOr<double> ValueAt(int rank) const;

  friend bool operator==(const PropensityCurve&,
                         const PropensityCurve&) = default;

 private:
  PropensityCurve(std::vector<double> values, CurveMethod method)
      : values_(std::move(values)), method_(method) {}

  std::vector<double> values_;
  CurveMethod method_;
};

// Parameter ranks for the log-log interpolated curve. Strictly increasing,
// starting at 1 and ending at rank_max.
class KnotSpec {
 public:
  static absl::StatusOr<KnotSpec> Create(std::vector<int> knot_ranks);
  // 1, 2, 4, 8, 20, 50, 100, 200, 300, 500, truncated below rank_max and
  // closed with rank_max.
  static KnotSpec Default(int rank_max = kDefaultRankMax);

  std::span<const int> ranks() const { return ranks_; }
  int rank_max() const { return ranks_.back(); }

 private:
  explicit KnotSpec(std::vector<int> ranks) : ranks_(std::move(ranks)) {}
  std::vector<int> ranks_;
};

struct EstimationReport {
  PropensityCurve curve;
  double initial_log_likelihood = 0.0;
  double final_log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  int64_t n_pairs_used = 0;
  // Ranks whose value was filled by interpolation instead of being a free
  // parameter (unobserved, or below the observation threshold).
  int n_interpolated_ranks = 0;
  // Objective after each accepted step; front() is the starting value.
  std::vector<double> log_likelihood_trace;
};

}  // namespace pbe

#endif  // PBE_DOMAIN_H_
