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

#include "domain.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace pbe {

absl::StatusOr<Platform> ParsePlatform(absl::string_view name) {
  if (name == "web") return Platform::kWeb;
  if (name == "mobile") return Platform::kMobile;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown platform \"", name, "\" (expected web or mobile)"));
}

absl::string_view PlatformName(Platform platform) {
  return platform == Platform::kWeb ? "web" : "mobile";
}

std::string Decimal::ToString() const {
  std::string digits = absl::StrCat(mantissa < 0 ? -mantissa : mantissa);
  if (scale > 0) {
    if (static_cast<int>(digits.size()) <= scale) {
      digits.insert(0, scale - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - scale, ".");
  }
  return mantissa < 0 ? absl::StrCat("-", digits) : digits;
}

absl::StatusOr<Decimal> ParseDecimal(absl::string_view text) {
  const auto invalid = [&] {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid decimal \"", text, "\""));
  };
  absl::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  if (rest.empty()) return invalid();

  Decimal out;
  bool seen_point = false;
  int digits = 0;
  for (const char c : rest) {
    if (c == '.') {
      if (seen_point) return invalid();
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return invalid();
    if (++digits > 18) {
      return absl::OutOfRangeError(
          absl::StrCat("decimal \"", text, "\" has more than 18 digits"));
    }
    out.mantissa = out.mantissa * 10 + (c - '0');
    if (seen_point) ++out.scale;
  }
  if (digits == 0) return invalid();
  while (out.scale > 0 && out.mantissa % 10 == 0) {
    out.mantissa /= 10;
    --out.scale;
  }
  if (negative) out.mantissa = -out.mantissa;
  return out;
}

int PairGroup::NumClicks() const {
  return static_cast<int>(std::count_if(
      appearances.begin(), appearances.end(),
      [](const Appearance& a) { return a.clicked; }));
}

int PairGroup::NumDistinctRanks() const {
  std::set<int> ranks;
  for (const Appearance& a : appearances) ranks.insert(a.rank);
  return static_cast<int>(ranks.size());
}

int PairGroup::MaxRank() const {
  int max_rank = 0;
  for (const Appearance& a : appearances) max_rank = std::max(max_rank, a.rank);
  return max_rank;
}

absl::string_view CurveMethodName(CurveMethod method) {
  switch (method) {
    case CurveMethod::kDirect:
      return "direct";
    case CurveMethod::kInterpolated:
      return "interpolated";
    case CurveMethod::kRatio:
      return "ratio";
    case CurveMethod::kEm:
      return "em";
    case CurveMethod::kTrueSim:
      return "true_sim";
  }
  return "unknown";
}

absl::StatusOr<CurveMethod> ParseCurveMethod(absl::string_view name) {
  for (const CurveMethod m :
       {CurveMethod::kDirect, CurveMethod::kInterpolated, CurveMethod::kRatio,
        CurveMethod::kEm, CurveMethod::kTrueSim}) {
    if (CurveMethodName(m) == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown curve method \"", name, "\""));
}

absl::StatusOr<PropensityCurve> PropensityCurve::Normalize(
    std::span<const double> values, CurveMethod method) {
  if (values.empty()) {
    return absl::InvalidArgumentError("propensity curve must be non-empty");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      return absl::OutOfRangeError(
          absl::StrCat("propensity at rank ", i + 1,
                       " must be positive and finite, got ", values[i]));
    }
  }
  std::vector<double> normalized(values.begin(), values.end());
  const double anchor = values[0];
  for (double& v : normalized) v /= anchor;
  normalized[0] = 1.0;
  return PropensityCurve(std::move(normalized), method);
}

absl::StatusOr<double> PropensityCurve::ValueAt(int rank) const {
  if (rank < 1 || rank > rank_max()) {
    return absl::OutOfRangeError(absl::StrCat(
        "rank ", rank, " is outside the curve range [1, ", rank_max(), "]"));
  }
  return value(rank);
}

absl::StatusOr<KnotSpec> KnotSpec::Create(std::vector<int> knot_ranks) {
  if (knot_ranks.size() < 2) {
    return absl::InvalidArgumentError("a knot list needs at least two ranks");
  }
  if (knot_ranks.front() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("the first knot must be rank 1, got ", knot_ranks.front()));
  }
  for (size_t i = 1; i < knot_ranks.size(); ++i) {
    if (knot_ranks[i] <= knot_ranks[i - 1]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "knot ranks must be strictly increasing: ",
          absl::StrJoin(knot_ranks, ",")));
    }
  }
  return KnotSpec(std::move(knot_ranks));
}

KnotSpec KnotSpec::Default(int rank_max) {
  std::vector<int> ranks;
  for (const int r : {1, 2, 4, 8, 20, 50, 100, 200, 300, 500}) {
    if (r < rank_max) ranks.push_back(r);
  }
  ranks.push_back(std::max(rank_max, 2));
  return KnotSpec(std::move(ranks));
}

}  // namespace pbe
