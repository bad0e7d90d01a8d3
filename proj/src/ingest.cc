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

#include "ingest.h"

#include <map>
#include <string_view>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "status_macros.h"

namespace pbe {
namespace {

using Json = nlohmann::json;

absl::Status FieldError(absl::string_view field, absl::string_view expected) {
  return absl::InvalidArgumentError(
      absl::StrCat("field \"", field, "\" must be ", expected));
}

absl::StatusOr<const Json*> Required(const Json& obj, absl::string_view field) {
  const auto it = obj.find(field);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing required field \"", field, "\""));
  }
  return &*it;
}

const Json* Optional(const Json& obj, absl::string_view field) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

absl::StatusOr<Decimal> PriceFromJson(const Json& value) {
  if (value.is_string()) return ParseDecimal(value.get<std::string>());
  if (value.is_number_integer()) {
    return ParseDecimal(absl::StrCat(value.get<int64_t>()));
  }
  if (value.is_number_float()) {
    // nlohmann prints the shortest representation that round-trips.
    return ParseDecimal(value.dump());
  }
  return FieldError("price", "a decimal string or number");
}

struct GroupKey {
  std::string_view query_id;
  std::string_view doc_id;
  int64_t day;

  auto operator<=>(const GroupKey&) const = default;
};

}  // namespace

std::string ExtractionSummary::ToString() const {
  return absl::StrFormat(
      "records=%d dropped_platform=%d dropped_sort_type=%d groups=%d "
      "dropped_auction=%d dropped_price=%d dropped_selection=%d retained=%d",
      records_seen, records_dropped_platform, records_dropped_sort_type,
      groups_seen, groups_dropped_auction, groups_dropped_price,
      groups_dropped_selection, groups_retained);
}

absl::StatusOr<ImpressionRecord> ParseImpressionLine(absl::string_view line,
                                                     int rank_max) {
  const Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  if (!obj.is_object()) {
    return absl::InvalidArgumentError("expected a JSON object");
  }

  ImpressionRecord record;
  ASSIGN_OR_RETURN(const Json* query_id, Required(obj, "query_id"));
  if (!query_id->is_string()) return FieldError("query_id", "a string");
  record.query_id = query_id->get<std::string>();

  ASSIGN_OR_RETURN(const Json* doc_id, Required(obj, "doc_id"));
  if (!doc_id->is_string()) return FieldError("doc_id", "a string");
  record.doc_id = doc_id->get<std::string>();

  ASSIGN_OR_RETURN(const Json* rank, Required(obj, "rank"));
  if (!rank->is_number_integer()) return FieldError("rank", "an integer");
  const int64_t rank_value = rank->get<int64_t>();
  if (rank_value < 1) {
    return absl::OutOfRangeError(
        absl::StrCat("rank must be >= 1, got ", rank_value));
  }
  if (rank_value > rank_max) {
    return absl::OutOfRangeError(absl::StrCat(
        "rank ", rank_value, " exceeds rank_max ", rank_max));
  }
  record.rank = static_cast<int>(rank_value);

  ASSIGN_OR_RETURN(const Json* clicked, Required(obj, "clicked"));
  if (clicked->is_boolean()) {
    record.clicked = clicked->get<bool>();
  } else if (clicked->is_number_integer() &&
             (clicked->get<int64_t>() == 0 || clicked->get<int64_t>() == 1)) {
    record.clicked = clicked->get<int64_t>() == 1;
  } else {
    return FieldError("clicked", "a boolean");
  }

  if (const Json* day = Optional(obj, "day")) {
    if (!day->is_number_integer()) return FieldError("day", "an integer");
    record.day = day->get<int64_t>();
  }
  if (const Json* price = Optional(obj, "price")) {
    ASSIGN_OR_RETURN(record.price, PriceFromJson(*price));
  }
  if (const Json* auction = Optional(obj, "is_auction")) {
    if (!auction->is_boolean()) return FieldError("is_auction", "a boolean");
    record.is_auction = auction->get<bool>();
  }
  if (const Json* platform = Optional(obj, "platform")) {
    if (!platform->is_string()) return FieldError("platform", "a string");
    ASSIGN_OR_RETURN(record.platform,
                     ParsePlatform(platform->get<std::string>()));
  }
  if (const Json* sort_type = Optional(obj, "sort_type")) {
    if (!sort_type->is_string()) return FieldError("sort_type", "a string");
    record.sort_type = sort_type->get<std::string>();
  }
  return record;
}

absl::StatusOr<std::vector<ImpressionRecord>> ParseImpressionLog(
    std::istream& input, int rank_max) {
  std::vector<ImpressionRecord> records;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = ParseImpressionLine(line, rank_max);
    if (!record.ok()) {
      return absl::Status(record.status().code(),
                          absl::StrCat("line ", line_number, ": ",
                                       record.status().message()));
    }
    records.push_back(*std::move(record));
  }
  return records;
}

std::vector<PairGroup> GroupPairs(std::span<const ImpressionRecord> records,
                                  const ExtractionConfig& config,
                                  ExtractionSummary* summary) {
  ExtractionSummary local;
  ExtractionSummary& s = summary != nullptr ? *summary : local;
  s.records_seen += static_cast<int64_t>(records.size());

  std::map<GroupKey, std::vector<const ImpressionRecord*>> buckets;
  for (const ImpressionRecord& r : records) {
    if (config.platform_filter.has_value() &&
        r.platform != *config.platform_filter) {
      ++s.records_dropped_platform;
      continue;
    }
    if (config.sort_type_filter.has_value() &&
        r.sort_type != *config.sort_type_filter) {
      ++s.records_dropped_sort_type;
      continue;
    }
    const GroupKey key{r.query_id, r.doc_id,
                       config.require_same_day ? r.day : 0};
    buckets[key].push_back(&r);
  }

  std::vector<PairGroup> groups;
  for (const auto& [key, members] : buckets) {
    ++s.groups_seen;
    if (config.exclude_auctions &&
        std::any_of(members.begin(), members.end(),
                    [](const ImpressionRecord* r) { return r->is_auction; })) {
      ++s.groups_dropped_auction;
      continue;
    }
    if (config.require_same_price) {
      const std::optional<Decimal>& first = members.front()->price;
      const bool constant =
          first.has_value() &&
          std::all_of(members.begin(), members.end(),
                      [&](const ImpressionRecord* r) { return r->price == first; });
      if (!constant) {
        ++s.groups_dropped_price;
        continue;
      }
    }
    PairGroup group;
    group.query_id = std::string(key.query_id);
    group.doc_id = std::string(key.doc_id);
    group.appearances.reserve(members.size());
    for (const ImpressionRecord* r : members) {
      group.appearances.push_back({r->rank, r->clicked});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

bool SatisfiesSelection(const PairGroup& group, SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kExactlyTwoRanksOneClick:
      return group.appearances.size() == 2 &&
             group.appearances[0].rank != group.appearances[1].rank &&
             group.NumClicks() == 1;
    case SelectionMode::kAtLeastTwoRanksOnePlusClicks:
      return group.NumDistinctRanks() >= 2 && group.NumClicks() >= 1;
  }
  return false;
}

std::vector<PairGroup> SelectEstimationPairs(std::span<const PairGroup> groups,
                                             const ExtractionConfig& config,
                                             ExtractionSummary* summary) {
  std::vector<PairGroup> kept;
  int64_t dropped = 0;
  for (const PairGroup& g : groups) {
    if (SatisfiesSelection(g, config.selection_mode)) {
      kept.push_back(g);
    } else {
      ++dropped;
    }
  }
  if (summary != nullptr) {
    summary->groups_dropped_selection += dropped;
    summary->groups_retained += static_cast<int64_t>(kept.size());
  }
  return kept;
}

}  // namespace pbe
