//
// Copyright 2026 The Zealous Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// JSON and CSV serialization of histograms, plans, verdicts and metrics.
// Column and key order is fixed so outputs diff cleanly.

#ifndef ZEALOUS_IO_HPP_
#define ZEALOUS_IO_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "zealous/privacy_analysis.hpp"
#include "zealous/search_log.hpp"
#include "zealous/utility.hpp"
#include "zealous/zealous.hpp"

namespace zealous {

using Json = nlohmann::ordered_json;

// Shortest text that reads back to the same double.
inline std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.17g", v);
}

// Non-finite doubles become strings, which JSON cannot otherwise carry.
inline Json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

inline Json JsonNumber(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return JsonNumber(*v);
}

// RFC 4180 quoting: fields holding a comma, quote or line break are quoted.
inline std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvField(fields[i]);
  }
  out << '\n';
}

// Parses one CSV record; quoted fields may not span lines here.
inline std::vector<std::string> ParseCsvRow(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

// Writes to a sibling temporary file and renames it over `path`.
inline absl::Status WriteFileAtomically(const std::filesystem::path& path,
                                        std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot write ", tmp.string()));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      return absl::DataLossError(absl::StrCat("short write to ", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return absl::UnavailableError(
        absl::StrCat("cannot rename onto ", path.string()));
  }
  return absl::OkStatus();
}

inline absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Histograms

// One {"item", "count"} object per line, items sorted by descending count.
inline void WriteHistogramJsonl(const Histogram& h, std::ostream& out) {
  for (const auto& [item, count] : h.Sorted()) {
    Json row;
    row["item"] = item;
    row["count"] = count;
    out << row.dump() << '\n';
  }
}

inline void WriteHistogramCsv(const Histogram& h, std::ostream& out) {
  WriteCsvRow(out, {"item", "count"});
  for (const auto& [item, count] : h.Sorted()) {
    WriteCsvRow(out, {item, absl::StrCat(count)});
  }
}

inline absl::StatusOr<Histogram> ReadHistogramJsonl(std::istream& in,
                                                    ItemKind kind) {
  Histogram h;
  h.kind = kind;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const Json row = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (row.is_discarded() || !row.contains("item") || !row.contains("count") ||
        !row["item"].is_string() || !row["count"].is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad histogram row at line ", line_number));
    }
    h.counts[row["item"].get<std::string>()] = row["count"].get<int64_t>();
  }
  return h;
}

// ---------------------------------------------------------------------------
// Plans and sanitized histograms

inline Json PlanToJson(const ZealousPlan& plan) {
  Json j;
  j["m"] = plan.m;
  j["lambda"] = JsonNumber(plan.lambda);
  j["tau"] = JsonNumber(plan.tau);
  j["tau_prime"] = JsonNumber(plan.tau_prime);
  if (plan.prob_dp.has_value()) {
    j["epsilon"] = JsonNumber(plan.prob_dp->epsilon);
    j["delta"] = JsonNumber(plan.prob_dp->delta);
  } else {
    j["epsilon"] = nullptr;
    j["delta"] = nullptr;
  }
  j["epsilon_prime"] = JsonNumber(plan.indist.epsilon);
  j["delta_prime"] = JsonNumber(plan.indist.delta);
  if (plan.users.has_value()) {
    j["U"] = *plan.users;
  } else {
    j["U"] = nullptr;
  }
  return j;
}

inline Json SanitizedToJson(const SanitizedHistogram& h) {
  Json j;
  j["kind"] = std::string(ItemKindName(h.kind));
  j["plan"] = PlanToJson(h.plan);
  j["seed"] = h.seed;
  Json entries = Json::array();
  for (const auto& item : RankItems(h.entries)) {
    Json e;
    e["item"] = item;
    e["noisy_count"] = h.entries.at(item);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline void WriteSanitizedCsv(const SanitizedHistogram& h, std::ostream& out) {
  WriteCsvRow(out, {"item", "noisy_count"});
  for (const auto& item : RankItems(h.entries)) {
    WriteCsvRow(out, {item, FormatDouble(h.entries.at(item))});
  }
}

// Reads the "entries" of a sanitized-histogram JSON document.
inline absl::StatusOr<std::map<std::string, double>> SanitizedEntriesFromJson(
    std::string_view text) {
  const Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("entries") || !j["entries"].is_array()) {
    return absl::InvalidArgumentError("not a sanitized histogram document");
  }
  std::map<std::string, double> out;
  for (const auto& e : j["entries"]) {
    if (!e.contains("item") || !e.contains("noisy_count") ||
        !e["noisy_count"].is_number()) {
      return absl::InvalidArgumentError("bad sanitized histogram entry");
    }
    out[e["item"].get<std::string>()] = e["noisy_count"].get<double>();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verdicts

inline Json BreachToJson(const BreachObligation& b) {
  Json j;
  j["breach_probability"] = JsonNumber(b.breach_probability);
  j["closed_form"] = JsonNumber(b.closed_form);
  j["delta"] = JsonNumber(b.delta);
  j["boundary_items"] = b.boundary_items;
  j["passed"] = b.passed;
  return j;
}

inline Json ProbDpToJson(const ProbDpReport& r) {
  Json j;
  j["epsilon"] = JsonNumber(r.epsilon);
  j["delta"] = JsonNumber(r.delta);
  j["breach_log"] = BreachToJson(r.breach_log);
  j["breach_neighbor"] = BreachToJson(r.breach_neighbor);
  j["points_checked"] = r.points_checked;
  j["max_abs_log_ratio"] = JsonNumber(r.max_abs_log_ratio);
  j["ratio_passed"] = r.ratio_passed;
  j["passed"] = r.passed();
  if (r.counterexample.has_value()) {
    Json c;
    c["neighbor_is_base"] = r.counterexample->neighbor_is_base;
    c["log_ratio"] = JsonNumber(r.counterexample->log_ratio);
    Json output = Json::object();
    for (const auto& [item, v] : r.counterexample->output) {
      output[item] = JsonNumber(v);
    }
    c["output"] = std::move(output);
    j["counterexample"] = std::move(c);
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

inline Json IndistToJson(const IndistReport& r) {
  Json j;
  j["epsilon"] = JsonNumber(r.epsilon);
  j["delta"] = JsonNumber(r.delta);
  j["events_checked"] = r.events_checked;
  j["max_excess"] = JsonNumber(r.max_excess);
  j["passed"] = r.passed;
  if (r.violating_event.has_value()) {
    Json event = Json::array();
    for (const auto& set : *r.violating_event) event.push_back(set);
    j["violating_event"] = std::move(event);
  } else {
    j["violating_event"] = nullptr;
  }
  return j;
}

inline Json ImplicationToJson(const ImplicationReport& r) {
  Json j;
  j["verdict"] = std::string(VerdictName(r.verdict));
  j["prob_dp"] = ProbDpToJson(r.prob_dp);
  j["indistinguishability"] =
      r.indist.has_value() ? IndistToJson(*r.indist) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Utility metrics

inline Json UtilityToJson(const UtilityReport& r) {
  Json j;
  j["inaccuracy"] = JsonNumber(r.inaccuracy);
  j["retain_failures"] = JsonNumber(r.retain_failures);
  j["filter_failures"] = JsonNumber(r.filter_failures);
  j["avg_l1"] = JsonNumber(r.avg_l1);
  j["kl_divergence"] = JsonNumber(r.kl_divergence);
  j["top_j_coverage"] = JsonNumber(r.top_j_coverage);
  j["count_diff"] = JsonNumber(r.count_diff);
  return j;
}

inline const std::vector<std::string>& UtilityCsvHeader() {
  static const std::vector<std::string> header = {
      "kind",           "m",
      "parameter",      "j",
      "inaccuracy",     "retain_failures",
      "filter_failures", "avg_l1",
      "kl_divergence",  "top_j_coverage",
      "count_diff"};
  return header;
}

// One row keyed by (kind, m, epsilon or k, j).
inline std::vector<std::string> UtilityCsvRow(ItemKind kind, int m,
                                              std::string_view parameter,
                                              int64_t j, const UtilityReport& r) {
  return {std::string(ItemKindName(kind)),
          absl::StrCat(m),
          std::string(parameter),
          absl::StrCat(j),
          FormatDouble(r.inaccuracy),
          FormatDouble(r.retain_failures),
          FormatDouble(r.filter_failures),
          FormatDouble(r.avg_l1),
          FormatDouble(r.kl_divergence),
          FormatDouble(r.top_j_coverage),
          FormatDouble(r.count_diff)};
}

}  // namespace zealous

#endif  // ZEALOUS_IO_HPP_
