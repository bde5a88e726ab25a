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

// Search logs, item extraction and user-level histograms.
//
// A search log is a set of per-user histories of <user, query, time, clicks>
// records. Every statistic published by this library is a histogram that maps
// an item (keyword, query, consecutive query pair, or query/URL click) to the
// number of *distinct users* whose history contains it.

#ifndef ZEALOUS_SEARCH_LOG_HPP_
#define ZEALOUS_SEARCH_LOG_HPP_

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "zealous/random.hpp"

namespace zealous {

// Abseil may be built with its own string_view type; these convert at the
// boundary so the rest of the code can use std::string_view.
inline absl::string_view AbslView(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}
inline std::string_view StdView(absl::string_view s) {
  return std::string_view(s.data(), s.size());
}

enum class ItemKind { kKeyword, kQuery, kQueryPair, kClick };

inline std::string_view ItemKindName(ItemKind kind) {
  switch (kind) {
    case ItemKind::kKeyword:
      return "keyword";
    case ItemKind::kQuery:
      return "query";
    case ItemKind::kQueryPair:
      return "query-pair";
    case ItemKind::kClick:
      return "click";
  }
  return "unknown";
}

inline absl::StatusOr<ItemKind> ParseItemKind(std::string_view name) {
  if (name == "keyword" || name == "keywords") return ItemKind::kKeyword;
  if (name == "query" || name == "queries") return ItemKind::kQuery;
  if (name == "query-pair" || name == "query-pairs" || name == "pair")
    return ItemKind::kQueryPair;
  if (name == "click" || name == "clicks") return ItemKind::kClick;
  return absl::InvalidArgumentError(absl::StrCat("unknown item kind: ", AbslView(name)));
}

// Joins the two halves of a query-pair or click item. Normalized queries never
// contain '|', so splitting on the first separator is unambiguous.
inline constexpr std::string_view kPairSeparator = " | ";

inline std::pair<std::string_view, std::string_view> SplitPairItem(
    std::string_view item) {
  const size_t pos = item.find(kPairSeparator);
  if (pos == std::string_view::npos) return {item, {}};
  return {item.substr(0, pos), item.substr(pos + kPairSeparator.size())};
}

// Lowercases ASCII, removes ASCII punctuation and splits on whitespace.
// Bytes outside ASCII are kept verbatim.
inline std::vector<std::string> NormalizeKeywords(std::string_view raw) {
  std::vector<std::string> keywords;
  std::string current;
  for (unsigned char c : raw) {
    if (c < 0x80 && std::isspace(c)) {
      if (!current.empty()) keywords.push_back(std::move(current));
      current.clear();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      current.push_back(
          static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  if (!current.empty()) keywords.push_back(std::move(current));
  return keywords;
}

struct SearchEntry {
  std::string user_id;
  std::vector<std::string> query;  // normalized, non-empty keywords
  int64_t time = 0;                // seconds
  std::vector<std::string> clicks;
};

// Normalizes `raw_query`; fails when nothing survives normalization.
inline absl::StatusOr<SearchEntry> MakeEntry(std::string user_id,
                                             std::string_view raw_query,
                                             int64_t time,
                                             std::vector<std::string> clicks) {
  SearchEntry entry{std::move(user_id), NormalizeKeywords(raw_query), time,
                    std::move(clicks)};
  if (entry.user_id.empty()) {
    return absl::InvalidArgumentError("empty user id");
  }
  if (entry.query.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("query has no keywords: '", AbslView(raw_query), "'"));
  }
  return entry;
}

struct UserHistory {
  std::string user_id;
  std::vector<SearchEntry> entries;  // sorted by time
};

class SearchLog {
 public:
  SearchLog() = default;

  // Groups entries by user (users ordered by id) and sorts each history by
  // time; ties keep input order.
  static SearchLog FromEntries(std::vector<SearchEntry> entries) {
    std::map<std::string, std::vector<SearchEntry>> grouped;
    for (auto& e : entries) grouped[e.user_id].push_back(std::move(e));
    SearchLog log;
    log.users_.reserve(grouped.size());
    for (auto& [user, history] : grouped) {
      std::stable_sort(history.begin(), history.end(),
                       [](const SearchEntry& a, const SearchEntry& b) {
                         return a.time < b.time;
                       });
      log.users_.push_back(UserHistory{user, std::move(history)});
    }
    return log;
  }

  int64_t user_count() const { return static_cast<int64_t>(users_.size()); }
  const std::vector<UserHistory>& users() const { return users_; }

  size_t entry_count() const {
    size_t n = 0;
    for (const auto& u : users_) n += u.entries.size();
    return n;
  }

  std::vector<SearchEntry> Entries() const {
    std::vector<SearchEntry> out;
    out.reserve(entry_count());
    for (const auto& u : users_)
      out.insert(out.end(), u.entries.begin(), u.entries.end());
    return out;
  }

 private:
  std::vector<UserHistory> users_;
};

enum class QueryIdentity { kSequence, kSet };

struct ItemOptions {
  // A new session starts after an idle gap strictly longer than this.
  int64_t session_gap_seconds = 1800;
  QueryIdentity query_identity = QueryIdentity::kSequence;
};

inline std::string CanonicalQuery(const std::vector<std::string>& keywords,
                                  QueryIdentity identity) {
  if (identity == QueryIdentity::kSequence) return absl::StrJoin(keywords, " ");
  std::vector<std::string> sorted = keywords;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return absl::StrJoin(sorted, " ");
}

inline std::string MakePairItem(std::string_view first,
                                std::string_view second) {
  return absl::StrCat(AbslView(first), AbslView(kPairSeparator), AbslView(second));
}

inline std::vector<std::span<const SearchEntry>> Sessionize(
    std::span<const SearchEntry> entries, int64_t gap_seconds) {
  std::vector<std::span<const SearchEntry>> sessions;
  size_t start = 0;
  for (size_t i = 1; i <= entries.size(); ++i) {
    if (i == entries.size() ||
        entries[i].time - entries[i - 1].time > gap_seconds) {
      if (i > start) sessions.push_back(entries.subspan(start, i - start));
      start = i;
    }
  }
  return sessions;
}

// Appends the items of one session to `out` (a multiset).
inline void AppendSessionItems(std::span<const SearchEntry> session,
                               ItemKind kind, const ItemOptions& options,
                               std::vector<std::string>& out) {
  switch (kind) {
    case ItemKind::kKeyword:
      for (const auto& e : session)
        out.insert(out.end(), e.query.begin(), e.query.end());
      break;
    case ItemKind::kQuery:
      for (const auto& e : session)
        out.push_back(CanonicalQuery(e.query, options.query_identity));
      break;
    case ItemKind::kQueryPair:
      for (size_t i = 1; i < session.size(); ++i) {
        out.push_back(MakePairItem(
            CanonicalQuery(session[i - 1].query, options.query_identity),
            CanonicalQuery(session[i].query, options.query_identity)));
      }
      break;
    case ItemKind::kClick:
      for (const auto& e : session) {
        const std::string q = CanonicalQuery(e.query, options.query_identity);
        for (const auto& url : e.clicks) out.push_back(MakePairItem(q, url));
      }
      break;
  }
}

struct UserItems {
  std::string user_id;
  std::vector<std::string> items;
};

inline std::vector<std::string> ItemsOfUser(const UserHistory& user,
                                            ItemKind kind,
                                            const ItemOptions& options) {
  std::vector<std::string> items;
  for (auto session :
       Sessionize(user.entries, options.session_gap_seconds)) {
    AppendSessionItems(session, kind, options, items);
  }
  return items;
}

// Per-user item multisets in user order.
inline std::vector<UserItems> ExtractItems(const SearchLog& log, ItemKind kind,
                                           const ItemOptions& options = {}) {
  std::vector<UserItems> out;
  out.reserve(log.users().size());
  for (const auto& user : log.users()) {
    out.push_back(UserItems{user.user_id, ItemsOfUser(user, kind, options)});
  }
  return out;
}

inline std::vector<std::string> DistinctItems(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

struct Histogram {
  ItemKind kind = ItemKind::kKeyword;
  std::unordered_map<std::string, int64_t> counts;
  std::optional<uint64_t> domain_size_hint;

  int64_t Count(const std::string& item) const {
    auto it = counts.find(item);
    return it == counts.end() ? 0 : it->second;
  }

  int64_t Total() const {
    int64_t total = 0;
    for (const auto& [item, c] : counts) total += c;
    return total;
  }

  int64_t MaxCount() const {
    int64_t best = 0;
    for (const auto& [item, c] : counts) best = std::max(best, c);
    return best;
  }

  // Descending count; ties in lexicographic item order.
  std::vector<std::pair<std::string, int64_t>> Sorted() const {
    std::vector<std::pair<std::string, int64_t>> rows(counts.begin(),
                                                      counts.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    return rows;
  }
};

// Counts, for every item, the users whose item list contains it at least once.
inline Histogram HistogramFromUserItems(ItemKind kind,
                                        const std::vector<UserItems>& users) {
  Histogram h;
  h.kind = kind;
  for (const auto& user : users) {
    for (const auto& item : DistinctItems(user.items)) ++h.counts[item];
  }
  return h;
}

inline Histogram BuildHistogram(const SearchLog& log, ItemKind kind,
                                const ItemOptions& options = {}) {
  return HistogramFromUserItems(kind, ExtractItems(log, kind, options));
}

struct Selection {
  std::vector<UserItems> selected;  // sorted distinct items per user
  Histogram histogram;
};

// Picks up to m distinct items per user, uniformly at random and independently
// of the item counts. The choice for a user depends only on (seed, user id).
inline Selection SelectPerUser(const SearchLog& log, ItemKind kind, int m,
                               uint64_t seed, const ItemOptions& options = {}) {
  Selection out;
  out.selected.reserve(log.users().size());
  for (const auto& user : log.users()) {
    std::vector<std::string> items =
        DistinctItems(ItemsOfUser(user, kind, options));
    if (static_cast<int64_t>(items.size()) > m) {
      RandomStream rng(seed, StableHash(user.user_id),
                       StreamDomain::kSelection);
      for (int i = 0; i < m; ++i) {
        const size_t j = i + rng.Bounded(items.size() - i);
        std::swap(items[i], items[j]);
      }
      items.resize(m);
      std::sort(items.begin(), items.end());
    }
    out.selected.push_back(UserItems{user.user_id, std::move(items)});
  }
  out.histogram = HistogramFromUserItems(kind, out.selected);
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion

enum class LogFormat { kNative, kAol };

inline absl::StatusOr<LogFormat> ParseLogFormat(std::string_view name) {
  if (name == "native" || name == "tsv") return LogFormat::kNative;
  if (name == "aol") return LogFormat::kAol;
  return absl::InvalidArgumentError(absl::StrCat("unknown log format: ", AbslView(name)));
}

struct IngestResult {
  SearchLog log;
  size_t lines = 0;
  size_t malformed_lines = 0;
};

// Integer seconds, or "YYYY-MM-DD HH:MM:SS" as written by the AOL release.
inline std::optional<int64_t> ParseTimestamp(std::string_view text) {
  int64_t seconds;
  if (absl::SimpleAtoi(AbslView(text), &seconds)) return seconds;
  int y, mo, d, h, mi, s;
  char tail;
  const std::string buf(text);
  if (std::sscanf(buf.c_str(), "%d-%d-%d %d:%d:%d%c", &y, &mo, &d, &h, &mi,
                  &s, &tail) != 6) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{
      std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
      std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
    return std::nullopt;
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return static_cast<int64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
}

namespace internal {

inline std::vector<std::string> SplitClicks(std::string_view field) {
  std::vector<std::string> clicks;
  for (absl::string_view piece :
       absl::StrSplit(AbslView(field), ',', absl::SkipEmpty())) {
    std::string_view url = StdView(piece);
    while (!url.empty() && std::isspace(static_cast<unsigned char>(url.front())))
      url.remove_prefix(1);
    while (!url.empty() && std::isspace(static_cast<unsigned char>(url.back())))
      url.remove_suffix(1);
    if (!url.empty()) clicks.emplace_back(url);
  }
  return clicks;
}

}  // namespace internal

// Parses a log from `in`. Native lines are user\tquery\ttime[\tclicks]; AOL
// lines are AnonID\tQuery\tQueryTime\tItemRank\tClickURL with an optional
// header row. AOL rows repeating (user, query, time) are merged into one entry.
// More than 10% malformed lines is an error.
inline absl::StatusOr<IngestResult> IngestStream(std::istream& in,
                                                 LogFormat format) {
  IngestResult result;
  std::vector<SearchEntry> entries;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (format == LogFormat::kAol && first && line.rfind("AnonID", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    ++result.lines;
    std::vector<std::string_view> cols;
    for (absl::string_view c : absl::StrSplit(line, '\t')) {
      cols.push_back(StdView(c));
    }
    const size_t min_cols = 3;
    const size_t max_cols = format == LogFormat::kNative ? 4 : 5;
    std::optional<int64_t> time;
    if (cols.size() >= min_cols && cols.size() <= max_cols) {
      time = ParseTimestamp(cols[2]);
    }
    if (!time.has_value()) {
      ++result.malformed_lines;
      continue;
    }
    std::vector<std::string> clicks;
    if (format == LogFormat::kNative && cols.size() == 4) {
      clicks = internal::SplitClicks(cols[3]);
    } else if (format == LogFormat::kAol && cols.size() == 5) {
      clicks = internal::SplitClicks(cols[4]);
    }
    auto entry = MakeEntry(std::string(cols[0]), cols[1], *time,
                           std::move(clicks));
    if (!entry.ok()) {
      ++result.malformed_lines;
      continue;
    }
    if (format == LogFormat::kAol && !entries.empty() &&
        entries.back().user_id == entry->user_id &&
        entries.back().time == entry->time &&
        entries.back().query == entry->query) {
      auto& prev = entries.back().clicks;
      prev.insert(prev.end(), entry->clicks.begin(), entry->clicks.end());
      continue;
    }
    entries.push_back(*std::move(entry));
  }
  if (result.malformed_lines * 10 > result.lines) {
    return absl::InvalidArgumentError(absl::StrCat(
        result.malformed_lines, " of ", result.lines,
        " lines are malformed (more than 10%); refusing to ingest"));
  }
  result.log = SearchLog::FromEntries(std::move(entries));
  return result;
}

inline absl::StatusOr<IngestResult> IngestFile(const std::string& path,
                                               LogFormat format) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  return IngestStream(in, format);
}

// Native TSV; clicks comma-separated, empty field when there are none.
inline void WriteTsv(const SearchLog& log, std::ostream& out) {
  for (const auto& user : log.users()) {
    for (const auto& e : user.entries) {
      out << e.user_id << '\t' << absl::StrJoin(e.query, " ") << '\t' << e.time
          << '\t' << absl::StrJoin(e.clicks, ",") << '\n';
    }
  }
}

}  // namespace zealous

#endif  // ZEALOUS_SEARCH_LOG_HPP_
