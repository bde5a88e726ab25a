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

// k-query anonymity baseline: entries whose query was posed by fewer than k
// distinct users are removed and user ids are replaced by random per-session
// numbers.

#ifndef ZEALOUS_ANONYMITY_HPP_
#define ZEALOUS_ANONYMITY_HPP_

#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"

namespace zealous {

struct AnonymousSession {
  uint64_t session_number = 0;
  // Original user, kept so histograms can count distinct users exactly as on
  // the source log. Never exported.
  std::string source_user;
  std::vector<SearchEntry> entries;  // user_id holds the session number
};

struct KQueryAnonymousLog {
  int64_t k = 1;
  std::vector<AnonymousSession> sessions;

  std::vector<SearchEntry> Entries() const {
    std::vector<SearchEntry> out;
    for (const auto& s : sessions)
      out.insert(out.end(), s.entries.begin(), s.entries.end());
    return out;
  }

  // The surviving entries attributed to their source users.
  SearchLog ToSourceLog() const {
    std::vector<SearchEntry> entries;
    for (const auto& s : sessions) {
      for (auto e : s.entries) {
        e.user_id = s.source_user;
        entries.push_back(std::move(e));
      }
    }
    return SearchLog::FromEntries(std::move(entries));
  }
};

inline absl::StatusOr<KQueryAnonymousLog> KQueryAnonymize(
    const SearchLog& log, int64_t k, uint64_t seed,
    const ItemOptions& options = {}) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  const Histogram queries = BuildHistogram(log, ItemKind::kQuery, options);

  KQueryAnonymousLog out;
  out.k = k;
  RandomStream rng(seed, 0, StreamDomain::kAnonymizer);
  std::unordered_set<uint64_t> used;
  for (const auto& user : log.users()) {
    for (auto session : Sessionize(user.entries, options.session_gap_seconds)) {
      AnonymousSession anon;
      anon.source_user = user.user_id;
      for (const auto& e : session) {
        if (queries.Count(CanonicalQuery(e.query, options.query_identity)) >= k)
          anon.entries.push_back(e);
      }
      if (anon.entries.empty()) continue;
      do {
        anon.session_number = rng.Next() >> 1;
      } while (!used.insert(anon.session_number).second);
      for (auto& e : anon.entries) e.user_id = absl::StrCat(anon.session_number);
      out.sessions.push_back(std::move(anon));
    }
  }
  return out;
}

// User-level histogram over the surviving entries. Query pairs are formed
// inside each anonymous session. Click histograms are not available: the
// anonymized log is not meant to publish click data.
inline absl::StatusOr<Histogram> HistogramsFromAnonymous(
    const KQueryAnonymousLog& anon, ItemKind kind,
    const ItemOptions& options = {}) {
  if (kind == ItemKind::kClick) {
    return absl::InvalidArgumentError(
        "k-query anonymous logs do not publish click histograms");
  }
  std::unordered_map<std::string, std::set<std::string>> per_user;
  for (const auto& session : anon.sessions) {
    std::vector<std::string> items;
    AppendSessionItems(session.entries, kind, options, items);
    per_user[session.source_user].insert(items.begin(), items.end());
  }
  Histogram h;
  h.kind = kind;
  for (const auto& [user, items] : per_user) {
    for (const auto& item : items) ++h.counts[item];
  }
  return h;
}

// Native TSV with the session number in the user column.
inline void WriteAnonymousTsv(const KQueryAnonymousLog& anon, std::ostream& out) {
  for (const auto& s : anon.sessions) {
    for (const auto& e : s.entries) {
      out << s.session_number << '\t' << absl::StrJoin(e.query, " ") << '\t'
          << e.time << '\t' << absl::StrJoin(e.clicks, ",") << '\n';
    }
  }
}

}  // namespace zealous

#endif  // ZEALOUS_ANONYMITY_HPP_
