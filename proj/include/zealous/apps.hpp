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

// Two downstream consumers of published histograms: choosing which posting
// lists of an inverted index to keep in memory, and ranking query
// substitutions from query-pair counts.

#ifndef ZEALOUS_APPS_HPP_
#define ZEALOUS_APPS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"
#include "zealous/synthetic.hpp"
#include "zealous/utility.hpp"

namespace zealous {

// ---------------------------------------------------------------------------
// Index caching

struct PostingListModel {
  std::unordered_map<std::string, int64_t> lengths;  // documents per keyword
  int64_t bytes_per_posting = 8;
  int64_t memory_budget = int64_t{1} << 30;
  int64_t max_postings = 200'000;  // lists are truncated to this length

  absl::Status Validate() const {
    if (bytes_per_posting < 1) {
      return absl::InvalidArgumentError("bytes_per_posting must be >= 1");
    }
    if (memory_budget < 0) return absl::InvalidArgumentError("negative budget");
    for (const auto& [kw, len] : lengths) {
      if (len < 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("posting list of '", kw, "' is empty"));
      }
    }
    return absl::OkStatus();
  }

  int64_t StoredBytes(int64_t length) const {
    return std::min(length, max_postings) * bytes_per_posting;
  }
};

// Posting-list lengths for synthetic keywords: length L in [1, corpus_size]
// with P(L) proportional to L^-exponent, deterministic per (seed, keyword).
inline PostingListModel SyntheticPostings(const std::vector<std::string>& keywords,
                                          int64_t corpus_size, double exponent,
                                          uint64_t seed) {
  PostingListModel model;
  const ZipfSampler sampler(std::max<int64_t>(corpus_size, 1), exponent);
  for (const auto& kw : keywords) {
    RandomStream rng(seed, StableHash(kw), StreamDomain::kSynthetic);
    model.lengths[kw] = sampler.Sample(rng) + 1;
  }
  return model;
}

struct CachePlan {
  std::vector<std::string> cached;  // in insertion order
  int64_t bytes_used = 0;
  double hit_probability = 0;  // under the planning workload
};

struct CacheOptions {
  // Keep scanning past a list that does not fit instead of stopping.
  bool skip_ahead = false;
};

// Greedy packing by score = frequency / document count. Lists are added in
// score order until one does not fit.
inline absl::StatusOr<CachePlan> GreedyCache(
    const std::map<std::string, double>& workload,
    const PostingListModel& postings, const CacheOptions& options = {}) {
  if (workload.empty()) return absl::InvalidArgumentError("empty workload");
  if (auto s = postings.Validate(); !s.ok()) return s;

  struct Candidate {
    std::string keyword;
    double weight;
    double score;
    int64_t bytes;
  };
  std::vector<Candidate> candidates;
  double total = 0;
  for (const auto& [kw, w] : workload) {
    const double weight = std::max(0.0, w);
    total += weight;
    auto it = postings.lengths.find(kw);
    if (it == postings.lengths.end()) {
      return absl::NotFoundError(
          absl::StrCat("no posting list for keyword '", kw, "'"));
    }
    candidates.push_back({kw, weight, weight / static_cast<double>(it->second),
                          postings.StoredBytes(it->second)});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.keyword < b.keyword;
            });

  CachePlan plan;
  double hit_weight = 0;
  for (const auto& c : candidates) {
    if (plan.bytes_used + c.bytes > postings.memory_budget) {
      if (options.skip_ahead) continue;
      break;
    }
    plan.bytes_used += c.bytes;
    plan.cached.push_back(c.keyword);
    hit_weight += c.weight;
  }
  plan.hit_probability = total > 0 ? hit_weight / total : 0.0;
  return plan;
}

// Plans the cache with the sanitized workload and scores it with the truth.
inline absl::StatusOr<double> EvaluateCache(
    const std::map<std::string, double>& truth_workload,
    const std::map<std::string, double>& sanitized_workload,
    const PostingListModel& postings, const CacheOptions& options = {}) {
  if (truth_workload.empty()) return absl::InvalidArgumentError("empty truth workload");
  if (sanitized_workload.empty()) return 0.0;
  auto plan = GreedyCache(sanitized_workload, postings, options);
  if (!plan.ok()) return plan.status();
  double total = 0, hit = 0;
  for (const auto& [kw, w] : truth_workload) total += std::max(0.0, w);
  for (const auto& kw : plan->cached) {
    auto it = truth_workload.find(kw);
    if (it != truth_workload.end()) hit += std::max(0.0, it->second);
  }
  return total > 0 ? hit / total : 0.0;
}

// ---------------------------------------------------------------------------
// Query substitution

// Successor lists built once from a query-pair histogram.
class SubstitutionIndex {
 public:
  explicit SubstitutionIndex(const std::map<std::string, double>& pair_counts) {
    for (const auto& [item, count] : pair_counts) {
      auto [first, second] = SplitPairItem(item);
      if (second.empty() || first == second) continue;  // not a rewrite
      successors_[std::string(first)].emplace_back(std::string(second), count);
    }
    for (auto& [query, list] : successors_) {
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
    }
  }

  // Top-j successors of `query` by pair count; ties lexicographic.
  RankedList Substitutions(const std::string& query, int64_t j) const {
    RankedList out{query, {}};
    auto it = successors_.find(query);
    if (it == successors_.end() || j < 1) return out;
    for (const auto& [next, count] : it->second) {
      if (static_cast<int64_t>(out.substitutions.size()) >= j) break;
      out.substitutions.push_back(next);
    }
    return out;
  }

 private:
  std::unordered_map<std::string, std::vector<std::pair<std::string, double>>>
      successors_;
};

inline RankedList Substitutions(const std::map<std::string, double>& pair_counts,
                                const std::string& query, int64_t j) {
  return SubstitutionIndex(pair_counts).Substitutions(query, j);
}

struct SubstitutionEval {
  // Averages over queries where both rankings are non-empty; unset when there
  // are none.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> map;
  std::optional<double> ndcg;
  // Fraction of queries with ground-truth substitutions for which the
  // sanitized pairs also produce at least one.
  double coverage = 0;
  int64_t productive_queries = 0;
  int64_t scored_queries = 0;
};

inline SubstitutionEval EvaluateSubstitutions(
    const std::map<std::string, double>& truth_pairs,
    const std::map<std::string, double>& sanitized_pairs,
    const std::vector<std::string>& eval_queries, int64_t j) {
  const SubstitutionIndex truth_index(truth_pairs);
  const SubstitutionIndex sanitized_index(sanitized_pairs);
  SubstitutionEval eval;
  RankingScores sum;
  int64_t covered = 0;
  for (const auto& q : eval_queries) {
    const RankedList truth = truth_index.Substitutions(q, j);
    const RankedList candidate = sanitized_index.Substitutions(q, j);
    if (truth.substitutions.empty()) continue;
    ++eval.productive_queries;
    if (candidate.substitutions.empty()) continue;
    ++covered;
    if (auto s = RankingMetrics(truth, candidate, j)) {
      sum.precision += s->precision;
      sum.recall += s->recall;
      sum.map += s->map;
      sum.ndcg += s->ndcg;
      ++eval.scored_queries;
    }
  }
  if (eval.productive_queries > 0) {
    eval.coverage = static_cast<double>(covered) /
                    static_cast<double>(eval.productive_queries);
  }
  if (eval.scored_queries > 0) {
    const double n = static_cast<double>(eval.scored_queries);
    eval.precision = sum.precision / n;
    eval.recall = sum.recall / n;
    eval.map = sum.map / n;
    eval.ndcg = sum.ndcg / n;
  }
  return eval;
}

}  // namespace zealous

#endif  // ZEALOUS_APPS_HPP_
