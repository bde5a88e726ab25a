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

// Utility metrics for sanitized histograms: slack-based inaccuracy, retention
// probability, count distances, top-j coverage and ranking metrics for query
// substitution lists.

#ifndef ZEALOUS_UTILITY_HPP_
#define ZEALOUS_UTILITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"
#include "zealous/zealous.hpp"

namespace zealous {

// Target threshold tau* with slack xi: items above tau* + xi are very
// frequent, items below tau* - xi very infrequent.
struct SlackSpec {
  double tau_star = 0;
  double xi = 0;

  absl::Status Validate() const {
    if (!(xi >= 0)) return absl::InvalidArgumentError("xi must be >= 0");
    if (!(tau_star - xi >= 0)) {
      return absl::InvalidArgumentError("tau* - xi must be >= 0");
    }
    return absl::OkStatus();
  }
};

struct UtilityReport {
  double inaccuracy = 0;       // retain_failures + filter_failures
  double retain_failures = 0;  // very-frequent items left out, per run
  double filter_failures = 0;  // very-infrequent items published, per run
  double avg_l1 = 0;
  double kl_divergence = 0;
  double top_j_coverage = 0;
  double count_diff = 0;
};

// Averages the slack inaccuracy over repeated runs of one algorithm.
// Items absent from `truth` have frequency 0.
inline absl::StatusOr<UtilityReport> EmpiricalInaccuracy(
    const Histogram& truth,
    const std::vector<std::set<std::string>>& published_sets,
    const SlackSpec& slack) {
  if (auto s = slack.Validate(); !s.ok()) return s;
  UtilityReport report;
  if (published_sets.empty()) return report;
  const double low = slack.tau_star - slack.xi;
  const double high = slack.tau_star + slack.xi;
  for (const auto& out : published_sets) {
    for (const auto& [item, f] : truth.counts) {
      if (f > high && !out.count(item)) report.retain_failures += 1;
    }
    for (const auto& item : out) {
      if (static_cast<double>(truth.Count(item)) < low)
        report.filter_failures += 1;
    }
  }
  const double runs = static_cast<double>(published_sets.size());
  report.retain_failures /= runs;
  report.filter_failures /= runs;
  report.inaccuracy = report.retain_failures + report.filter_failures;
  return report;
}

// P[count + Lap(lambda) > tau']; zero below the first threshold.
inline double RetentionProbability(double count, const ZealousPlan& plan) {
  if (count < plan.tau) return 0.0;
  return LaplaceSurvival(plan.tau_prime - count, plan.lambda);
}

// Item lists ordered by descending count, ties lexicographic.
template <typename Map>
std::vector<std::string> RankItems(const Map& counts) {
  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(counts.size());
  for (const auto& [item, c] : counts) rows.emplace_back(item, static_cast<double>(c));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> items;
  items.reserve(rows.size());
  for (auto& r : rows) items.push_back(std::move(r.first));
  return items;
}

// The j most frequent items of `truth`; all items when j exceeds them.
inline std::vector<std::string> TopJ(const Histogram& truth, int64_t j) {
  std::vector<std::string> items = RankItems(truth.counts);
  if (static_cast<int64_t>(items.size()) > j) items.resize(j);
  return items;
}

inline std::map<std::string, double> AsCounts(const Histogram& h) {
  std::map<std::string, double> out;
  for (const auto& [item, c] : h.counts) out.emplace(item, static_cast<double>(c));
  return out;
}

inline std::map<std::string, double> AsCounts(const SanitizedHistogram& h) {
  return h.entries;
}

enum class DistanceMetric { kAvgL1, kKl, kAvgCountDiff };

enum class L1Normalization {
  kPerItem,  // mean over the top-j items
  kTotal,    // plain sum over the top-j items
};

struct DistanceOptions {
  int64_t j = 100;
  L1Normalization l1 = L1Normalization::kPerItem;
};

// Distance between the truth and a sanitized histogram.
//
// kAvgL1 and kKl compare relative frequencies restricted to the top-j truth
// items (each side normalized over those items). kKl is KL(sanitized || truth)
// in nats: truth is positive on every top-j item so the value is finite
// unless the sanitized side has no mass there at all (+inf).
//
// kAvgCountDiff scales the sanitized counts so both totals agree, then
// averages |truth - scaled| over every item with a non-zero truth count;
// unpublished items contribute their whole truth count.
inline absl::StatusOr<double> CountDistance(
    const Histogram& truth, const std::map<std::string, double>& sanitized,
    DistanceMetric metric, const DistanceOptions& options = {}) {
  if (truth.counts.empty()) {
    return absl::InvalidArgumentError("truth histogram is empty");
  }
  auto sanitized_count = [&](const std::string& item) {
    auto it = sanitized.find(item);
    return it == sanitized.end() ? 0.0 : std::max(0.0, it->second);
  };

  if (metric == DistanceMetric::kAvgCountDiff) {
    double truth_total = 0, sanitized_total = 0;
    for (const auto& [item, c] : truth.counts) truth_total += c;
    for (const auto& [item, c] : sanitized) sanitized_total += std::max(0.0, c);
    const double scale =
        sanitized_total > 0 ? truth_total / sanitized_total : 0.0;
    double sum = 0;
    int64_t n = 0;
    for (const auto& [item, c] : truth.counts) {
      if (c <= 0) continue;
      sum += std::fabs(static_cast<double>(c) - scale * sanitized_count(item));
      ++n;
    }
    return sum / static_cast<double>(n);
  }

  if (options.j < 1) return absl::InvalidArgumentError("j must be >= 1");
  const std::vector<std::string> top = TopJ(truth, options.j);
  double truth_mass = 0, sanitized_mass = 0;
  for (const auto& item : top) {
    truth_mass += truth.Count(item);
    sanitized_mass += sanitized_count(item);
  }
  if (metric == DistanceMetric::kAvgL1) {
    double sum = 0;
    for (const auto& item : top) {
      const double p = truth.Count(item) / truth_mass;
      const double q =
          sanitized_mass > 0 ? sanitized_count(item) / sanitized_mass : 0.0;
      sum += std::fabs(p - q);
    }
    return options.l1 == L1Normalization::kPerItem
               ? sum / static_cast<double>(top.size())
               : sum;
  }
  if (sanitized_mass <= 0) return std::numeric_limits<double>::infinity();
  double kl = 0;
  for (const auto& item : top) {
    const double p = truth.Count(item) / truth_mass;
    const double q = sanitized_count(item) / sanitized_mass;
    if (q > 0) kl += q * std::log(q / p);
  }
  return kl;
}

// Fraction of the top-j truth items that were published. j is capped at the
// number of distinct truth items.
template <typename Published>
absl::StatusOr<double> TopJCoverage(const Histogram& truth,
                                    const Published& published, int64_t j) {
  if (j < 1) return absl::InvalidArgumentError("j must be >= 1");
  if (truth.counts.empty()) {
    return absl::InvalidArgumentError("truth histogram is empty");
  }
  const std::vector<std::string> top = TopJ(truth, j);
  int64_t hits = 0;
  for (const auto& item : top) hits += published.count(item) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(top.size());
}

// ---------------------------------------------------------------------------
// Ranking metrics

struct RankedList {
  std::string query;
  std::vector<std::string> substitutions;  // best first, no duplicates
};

struct RankingScores {
  double precision = 0;
  double recall = 0;
  double map = 0;
  double ndcg = 0;
};

// Compares a candidate substitution list against the ground truth, both cut to
// their first j entries. Returns nullopt when either list is empty: precision
// (or recall) would divide by zero, so such queries are left out of averages.
//
// MAP is sum over truth positions i of (i + 1) / (r_i + 1), where r_i is the
// position of truth[i] in the candidate list and 0 when it is absent.
// NDCG gives the candidate at position i the relevance j - (its truth
// position), or 0 when absent, discounts by log2(i + 2) and normalizes by the
// same sum over the truth list itself.
inline std::optional<RankingScores> RankingMetrics(const RankedList& truth,
                                                   const RankedList& candidate,
                                                   int64_t j) {
  auto cut = [j](const std::vector<std::string>& v) {
    return std::vector<std::string>(
        v.begin(), v.begin() + std::min<int64_t>(j, static_cast<int64_t>(v.size())));
  };
  const std::vector<std::string> t = cut(truth.substitutions);
  const std::vector<std::string> c = cut(candidate.substitutions);
  if (t.empty() || c.empty()) return std::nullopt;

  std::unordered_map<std::string, int64_t> truth_rank, candidate_rank;
  for (size_t i = 0; i < t.size(); ++i) truth_rank.emplace(t[i], i);
  for (size_t i = 0; i < c.size(); ++i) candidate_rank.emplace(c[i], i);

  int64_t common = 0;
  for (const auto& item : c) common += truth_rank.count(item) ? 1 : 0;

  RankingScores s;
  s.precision = static_cast<double>(common) / static_cast<double>(c.size());
  s.recall = static_cast<double>(common) / static_cast<double>(t.size());

  for (size_t i = 0; i < t.size(); ++i) {
    auto it = candidate_rank.find(t[i]);
    const int64_t rank = it == candidate_rank.end() ? 0 : it->second;
    s.map += static_cast<double>(i + 1) / static_cast<double>(rank + 1);
  }

  double dcg = 0, ideal = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    auto it = truth_rank.find(c[i]);
    if (it == truth_rank.end()) continue;
    dcg += static_cast<double>(j - it->second) / std::log2(i + 2.0);
  }
  for (size_t r = 0; r < t.size(); ++r) {
    ideal += static_cast<double>(j - static_cast<int64_t>(r)) / std::log2(r + 2.0);
  }
  s.ndcg = dcg / ideal;
  return s;
}

}  // namespace zealous

#endif  // ZEALOUS_UTILITY_HPP_
