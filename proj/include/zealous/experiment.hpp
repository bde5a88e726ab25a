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

// Parameter sweeps over a log: ZEALOUS across (kind, m, epsilon) and k-query
// anonymity across k, each scored against the log's own histograms.

#ifndef ZEALOUS_EXPERIMENT_HPP_
#define ZEALOUS_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "zealous/anonymity.hpp"
#include "zealous/io.hpp"
#include "zealous/search_log.hpp"
#include "zealous/utility.hpp"
#include "zealous/zealous.hpp"

namespace zealous {

struct SweepConfig {
  std::vector<ItemKind> kinds = {ItemKind::kKeyword};
  std::vector<double> epsilons = {1.0};
  std::vector<int64_t> ks;  // empty: no k-anonymity baseline
  std::vector<int> ms = {1};
  std::vector<int64_t> js = {10};
  double delta = 0.001;
  uint64_t seed = 1;
  int runs = 1;  // ZEALOUS metrics are averaged over seeds seed..seed+runs-1
  L1Normalization l1 = L1Normalization::kPerItem;
  ItemOptions options;
  int threads = 0;  // 0: one per hardware thread

  absl::Status Validate() const {
    if (kinds.empty() || ms.empty() || js.empty() ||
        (epsilons.empty() && ks.empty())) {
      return absl::InvalidArgumentError("sweep lists must not be empty");
    }
    if (!(delta > 0 && delta < 1)) {
      return absl::InvalidArgumentError("delta must lie in (0, 1)");
    }
    if (runs < 1) return absl::InvalidArgumentError("runs must be >= 1");
    for (double e : epsilons) {
      if (!(e > 0)) return absl::InvalidArgumentError("epsilon must be positive");
    }
    for (int m : ms) {
      if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
    }
    for (int64_t k : ks) {
      if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
    }
    for (int64_t j : js) {
      if (j < 1) return absl::InvalidArgumentError("j must be >= 1");
    }
    return absl::OkStatus();
  }
};

// One metric value. `m` and `j` are unset where they do not apply.
struct SweepRow {
  std::string algorithm;
  ItemKind kind = ItemKind::kKeyword;
  std::optional<int> m;
  std::string parameter;  // "epsilon", "k" or "none"
  double parameter_value = 0;
  std::optional<int64_t> j;
  std::string metric;
  double value = 0;
};

// distinct_items, total_items and count_diff, then avg_l1, kl and
// top_j_coverage for every j.
inline std::vector<std::pair<std::string, std::optional<int64_t>>> MetricNames(const std::vector<int64_t>& js) {
  std::vector<std::pair<std::string, std::optional<int64_t>>> names = {
      {"distinct_items", std::nullopt},
      {"total_items", std::nullopt},
      {"count_diff", std::nullopt}};
  for (int64_t j : js) {
    for (const char* metric : {"avg_l1", "kl", "top_j_coverage"}) {
      names.emplace_back(metric, j);
    }
  }
  return names;
}

// Values in MetricNames order.
inline absl::StatusOr<std::vector<double>> PublishedMetrics(
    const Histogram& truth, const std::map<std::string, double>& published,
    const std::vector<int64_t>& js, L1Normalization l1) {
  std::vector<double> values;
  double total = 0;
  for (const auto& [item, c] : published) total += c;
  values.push_back(static_cast<double>(published.size()));
  values.push_back(total);
  auto diff = CountDistance(truth, published, DistanceMetric::kAvgCountDiff);
  if (!diff.ok()) return diff.status();
  values.push_back(*diff);
  for (int64_t j : js) {
    const DistanceOptions opts{j, l1};
    auto avg_l1 = CountDistance(truth, published, DistanceMetric::kAvgL1, opts);
    if (!avg_l1.ok()) return avg_l1.status();
    auto kl = CountDistance(truth, published, DistanceMetric::kKl, opts);
    if (!kl.ok()) return kl.status();
    auto coverage = TopJCoverage(truth, published, j);
    if (!coverage.ok()) return coverage.status();
    values.insert(values.end(), {*avg_l1, *kl, *coverage});
  }
  return values;
}

inline absl::StatusOr<std::vector<SweepRow>> MetricRows(
    const SweepRow& prototype, const Histogram& truth,
    const std::map<std::string, double>& published,
    const std::vector<int64_t>& js, L1Normalization l1) {
  auto names = MetricNames(js);
  auto values = PublishedMetrics(truth, published, js, l1);
  if (!values.ok()) return values.status();
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < names.size(); ++i) {
    SweepRow row = prototype;
    row.metric = names[i].first;
    row.j = names[i].second;
    row.value = (*values)[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace internal {

// Runs every task, using up to `threads` workers. Results keep task order.
template <typename T>
std::vector<T> RunTasks(const std::vector<std::function<T()>>& tasks,
                        int threads) {
  std::vector<std::optional<T>> results(tasks.size());
  size_t workers = threads > 0 ? static_cast<size_t>(threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, tasks.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace internal

inline absl::StatusOr<std::vector<SweepRow>> RunSweep(const SearchLog& log,
                                                      const SweepConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (log.user_count() == 0) return absl::InvalidArgumentError("empty log");

  std::map<ItemKind, Histogram> truth;
  for (ItemKind kind : config.kinds) {
    truth[kind] = BuildHistogram(log, kind, config.options);
    if (truth[kind].counts.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "log has no ", AbslView(ItemKindName(kind)), " items"));
    }
  }

  using Result = absl::StatusOr<std::vector<SweepRow>>;
  std::vector<std::function<Result()>> tasks;
  for (ItemKind kind : config.kinds) {
    for (int m : config.ms) {
      for (double epsilon : config.epsilons) {
        tasks.push_back([&, kind, m, epsilon]() -> Result {
          auto plan = PlanProbabilistic(epsilon, config.delta, m, log.user_count());
          if (!plan.ok()) return plan.status();
          const Histogram& t = truth.at(kind);
          std::vector<double> sum;
          for (int r = 0; r < config.runs; ++r) {
            auto out = Sanitize(log, kind, *plan, config.seed + r, config.options);
            if (!out.ok()) return out.status();
            auto values = PublishedMetrics(t, out->entries, config.js, config.l1);
            if (!values.ok()) return values.status();
            if (sum.empty()) sum.assign(values->size(), 0.0);
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += (*values)[i];
          }
          auto names = MetricNames(config.js);
          std::vector<SweepRow> rows;
          for (size_t i = 0; i < sum.size(); ++i) {
            rows.push_back(SweepRow{"zealous", kind, m, "epsilon", epsilon,
                                    names[i].second, names[i].first,
                                    sum[i] / config.runs});
          }
          return rows;
        });
      }
    }
  }
  for (int64_t k : config.ks) {
    tasks.push_back([&, k]() -> Result {
      auto anon = KQueryAnonymize(log, k, config.seed, config.options);
      if (!anon.ok()) return anon.status();
      std::vector<SweepRow> rows;
      for (ItemKind kind : config.kinds) {
        if (kind == ItemKind::kClick) continue;  // not published by the baseline
        auto h = HistogramsFromAnonymous(*anon, kind, config.options);
        if (!h.ok()) return h.status();
        auto part = MetricRows(
            SweepRow{"k-anonymity", kind, std::nullopt, "k",
                     static_cast<double>(k), std::nullopt, "", 0},
            truth.at(kind), AsCounts(*h), config.js, config.l1);
        if (!part.ok()) return part.status();
        rows.insert(rows.end(), part->begin(), part->end());
      }
      return rows;
    });
  }

  std::vector<SweepRow> rows;
  for (auto& result : internal::RunTasks(tasks, config.threads)) {
    if (!result.ok()) return result.status();
    rows.insert(rows.end(), result->begin(), result->end());
  }
  return rows;
}

inline const std::vector<std::string>& SweepCsvHeader() {
  static const std::vector<std::string> header = {
      "algorithm", "kind", "m", "parameter", "parameter_value", "j", "metric",
      "value"};
  return header;
}

inline void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  WriteCsvRow(out, SweepCsvHeader());
  for (const auto& r : rows) {
    WriteCsvRow(out, {r.algorithm, std::string(ItemKindName(r.kind)),
                      r.m ? absl::StrCat(*r.m) : "", r.parameter,
                      FormatDouble(r.parameter_value),
                      r.j ? absl::StrCat(*r.j) : "", r.metric,
                      FormatDouble(r.value)});
  }
}

// The value of one metric from `rows`; nullopt when absent.
inline std::optional<double> FindMetric(const std::vector<SweepRow>& rows,
                                        std::string_view algorithm,
                                        ItemKind kind, std::optional<int> m,
                                        double parameter_value,
                                        std::string_view metric,
                                        std::optional<int64_t> j = std::nullopt) {
  for (const auto& r : rows) {
    if (r.algorithm == algorithm && r.kind == kind && r.m == m &&
        r.parameter_value == parameter_value && r.metric == metric && r.j == j) {
      return r.value;
    }
  }
  return std::nullopt;
}

}  // namespace zealous

#endif  // ZEALOUS_EXPERIMENT_HPP_
