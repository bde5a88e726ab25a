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

// The two-threshold frequent-item sanitizer and its parameter planner.
//
// Sanitization of one item kind runs six steps:
//   1. every user keeps up to m distinct items, chosen at random;
//   2. the kept items form a user-level histogram (c_k users per item k);
//   3. items with c_k < tau are dropped;
//   4. Lap(lambda) noise is added to each remaining count;
//   5. items whose noisy count is <= tau' are dropped;
//   6. the survivors and their noisy counts are published.
//
// With lambda >= 2m/eps and a large enough gap tau' - tau the release is
// (eps, delta)-probabilistically differentially private; the planners below
// compute the parameters in both directions.

#ifndef ZEALOUS_ZEALOUS_HPP_
#define ZEALOUS_ZEALOUS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"

namespace zealous {

enum class PrivacyFlavor { kProbabilisticDp, kIndistinguishability };

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.001;
  PrivacyFlavor flavor = PrivacyFlavor::kProbabilisticDp;

  absl::Status Validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon must be positive, got ", epsilon));
    }
    if (!(delta > 0 && delta < 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta must lie in (0, 1), got ", delta));
    }
    return absl::OkStatus();
  }
};

// An achieved (epsilon, delta) pair. `clamped` is set when the raw delta
// exceeded 1 and was reported as 1.
struct Guarantee {
  double epsilon = 0;
  double delta = 1;
  bool clamped = false;
};

struct ZealousPlan {
  int m = 1;
  double lambda = 1;
  double tau = 1;
  double tau_prime = 2;
  // Number of users the plan was computed for; unset for plans that do not
  // depend on it (indistinguishability planning without a log).
  std::optional<int64_t> users;
  std::optional<Guarantee> prob_dp;
  Guarantee indist;

  absl::Status Validate() const {
    if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
    if (!(lambda > 0) || !std::isfinite(lambda)) {
      return absl::InvalidArgumentError("lambda must be positive");
    }
    if (!(tau > 0)) return absl::InvalidArgumentError("tau must be positive");
    if (!(tau_prime > tau)) {
      return absl::InvalidArgumentError(
          absl::StrCat("tau' (", tau_prime, ") must exceed tau (", tau, ")"));
    }
    if (users.has_value() && *users < 1) {
      return absl::InvalidArgumentError("user count must be >= 1");
    }
    return absl::OkStatus();
  }
};

// Lower bound on tau' - tau that keeps the per-item density ratio of an item
// entering the histogram at e^{1/lambda}.
inline double RatioGap(double lambda) {
  return -lambda * std::log(2.0 - 2.0 * std::exp(-1.0 / lambda));
}

// Gap needed so that the count-tau items leak with probability <= delta.
inline double BreachGap(double lambda, double tau, int m, int64_t users,
                        double delta) {
  return lambda * std::log(static_cast<double>(users) * m / (2.0 * delta * tau));
}

// eps = 2m/lambda and delta = (U m / (2 tau)) e^{-(tau' - tau)/lambda},
// clamped to 1.
inline Guarantee AchievedDelta(double lambda, double tau, double tau_prime,
                               int m, int64_t users) {
  Guarantee g;
  g.epsilon = 2.0 * m / lambda;
  const double log_delta =
      std::log(static_cast<double>(users) * m / (2.0 * tau)) -
      (tau_prime - tau) / lambda;
  if (log_delta >= 0) {
    g.delta = 1;
    g.clamped = log_delta > 0;
  } else {
    g.delta = std::exp(log_delta);
  }
  return g;
}

// eps' = 2m/lambda and delta' = (m/2) e^{-(tau' - m)/lambda}, clamped to 1.
inline Guarantee AchievedDeltaPrime(double lambda, double tau_prime, int m) {
  Guarantee g;
  g.epsilon = 2.0 * m / lambda;
  const double log_delta = std::log(m / 2.0) - (tau_prime - m) / lambda;
  if (log_delta >= 0) {
    g.delta = 1;
    g.clamped = log_delta > 0;
  } else {
    g.delta = std::exp(log_delta);
  }
  return g;
}

// The tau that minimizes tau' for a fixed budget: ceil(2m/eps).
inline double OptimalTau(double epsilon, int m) {
  return std::ceil(2.0 * m / epsilon * (1.0 - 1e-12));
}

// Indistinguishability of a plan. With tau = 1 this is the closed form in
// AchievedDeltaPrime; otherwise the probabilistic guarantee carries over
// unchanged, since probabilistic DP implies indistinguishability.
inline Guarantee IndistinguishabilityOf(double lambda, double tau,
                                        double tau_prime, int m,
                                        const std::optional<Guarantee>& prob) {
  if (tau == 1.0 && tau_prime > m) return AchievedDeltaPrime(lambda, tau_prime, m);
  if (prob.has_value()) return *prob;
  return Guarantee{2.0 * m / lambda, 1.0, false};
}

// Plans lambda and tau' for (eps, delta)-probabilistic differential privacy.
// When tau is absent it is set to ceil(2m/eps).
inline absl::StatusOr<ZealousPlan> PlanProbabilistic(
    double epsilon, double delta, int m, int64_t users,
    std::optional<double> tau = std::nullopt) {
  if (auto s = PrivacyBudget{epsilon, delta}.Validate(); !s.ok()) return s;
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  if (users < 1) return absl::InvalidArgumentError("user count must be >= 1");
  if (tau.has_value() && !(*tau > 0 && std::isfinite(*tau))) {
    return absl::InvalidArgumentError("tau must be positive");
  }
  ZealousPlan plan;
  plan.m = m;
  plan.users = users;
  plan.lambda = 2.0 * m / epsilon;
  plan.tau = tau.value_or(OptimalTau(epsilon, m));
  plan.tau_prime =
      plan.tau + std::max(RatioGap(plan.lambda),
                          BreachGap(plan.lambda, plan.tau, m, users, delta));
  plan.prob_dp = AchievedDelta(plan.lambda, plan.tau, plan.tau_prime, m, users);
  plan.indist = IndistinguishabilityOf(plan.lambda, plan.tau, plan.tau_prime,
                                       m, plan.prob_dp);
  return plan;
}

// tau' = m (1 - ln(2 delta' / m) / eps').
inline double IndistinguishableTauPrime(double epsilon_prime,
                                        double delta_prime, int m) {
  return m * (1.0 - std::log(2.0 * delta_prime / m) / epsilon_prime);
}

// Plans lambda = 2m/eps', tau = 1 and tau' from the indistinguishability
// threshold formula. `achieved.indist` reports the delta' this plan actually
// provides, which can be larger than the requested one.
inline absl::StatusOr<ZealousPlan> PlanIndistinguishable(
    double epsilon_prime, double delta_prime, int m,
    std::optional<int64_t> users = std::nullopt) {
  if (auto s = PrivacyBudget{epsilon_prime, delta_prime,
                             PrivacyFlavor::kIndistinguishability}
                   .Validate();
      !s.ok()) {
    return s;
  }
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  if (users.has_value() && *users < 1) {
    return absl::InvalidArgumentError("user count must be >= 1");
  }
  ZealousPlan plan;
  plan.m = m;
  plan.users = users;
  plan.lambda = 2.0 * m / epsilon_prime;
  plan.tau = 1;
  plan.tau_prime = IndistinguishableTauPrime(epsilon_prime, delta_prime, m);
  if (!(plan.tau_prime > plan.tau)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "delta' = ", delta_prime, " leaves no gap between the thresholds"));
  }
  if (users.has_value()) {
    plan.prob_dp =
        AchievedDelta(plan.lambda, plan.tau, plan.tau_prime, m, *users);
  }
  plan.indist = IndistinguishabilityOf(plan.lambda, plan.tau, plan.tau_prime,
                                       m, plan.prob_dp);
  return plan;
}

// Builds a plan from explicit (lambda, tau, tau') and reports what it achieves.
inline absl::StatusOr<ZealousPlan> PlanFromParameters(
    double lambda, double tau, double tau_prime, int m,
    std::optional<int64_t> users) {
  ZealousPlan plan;
  plan.m = m;
  plan.lambda = lambda;
  plan.tau = tau;
  plan.tau_prime = tau_prime;
  plan.users = users;
  if (auto s = plan.Validate(); !s.ok()) return s;
  if (users.has_value()) {
    plan.prob_dp = AchievedDelta(lambda, tau, tau_prime, m, *users);
  }
  plan.indist = IndistinguishabilityOf(lambda, tau, tau_prime, m, plan.prob_dp);
  return plan;
}

struct SanitizedHistogram {
  ItemKind kind = ItemKind::kKeyword;
  std::map<std::string, double> entries;  // item -> noisy count (> tau')
  ZealousPlan plan;
  uint64_t seed = 0;
};

// Noise for `item` is drawn from the stream keyed by (seed, item), so the
// result does not depend on iteration order.
inline double ItemNoise(double lambda, uint64_t seed, const std::string& item,
                        StreamDomain domain = StreamDomain::kNoise) {
  RandomStream rng(seed, StableHash(item), domain);
  return SampleLaplace(lambda, rng);
}

// Steps 3-6 on an already selected histogram.
inline SanitizedHistogram SanitizeHistogram(const Histogram& selected,
                                            const ZealousPlan& plan,
                                            uint64_t seed) {
  SanitizedHistogram out;
  out.kind = selected.kind;
  out.plan = plan;
  out.seed = seed;
  for (const auto& [item, count] : selected.counts) {
    if (static_cast<double>(count) < plan.tau) continue;
    const double noisy = count + ItemNoise(plan.lambda, seed, item);
    if (noisy <= plan.tau_prime) continue;
    out.entries.emplace(item, noisy);
  }
  return out;
}

inline absl::StatusOr<SanitizedHistogram> Sanitize(
    const SearchLog& log, ItemKind kind, const ZealousPlan& plan,
    uint64_t seed, const ItemOptions& options = {}) {
  if (auto s = plan.Validate(); !s.ok()) return s;
  if (plan.users.has_value() && *plan.users != log.user_count()) {
    return absl::FailedPreconditionError(
        absl::StrCat("plan was computed for ", *plan.users,
                     " users but the log has ", log.user_count()));
  }
  const Selection selection = SelectPerUser(log, kind, plan.m, seed, options);
  return SanitizeHistogram(selection.histogram, plan, seed);
}

struct ClickCount {
  std::string url;
  int64_t raw = 0;  // distinct users who clicked url for the query
  double noisy = 0;
};

// Per published query, the noisy click counts of its top_n_docs documents.
// Documents are the clicked URLs by descending raw count (ties by URL); when a
// query has fewer clicked URLs the remaining ranks are "#rank<i>" slots with a
// raw count of zero. No thresholding is applied.
inline absl::StatusOr<std::map<std::string, std::vector<ClickCount>>>
PublishClicks(const SearchLog& log, const SanitizedHistogram& frequent_queries,
              int top_n_docs, double lambda, uint64_t seed,
              const ItemOptions& options = {}) {
  if (frequent_queries.kind != ItemKind::kQuery) {
    return absl::InvalidArgumentError(
        "click publishing needs a sanitized query histogram");
  }
  if (top_n_docs < 1) return absl::InvalidArgumentError("top_n_docs must be >= 1");
  if (!(lambda > 0)) return absl::InvalidArgumentError("lambda must be positive");

  std::unordered_map<std::string, std::unordered_map<std::string, int64_t>>
      clicks;
  for (const auto& user : log.users()) {
    std::vector<std::string> items =
        DistinctItems(ItemsOfUser(user, ItemKind::kClick, options));
    for (const auto& item : items) {
      auto [query, url] = SplitPairItem(item);
      const std::string q(query);
      if (frequent_queries.entries.count(q) == 0) continue;
      ++clicks[q][std::string(url)];
    }
  }

  std::map<std::string, std::vector<ClickCount>> out;
  for (const auto& [query, noisy_count] : frequent_queries.entries) {
    std::vector<ClickCount> docs;
    if (auto it = clicks.find(query); it != clicks.end()) {
      for (const auto& [url, raw] : it->second) docs.push_back({url, raw, 0});
    }
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
      if (a.raw != b.raw) return a.raw > b.raw;
      return a.url < b.url;
    });
    if (static_cast<int>(docs.size()) > top_n_docs) docs.resize(top_n_docs);
    for (int i = static_cast<int>(docs.size()); i < top_n_docs; ++i) {
      docs.push_back({absl::StrCat("#rank", i), 0, 0});
    }
    for (auto& doc : docs) {
      doc.noisy = doc.raw + ItemNoise(lambda, seed,
                                      MakePairItem(query, doc.url),
                                      StreamDomain::kClickNoise);
    }
    out.emplace(query, std::move(docs));
  }
  return out;
}

}  // namespace zealous

#endif  // ZEALOUS_ZEALOUS_HPP_
