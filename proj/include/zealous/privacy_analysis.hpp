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

// Executable privacy checks on small instances.
//
// For a pair of neighboring logs (S, S') these routines compute the exact
// distribution of the published item set, the joint density of a full release
// (item set plus noisy counts) and check:
//   * probabilistic DP: the breach set (outputs that contain an item whose
//     count sits exactly at the first threshold) has probability <= delta, and
//     every other output has density ratio within e^{+-eps};
//   * indistinguishability: Pr[A(S) in O] <= e^eps Pr[A(S') in O] + delta for
//     events O over release sets, including the worst event;
//   * that the first property implies the second.
// It also hosts the lower-bound calculators for plain eps-DP and the
// "sample any history but the first user's" counterexample.

#ifndef ZEALOUS_PRIVACY_ANALYSIS_HPP_
#define ZEALOUS_PRIVACY_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"
#include "zealous/utility.hpp"
#include "zealous/zealous.hpp"

namespace zealous {

// A published item set, sorted.
using ReleaseSet = std::vector<std::string>;
// A set of release sets.
using ReleaseEvent = std::vector<ReleaseSet>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Items that survive the first threshold.
inline std::vector<std::string> EligibleItems(const Histogram& h,
                                              const ZealousPlan& plan) {
  std::vector<std::string> items;
  for (const auto& [item, c] : h.counts) {
    if (static_cast<double>(c) >= plan.tau) items.push_back(item);
  }
  std::sort(items.begin(), items.end());
  return items;
}

// Items at the lowest count that still survives the first threshold; one user
// leaving drops them below it.
inline std::vector<std::string> BoundaryItems(const Histogram& h,
                                              const ZealousPlan& plan) {
  std::vector<std::string> items;
  for (const auto& [item, c] : h.counts) {
    const double count = static_cast<double>(c);
    if (count >= plan.tau && count - 1 < plan.tau) items.push_back(item);
  }
  std::sort(items.begin(), items.end());
  return items;
}

// Exact probability that the published item set equals `subset`.
inline double ReleaseSetProbability(const Histogram& h, const ZealousPlan& plan,
                                    const ReleaseSet& subset) {
  const std::set<std::string> chosen(subset.begin(), subset.end());
  double p = 1.0;
  for (const auto& item : chosen) {
    if (static_cast<double>(h.Count(item)) < plan.tau) return 0.0;
  }
  for (const auto& item : EligibleItems(h, plan)) {
    const double pass = RetentionProbability(static_cast<double>(h.Count(item)), plan);
    p *= chosen.count(item) ? pass : 1.0 - pass;
  }
  return p;
}

// All subsets of `items` in a fixed order (bitmask order).
inline std::vector<ReleaseSet> AllSubsets(const std::vector<std::string>& items) {
  std::vector<ReleaseSet> out;
  const size_t n = items.size();
  out.reserve(size_t{1} << n);
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    ReleaseSet s;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s.push_back(items[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Log of the joint density of a full release: `published` maps items to their
// noisy counts, every other eligible item must have been suppressed.
inline double LogReleaseDensity(const Histogram& h, const ZealousPlan& plan,
                                const std::map<std::string, double>& published) {
  double log_density = 0;
  for (const auto& [item, noisy] : published) {
    const double count = static_cast<double>(h.Count(item));
    if (count < plan.tau || noisy <= plan.tau_prime) return kNegInf;
    log_density += std::log(LaplacePdf(noisy - count, plan.lambda));
  }
  for (const auto& item : EligibleItems(h, plan)) {
    if (published.count(item)) continue;
    const double count = static_cast<double>(h.Count(item));
    log_density += std::log(LaplaceCdf(plan.tau_prime - count, plan.lambda));
  }
  return log_density;
}

// ---------------------------------------------------------------------------
// Oracle instances

struct OracleInstance {
  std::vector<std::string> domain;
  SearchLog log;
  SearchLog neighbor;
  ZealousPlan plan;
  ItemKind kind = ItemKind::kKeyword;
  ItemOptions options;
  double slack_xi = 0;
  double accuracy_c = 1;

  static constexpr size_t kMaxDomain = 16;
  static constexpr int64_t kMaxUsers = 6;
  static constexpr int kMaxM = 3;

  // Both logs cover the same users, at most one user's history differs, and
  // every user holds at most m distinct items so the per-user selection keeps
  // all of them.
  absl::Status Validate() const {
    if (domain.size() > kMaxDomain) {
      return absl::InvalidArgumentError("oracle domain holds at most 16 items");
    }
    if (log.user_count() > kMaxUsers || neighbor.user_count() > kMaxUsers) {
      return absl::InvalidArgumentError("oracle logs hold at most 6 users");
    }
    if (plan.m > kMaxM) return absl::InvalidArgumentError("oracle needs m <= 3");
    if (auto s = plan.Validate(); !s.ok()) return s;
    if (log.user_count() != neighbor.user_count()) {
      return absl::InvalidArgumentError("neighbors must have the same users");
    }
    const std::set<std::string> dom(domain.begin(), domain.end());
    int differing = 0;
    for (size_t u = 0; u < log.users().size(); ++u) {
      const auto& a = log.users()[u];
      const auto& b = neighbor.users()[u];
      if (a.user_id != b.user_id) {
        return absl::InvalidArgumentError("neighbors must have the same users");
      }
      const auto items_a = DistinctItems(ItemsOfUser(a, kind, options));
      const auto items_b = DistinctItems(ItemsOfUser(b, kind, options));
      if (items_a != items_b) ++differing;
      for (const auto* items : {&items_a, &items_b}) {
        if (static_cast<int>(items->size()) > plan.m) {
          return absl::InvalidArgumentError(absl::StrCat(
              "user ", a.user_id, " holds more than m distinct items"));
        }
        for (const auto& item : *items) {
          if (!dom.count(item)) {
            return absl::InvalidArgumentError(
                absl::StrCat("item '", item, "' is outside the domain"));
          }
        }
      }
    }
    if (differing > 1) {
      return absl::InvalidArgumentError(
          "logs differ in more than one user's history");
    }
    return absl::OkStatus();
  }

  Histogram LogHistogram() const { return BuildHistogram(log, kind, options); }
  Histogram NeighborHistogram() const {
    return BuildHistogram(neighbor, kind, options);
  }

  // The plan's probabilistic guarantee, computed for this instance's user
  // count when the plan does not carry one.
  Guarantee ProbGuarantee() const {
    if (plan.prob_dp.has_value()) return *plan.prob_dp;
    return AchievedDelta(plan.lambda, plan.tau, plan.tau_prime, plan.m,
                         log.user_count());
  }
};

// One single-keyword query per item, one second apart.
inline SearchLog LogFromItemSets(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        users) {
  std::vector<SearchEntry> entries;
  for (const auto& [user, items] : users) {
    int64_t t = 0;
    for (const auto& item : items) {
      entries.push_back(SearchEntry{user, {item}, t++, {}});
    }
  }
  return SearchLog::FromEntries(std::move(entries));
}

struct RandomInstanceOptions {
  size_t max_domain = 8;
  int64_t max_users = 6;
  int max_m = 3;
  double min_delta = 1e-4;
  double max_delta = 0.02;
};

// A random neighbor pair with a plan from PlanProbabilistic. Item "i0" is
// held by exactly tau users of the first log, so there is always an item at
// the first threshold.
inline absl::StatusOr<OracleInstance> RandomOracleInstance(
    uint64_t seed, const RandomInstanceOptions& options = {}) {
  if (options.max_domain < 2 || options.max_domain > OracleInstance::kMaxDomain ||
      options.max_users < 2 || options.max_users > OracleInstance::kMaxUsers ||
      options.max_m < 1 || options.max_m > OracleInstance::kMaxM ||
      !(options.min_delta > 0 && options.min_delta <= options.max_delta &&
        options.max_delta < 1)) {
    return absl::InvalidArgumentError("random instance options out of range");
  }
  RandomStream rng(seed, 1, StreamDomain::kOracle);
  const int m = 1 + static_cast<int>(rng.Bounded(options.max_m));
  const int64_t users = 2 + static_cast<int64_t>(rng.Bounded(options.max_users - 1));
  const size_t d = 2 + rng.Bounded(options.max_domain - 1);
  const int64_t tau = 1 + static_cast<int64_t>(rng.Bounded(users));
  const double epsilon = 2.0 * m / static_cast<double>(tau);
  const double log_lo = std::log(options.min_delta);
  const double log_hi = std::log(options.max_delta);
  const double delta = std::exp(log_lo + (log_hi - log_lo) * rng.UniformOpen01());

  OracleInstance instance;
  for (size_t i = 0; i < d; ++i) instance.domain.push_back(absl::StrCat("i", i));
  // Up to `count` distinct items from domain[first..].
  auto pick = [&](size_t first, size_t count) {
    std::vector<std::string> pool(instance.domain.begin() + first,
                                  instance.domain.end());
    count = std::min(count, pool.size());
    for (size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + rng.Bounded(pool.size() - i)]);
    }
    pool.resize(count);
    return pool;
  };
  std::vector<std::pair<std::string, std::vector<std::string>>> sets;
  for (int64_t u = 0; u < users; ++u) {
    const size_t k = 1 + rng.Bounded(m);
    std::vector<std::string> items;
    if (u < tau) {
      items = pick(1, k - 1);
      items.push_back("i0");
    } else {
      items = pick(1, k);
    }
    sets.emplace_back(absl::StrCat("u", u), std::move(items));
  }
  instance.log = LogFromItemSets(sets);
  const size_t victim = rng.Bounded(users);
  sets[victim].second = pick(0, 1 + rng.Bounded(m));
  instance.neighbor = LogFromItemSets(sets);
  auto plan = PlanProbabilistic(epsilon, delta, m, users);
  if (!plan.ok()) return plan.status();
  instance.plan = *plan;
  if (auto s = instance.Validate(); !s.ok()) return s;
  return instance;
}

// ---------------------------------------------------------------------------
// Probabilistic differential privacy

struct BreachObligation {
  double breach_probability = 0;  // product over boundary items
  double closed_form = 0;         // 1 - (1 - e^{-(tau'-tau)/lambda}/2)^|K|
  double delta = 0;
  size_t boundary_items = 0;
  bool passed = false;
};

struct DensityCounterexample {
  bool neighbor_is_base = false;
  std::map<std::string, double> output;
  double log_ratio = 0;
};

struct ProbDpReport {
  double epsilon = 0;
  double delta = 0;
  BreachObligation breach_log;       // Omega built from S
  BreachObligation breach_neighbor;  // Omega built from S'
  int64_t points_checked = 0;
  double max_abs_log_ratio = 0;
  bool ratio_passed = true;
  std::optional<DensityCounterexample> counterexample;

  bool breach_passed() const { return breach_log.passed && breach_neighbor.passed; }
  bool passed() const { return breach_passed() && ratio_passed; }
};

inline BreachObligation CheckBreach(const Histogram& h, const ZealousPlan& plan,
                                    double delta) {
  BreachObligation b;
  const auto boundary = BoundaryItems(h, plan);
  b.boundary_items = boundary.size();
  double log_none_pass = 0;
  for (const auto& item : boundary) {
    log_none_pass += std::log1p(
        -RetentionProbability(static_cast<double>(h.Count(item)), plan));
  }
  b.breach_probability = 0.0 - std::expm1(log_none_pass);
  b.closed_form = 0.0 - std::expm1(
      static_cast<double>(boundary.size()) *
      std::log1p(-0.5 * std::exp(-(plan.tau_prime - plan.tau) / plan.lambda)));
  b.delta = delta;
  // The planner can make the bound tight; allow rounding.
  b.passed = b.breach_probability <= delta * (1 + 1e-9);
  return b;
}

// Noisy counts of sampled outputs sit at tau' + g * lambda for these g.
inline constexpr std::array<double, 6> kDensityGrid = {0.5, 1, 2, 4, 8, 16};

inline absl::StatusOr<ProbDpReport> VerifyProbDp(const OracleInstance& instance,
                                                 int64_t sample_points,
                                                 uint64_t seed = 0) {
  if (auto s = instance.Validate(); !s.ok()) return s;
  const ZealousPlan& plan = instance.plan;
  const Guarantee g = instance.ProbGuarantee();
  const Histogram h = instance.LogHistogram();
  const Histogram h_prime = instance.NeighborHistogram();

  ProbDpReport report;
  report.epsilon = g.epsilon;
  report.delta = g.delta;
  report.breach_log = CheckBreach(h, plan, g.delta);
  report.breach_neighbor = CheckBreach(h_prime, plan, g.delta);

  constexpr double kTolerance = 1e-9;
  RandomStream rng(seed, 0, StreamDomain::kOracle);
  for (int side = 0; side < 2; ++side) {
    const Histogram& base = side == 0 ? h : h_prime;
    const Histogram& other = side == 0 ? h_prime : h;
    const auto boundary = BoundaryItems(base, plan);
    std::vector<std::string> candidates;
    for (const auto& item : EligibleItems(base, plan)) {
      if (!std::binary_search(boundary.begin(), boundary.end(), item))
        candidates.push_back(item);
    }
    const int64_t points = sample_points / 2 + (side == 0 ? sample_points % 2 : 0);
    for (int64_t i = 0; i < points; ++i) {
      std::map<std::string, double> output;
      for (const auto& item : candidates) {
        if (rng.Bounded(2)) {
          output[item] = plan.tau_prime +
                         kDensityGrid[rng.Bounded(kDensityGrid.size())] *
                             plan.lambda;
        }
      }
      const double log_base = LogReleaseDensity(base, plan, output);
      const double log_other = LogReleaseDensity(other, plan, output);
      ++report.points_checked;
      const double diff = (log_base == kNegInf && log_other == kNegInf)
                              ? 0.0
                              : std::fabs(log_base - log_other);
      report.max_abs_log_ratio = std::max(report.max_abs_log_ratio, diff);
      if (!(diff <= g.epsilon + kTolerance) && report.ratio_passed) {
        report.ratio_passed = false;
        report.counterexample =
            DensityCounterexample{side == 1, output, log_base - log_other};
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Indistinguishability over release sets

struct IndistReport {
  double epsilon = 0;
  double delta = 0;
  int64_t events_checked = 0;
  // max over checked events and both directions of
  // Pr[A(S) in O] - e^eps Pr[A(S') in O].
  double max_excess = kNegInf;
  std::optional<ReleaseEvent> violating_event;
  bool passed = true;
};

inline std::vector<ReleaseSet> InstanceReleaseSets(const OracleInstance& in) {
  const auto a = EligibleItems(in.LogHistogram(), in.plan);
  const auto b = EligibleItems(in.NeighborHistogram(), in.plan);
  std::vector<std::string> all;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  return AllSubsets(all);
}

inline absl::StatusOr<IndistReport> VerifyIndistinguishability(
    const OracleInstance& instance, const std::vector<ReleaseEvent>& events,
    const Guarantee& guarantee) {
  if (auto s = instance.Validate(); !s.ok()) return s;
  const Histogram h = instance.LogHistogram();
  const Histogram h_prime = instance.NeighborHistogram();
  IndistReport report;
  report.epsilon = guarantee.epsilon;
  report.delta = guarantee.delta;
  const double scale = std::exp(guarantee.epsilon);
  for (const auto& event : events) {
    double p = 0, q = 0;
    for (const auto& outcome : event) {
      p += ReleaseSetProbability(h, instance.plan, outcome);
      q += ReleaseSetProbability(h_prime, instance.plan, outcome);
    }
    const double excess = std::max(p - scale * q, q - scale * p);
    ++report.events_checked;
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > guarantee.delta + 1e-12 && report.passed) {
      report.passed = false;
      report.violating_event = event;
    }
  }
  return report;
}

inline absl::StatusOr<IndistReport> VerifyIndistinguishability(
    const OracleInstance& instance, const std::vector<ReleaseEvent>& events) {
  return VerifyIndistinguishability(instance, events, instance.plan.indist);
}

// Checks every event at once: the event maximizing
// Pr[A(S) in O] - e^eps Pr[A(S') in O] collects exactly the release sets where
// the difference is positive.
inline absl::StatusOr<IndistReport> VerifyAllReleaseEvents(
    const OracleInstance& instance, const Guarantee& guarantee) {
  if (auto s = instance.Validate(); !s.ok()) return s;
  const Histogram h = instance.LogHistogram();
  const Histogram h_prime = instance.NeighborHistogram();
  const double scale = std::exp(guarantee.epsilon);
  ReleaseEvent forward, backward;
  double forward_excess = 0, backward_excess = 0;
  for (const auto& outcome : InstanceReleaseSets(instance)) {
    const double p = ReleaseSetProbability(h, instance.plan, outcome);
    const double q = ReleaseSetProbability(h_prime, instance.plan, outcome);
    if (p - scale * q > 0) {
      forward_excess += p - scale * q;
      forward.push_back(outcome);
    }
    if (q - scale * p > 0) {
      backward_excess += q - scale * p;
      backward.push_back(outcome);
    }
  }
  IndistReport report;
  report.epsilon = guarantee.epsilon;
  report.delta = guarantee.delta;
  report.events_checked = 2;
  report.max_excess = std::max(forward_excess, backward_excess);
  if (report.max_excess > guarantee.delta + 1e-12) {
    report.passed = false;
    report.violating_event =
        forward_excess >= backward_excess ? forward : backward;
  }
  return report;
}

enum class Verdict { kPass, kFail, kNotApplicable };

inline std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFail:
      return "FAIL";
    case Verdict::kNotApplicable:
      return "N/A";
  }
  return "?";
}

struct ImplicationReport {
  Verdict verdict = Verdict::kNotApplicable;
  ProbDpReport prob_dp;
  std::optional<IndistReport> indist;
};

// If the instance passes the probabilistic check with (eps, delta), every
// release-set event must satisfy indistinguishability with the same pair.
inline absl::StatusOr<ImplicationReport> CheckImplication(
    const OracleInstance& instance, int64_t sample_points, uint64_t seed = 0) {
  auto prob = VerifyProbDp(instance, sample_points, seed);
  if (!prob.ok()) return prob.status();
  ImplicationReport report;
  report.prob_dp = *prob;
  if (!prob->passed()) {
    report.verdict = Verdict::kNotApplicable;
    return report;
  }
  auto indist = VerifyAllReleaseEvents(instance, instance.ProbGuarantee());
  if (!indist.ok()) return indist.status();
  report.indist = *indist;
  report.verdict = indist->passed ? Verdict::kPass : Verdict::kFail;
  return report;
}

// ---------------------------------------------------------------------------
// The history-sampling counterexample

// Canonical text of a user's history: queries joined by " ; ".
inline std::string HistoryKey(const UserHistory& user) {
  std::vector<std::string> queries;
  for (const auto& e : user.entries) {
    queries.push_back(CanonicalQuery(e.query, QueryIdentity::kSequence));
  }
  return absl::StrJoin(queries, " ; ");
}

// Output distribution of the sampler: uniform over every history except the
// first user's.
inline double AHatProbability(size_t domain_size, size_t first, size_t output) {
  if (output == first) return 0.0;
  return 1.0 / static_cast<double>(domain_size - 1);
}

inline size_t SampleAHat(size_t domain_size, size_t first, uint64_t seed) {
  RandomStream rng(seed, 0, StreamDomain::kAHat);
  size_t index = rng.Bounded(domain_size - 1);
  return index >= first ? index + 1 : index;
}

struct BreachWitness {
  std::string output;
  std::string log_first_history;
  std::string neighbor_first_history;  // equals `output`
  double p_log = 0;
  double p_neighbor = 0;
};

struct AHatReport {
  std::string sampled;
  size_t sampled_index = 0;
  double epsilon_prime = 0;
  double delta_prime = 0;  // 1/(|D|-1)
  // Over all neighbor pairs and singleton events {O}:
  double max_singleton_difference = 0;  // Pr[A(S)=O] - Pr[A(S')=O]
  double max_singleton_excess = 0;      // Pr[A(S)=O] - e^eps' Pr[A(S')=O]
  // Over all neighbor pairs and all events; enumerated when |D| <= 12.
  double max_event_excess = 0;
  bool events_enumerated = false;
  bool indistinguishable = false;
  BreachWitness witness;
};

inline absl::StatusOr<AHatReport> CounterexampleAHat(
    const std::vector<std::string>& domain, const SearchLog& log,
    uint64_t seed, double epsilon_prime = 0.01) {
  const size_t n = domain.size();
  if (n < 2) return absl::InvalidArgumentError("domain needs >= 2 histories");
  if (log.user_count() == 0) return absl::InvalidArgumentError("empty log");
  if (!(epsilon_prime > 0)) {
    return absl::InvalidArgumentError("epsilon' must be positive");
  }
  const std::string first_key = HistoryKey(log.users().front());
  const auto it = std::find(domain.begin(), domain.end(), first_key);
  if (it == domain.end()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "first user's history '", first_key, "' is not in the domain"));
  }
  const size_t first = it - domain.begin();

  AHatReport report;
  report.sampled_index = SampleAHat(n, first, seed);
  report.sampled = domain[report.sampled_index];
  report.epsilon_prime = epsilon_prime;
  report.delta_prime = 1.0 / static_cast<double>(n - 1);

  const double scale = std::exp(epsilon_prime);
  report.events_enumerated = n <= 12;
  // Only the first user's history matters, so neighbors are ordered pairs
  // (a, b) of distinct first histories.
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      for (size_t o = 0; o < n; ++o) {
        const double pa = AHatProbability(n, a, o);
        const double pb = AHatProbability(n, b, o);
        report.max_singleton_difference =
            std::max(report.max_singleton_difference, pa - pb);
        report.max_singleton_excess =
            std::max(report.max_singleton_excess, pa - scale * pb);
      }
      double best = 0;
      if (report.events_enumerated) {
        for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
          double pa = 0, pb = 0;
          for (size_t o = 0; o < n; ++o) {
            if (mask >> o & 1) {
              pa += AHatProbability(n, a, o);
              pb += AHatProbability(n, b, o);
            }
          }
          best = std::max(best, pa - scale * pb);
        }
      } else {
        for (size_t o = 0; o < n; ++o) {
          best += std::max(0.0, AHatProbability(n, a, o) -
                                    scale * AHatProbability(n, b, o));
        }
      }
      report.max_event_excess = std::max(report.max_event_excess, best);
    }
  }
  report.indistinguishable =
      report.max_event_excess <= report.delta_prime + 1e-12;

  report.witness.output = report.sampled;
  report.witness.log_first_history = first_key;
  report.witness.neighbor_first_history = report.sampled;
  report.witness.p_log = AHatProbability(n, first, report.sampled_index);
  report.witness.p_neighbor =
      AHatProbability(n, report.sampled_index, report.sampled_index);
  return report;
}

// ---------------------------------------------------------------------------
// Limits of plain eps-differential privacy

struct ImpossibilityReport {
  // Domain size above which every c-accurate eps-DP algorithm is less accurate
  // than always publishing nothing.
  double domain_threshold = 0;
  // Inaccuracy of such an algorithm on a domain of at least that size.
  double inaccuracy_lower_bound = 0;
  // The threshold with e^{eps(tau+xi)/m} in place of e^{2 eps(tau+xi)/m}.
  double single_epsilon_threshold = 0;
  std::string note;

  bool Applies(double domain_size) const {
    return domain_size >= domain_threshold;
  }
};

inline absl::StatusOr<ImpossibilityReport> ImpossibilityBound(
    int64_t users, int m, double tau_plus_xi, double tau_minus_xi,
    double epsilon, double c) {
  if (!(c > 0 && c <= 1)) return absl::InvalidArgumentError("c must lie in (0, 1]");
  if (!(tau_plus_xi > 0)) return absl::InvalidArgumentError("tau + xi must be positive");
  if (!(tau_minus_xi >= 0)) {
    return absl::InvalidArgumentError("tau - xi must be non-negative");
  }
  if (!(epsilon >= 0)) return absl::InvalidArgumentError("epsilon must be >= 0");
  if (users < 1 || m < 1) return absl::InvalidArgumentError("U and m must be >= 1");
  const double um = static_cast<double>(users) * m;
  auto threshold = [&](double exponent_factor) {
    return um * (2.0 * std::exp(exponent_factor * epsilon * tau_plus_xi / m) /
                     (c * tau_plus_xi) +
                 1.0 / (tau_minus_xi + 1.0));
  };
  ImpossibilityReport r;
  r.domain_threshold = threshold(2.0);
  r.single_epsilon_threshold = threshold(1.0);
  r.inaccuracy_lower_bound = 2.0 * um / tau_plus_xi;
  r.note =
      "threshold uses exp(2 eps (tau+xi)/m); the per-item retention argument "
      "with exp(eps (tau+xi)/m) gives single_epsilon_threshold";
  return r;
}

// Lower bound on the retention probability on S' of an item retained with
// probability p on S by an eps-DP algorithm: p e^{-L1(S,S') eps / m}.
inline double NeighborRetentionBound(double epsilon, int m, double l1_distance, double p) {
  return p * std::exp(-l1_distance * epsilon / m);
}

}  // namespace zealous

#endif  // ZEALOUS_PRIVACY_ANALYSIS_HPP_
