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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "zealous/anonymity.hpp"
#include "zealous/experiment.hpp"
#include "zealous/privacy_analysis.hpp"
#include "zealous/search_log.hpp"
#include "zealous/synthetic.hpp"
#include "zealous/utility.hpp"
#include "zealous/zealous.hpp"

namespace zealous {
namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      absl::StrAppend(&detail, detail.empty() ? "" : "; ", "failed: ", what);
    }
  }
  void Note(const std::string& what) {
    absl::StrAppend(&detail, detail.empty() ? "" : "; ", what);
  }
};

double Sigma(double p, int64_t n) {
  return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

std::string DataPath(const std::string& name) {
  return std::string(ZEALOUS_DATA_DIR) + "/" + name;
}

Outcome PlannerSweep() {
  Outcome out;
  const std::map<int, double> expected = {{1, 81.1}, {3, 78.7}, {4, 78.6},
                                          {5, 78.7}, {7, 79.3}, {9, 80.3}};
  double best = 1e300;
  int argmin = 0;
  for (int tau = 1; tau <= 50; ++tau) {
    auto plan = PlanProbabilistic(1.0, 0.001, 2, 500000, tau);
    if (!plan.ok()) {
      out.Check(false, plan.status().ToString());
      return out;
    }
    if (plan->tau_prime < best) {
      best = plan->tau_prime;
      argmin = tau;
    }
    auto it = expected.find(tau);
    if (it != expected.end()) {
      out.Check(std::fabs(plan->tau_prime - it->second) <= 0.05,
                absl::StrFormat("tau=%d gives %.4f, want %.1f", tau,
                                plan->tau_prime, it->second));
    }
  }
  out.Check(argmin == 4 && OptimalTau(1.0, 2) == 4,
            absl::StrCat("argmin tau ", argmin));
  auto planned = PlanProbabilistic(1.0, 0.001, 2, 500000);
  out.Note(absl::StrFormat("argmin tau=%d, tau'=%.4f, planner tau=%g", argmin,
                           best, planned->tau));
  return out;
}

Outcome AchievedDeltas() {
  Outcome out;
  struct Cell {
    double lambda, tau_prime, delta, delta_prime;
  };
  for (const Cell& c : {Cell{1, 100, 1.3e-37, 1.4e-41},
                        Cell{1, 200, 4.7e-81, 5.2e-85},
                        Cell{5, 100, 3.2e-3, 1.4e-8},
                        Cell{5, 200, 6.5e-12, 2.9e-17}}) {
    const double d = AchievedDelta(c.lambda, 1, c.tau_prime, 5, 500000).delta;
    const double dp = AchievedDeltaPrime(c.lambda, c.tau_prime, 5).delta;
    out.Check(std::fabs(d / c.delta - 1) <= 0.1,
              absl::StrFormat("delta(%g,%g)=%.3g", c.lambda, c.tau_prime, d));
    out.Check(std::fabs(dp / c.delta_prime - 1) <= 0.1,
              absl::StrFormat("delta'(%g,%g)=%.3g", c.lambda, c.tau_prime, dp));
    out.Note(absl::StrFormat("(%g,%g): %.2g/%.2g", c.lambda, c.tau_prime, d, dp));
  }
  return out;
}

Outcome Impossibility() {
  Outcome out;
  // tau + xi = 50 as specified; tau - xi = 10 is our choice of slack.
  auto r = ImpossibilityBound(1'000'000, 10, 50, 10, 1.0, 0.01);
  if (!r.ok()) {
    out.Check(false, r.status().ToString());
    return out;
  }
  out.Check(r->domain_threshold < 5.3e35,
            absl::StrFormat("threshold %.3g", r->domain_threshold));
  out.Check(r->Applies(5.3e35), "does not apply at |D| = 5.3e35");
  out.Note(absl::StrFormat("threshold %.3g, %s", r->domain_threshold,
                           r->Applies(5.3e35) ? "impossibility applies"
                                              : "does not apply"));
  return out;
}

Outcome PrivacyOracle() {
  Outcome out;
  constexpr int kInstances = 25;
  int passed = 0, broken_failed = 0;
  double worst_ratio_margin = 1e300;
  for (int i = 0; i < kInstances; ++i) {
    auto in = RandomOracleInstance(1000 + i);
    if (!in.ok()) {
      out.Check(false, in.status().ToString());
      return out;
    }
    const bool sizes_ok = in->domain.size() <= 8 && in->log.user_count() <= 6 &&
                          in->plan.m <= 3;
    out.Check(sizes_ok, absl::StrCat("instance ", i, " too large"));
    auto prob = VerifyProbDp(*in, 4000, i);
    auto implication = CheckImplication(*in, 4000, i);
    if (!prob.ok() || !implication.ok()) {
      out.Check(false, "oracle error");
      return out;
    }
    const bool ok = prob->breach_passed() && prob->ratio_passed &&
                    implication->verdict == Verdict::kPass;
    out.Check(ok, absl::StrCat("instance ", i));
    passed += ok;
    worst_ratio_margin =
        std::min(worst_ratio_margin, prob->epsilon - prob->max_abs_log_ratio);

    OracleInstance broken = *in;
    broken.plan.tau_prime = in->plan.tau + (in->plan.tau_prime - in->plan.tau) / 2;
    auto b = VerifyProbDp(broken, 10, i);
    const bool failed_a = b.ok() && !b->breach_passed();
    out.Check(failed_a, absl::StrCat("halved gap of instance ", i, " passed"));
    broken_failed += failed_a;
  }
  out.Note(absl::StrFormat(
      "%d/%d instances pass both obligations and the implication; "
      "%d/%d halved-gap plans fail the breach obligation; min eps margin %.3g",
      passed, kInstances, broken_failed, kInstances, worst_ratio_margin));
  return out;
}

Outcome ReleaseSetMonteCarlo() {
  Outcome out;
  auto ingest = IngestFile(DataPath("oracle_S.tsv"), LogFormat::kNative);
  auto plan = PlanFromParameters(1.0, 1.0, 1.5, 1, std::nullopt);
  if (!ingest.ok() || !plan.ok()) {
    out.Check(false, "fixture");
    return out;
  }
  const SearchLog& log = ingest->log;
  const Histogram h = BuildHistogram(log, ItemKind::kKeyword);
  constexpr int64_t kRuns = 100000;
  std::map<ReleaseSet, int64_t> hits;
  for (int64_t seed = 0; seed < kRuns; ++seed) {
    auto s = Sanitize(log, ItemKind::kKeyword, *plan, seed);
    ReleaseSet set;
    for (const auto& [item, noisy] : s->entries) set.push_back(item);
    ++hits[set];
  }
  double worst = 0;
  for (const auto& subset : AllSubsets({"a", "b", "c", "d"})) {
    const double p = ReleaseSetProbability(h, *plan, subset);
    const double freq = static_cast<double>(hits[subset]) / kRuns;
    if (p == 0) {
      out.Check(hits[subset] == 0, absl::StrCat("impossible set {",
                                                absl::StrJoin(subset, ","), "}"));
      continue;
    }
    const double z = std::fabs(freq - p) / Sigma(p, kRuns);
    worst = std::max(worst, z);
    out.Check(z <= 3, absl::StrFormat("{%s}: %.5f vs %.5f",
                                      absl::StrJoin(subset, ","), freq, p));
  }
  out.Note(absl::StrFormat("16 subsets, worst deviation %.2f sigma", worst));
  return out;
}

Outcome Retention() {
  Outcome out;
  constexpr int64_t kRuns = 100000;
  auto plan = PlanFromParameters(4.0, 4.0, 78.6, 2, std::nullopt);
  // Counts tau' + xi are not integers, so the sanitizer's noise step is
  // applied to them directly.
  for (double xi : {1.0, 4.0, 16.0}) {
    const double count = plan->tau_prime + xi;
    int64_t kept = 0;
    for (int64_t seed = 0; seed < kRuns; ++seed) {
      kept += count + ItemNoise(plan->lambda, seed, "item") > plan->tau_prime;
    }
    const double p = 1 - 0.5 * std::exp(-xi / plan->lambda);
    const double rate = static_cast<double>(kept) / kRuns;
    out.Check(std::fabs(rate - p) <= 3 * Sigma(p, kRuns),
              absl::StrFormat("xi=%g: %.4f vs %.4f", xi, rate, p));
    out.Note(absl::StrFormat("xi=%g %.4f (%.4f)", xi, rate, p));
  }
  // Integer counts through the full sanitizer.
  for (int64_t count : {79, 80, 90}) {
    Histogram h;
    h.counts["item"] = count;
    int64_t kept = 0;
    for (int64_t seed = 0; seed < kRuns; ++seed) {
      kept += SanitizeHistogram(h, *plan, seed).entries.size();
    }
    const double rate = static_cast<double>(kept) / kRuns;
    out.Check(rate >= 0.5 - 3 * Sigma(0.5, kRuns),
              absl::StrFormat("count %d retained at %.4f", count, rate));
  }
  {
    Histogram h;
    h.counts["item"] = 3;  // below tau = 4
    int64_t kept = 0;
    for (int64_t seed = 0; seed < kRuns; ++seed) {
      kept += SanitizeHistogram(h, *plan, seed).entries.size();
    }
    out.Check(kept == 0, absl::StrCat("count 3 retained ", kept, " times"));
    out.Note(absl::StrCat("count<tau kept ", kept, "/", kRuns));
  }
  return out;
}

Outcome HistorySampler() {
  Outcome out;
  std::vector<std::string> domain;
  for (int i = 0; i < 11; ++i) domain.push_back(absl::StrCat("h", i));
  const SearchLog log = LogFromItemSets({{"u1", {"h0"}}, {"u2", {"h1"}}});
  auto r = CounterexampleAHat(domain, log, 7, 0.01);
  if (!r.ok()) {
    out.Check(false, r.status().ToString());
    return out;
  }
  out.Check(r->events_enumerated && r->indistinguishable,
            "indistinguishability not confirmed");
  out.Check(r->delta_prime == 0.1 || std::fabs(r->delta_prime - 0.1) < 1e-12,
            absl::StrFormat("delta'=%g", r->delta_prime));
  out.Check(std::fabs(r->witness.p_log - 0.1) < 1e-12 && r->witness.p_neighbor == 0,
            absl::StrFormat("witness %g/%g", r->witness.p_log, r->witness.p_neighbor));
  out.Note(absl::StrFormat(
      "(0.01, %.3g)-indistinguishable over all singleton events; witness "
      "output %s: P=%.3g vs %.3g",
      r->delta_prime, r->witness.output, r->witness.p_log, r->witness.p_neighbor));
  return out;
}

SearchLog SyntheticLog(int64_t users, uint64_t seed) {
  SyntheticSpec spec;
  spec.users = users;
  spec.seed = seed;
  return *GenerateSynthetic(spec);
}

Outcome AnonymityBaseline() {
  Outcome out;
  const SearchLog log = SyntheticLog(10000, 21);
  for (int64_t k : {10, 60}) {
    auto anon = KQueryAnonymize(log, k, 3);
    auto h = HistogramsFromAnonymous(*anon, ItemKind::kQuery);
    if (!anon.ok() || !h.ok()) {
      out.Check(false, "anonymizer error");
      return out;
    }
    int64_t min_count = INT64_MAX;
    for (const auto& [q, c] : h->counts) min_count = std::min(min_count, c);
    out.Check(!h->counts.empty() && min_count >= k,
              absl::StrCat("k=", k, " min count ", min_count));
    out.Note(absl::StrCat("k=", k, ": ", h->counts.size(), " queries, min ",
                          min_count));
    out.Check(!HistogramsFromAnonymous(*anon, ItemKind::kClick).ok(),
              "click histogram was produced");
  }
  return out;
}

// Non-increasing with at most one exact tie between neighbors.
bool NonIncreasingOneTie(const std::vector<double>& v) {
  int ties = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
    if (v[i] == v[i - 1]) ++ties;
  }
  return ties <= 1;
}

std::string Join(const std::vector<double>& v) {
  return absl::StrJoin(v, ",", [](std::string* s, double x) {
    absl::StrAppend(s, absl::StrFormat("%.4g", x));
  });
}

Outcome RankingAndTrends() {
  Outcome out;
  const RankedList truth{"q", {"a", "b", "c", "d", "e"}};
  const RankedList disjoint{"q", {"v", "w", "x", "y", "z"}};
  const auto same = RankingMetrics(truth, truth, 5);
  const auto none = RankingMetrics(truth, disjoint, 5);
  out.Check(same->precision == 1 && same->recall == 1 &&
                std::fabs(same->ndcg - 1) < 1e-12 && same->map == 5,
            "identity ranking");
  out.Check(none->precision == 0 && none->recall == 0 && none->ndcg == 0,
            "disjoint ranking");
  out.Note(absl::StrFormat("identity MAP %g, disjoint MAP %g", same->map,
                           none->map));

  const SearchLog log = SyntheticLog(10000, 31);
  SweepConfig c;
  c.kinds = {ItemKind::kKeyword};
  c.epsilons = {0.5, 1, 2, 5, 10};
  c.ms = {1, 2, 4, 8, 16};
  c.js = {10};
  c.seed = 5;
  c.runs = 3;
  auto rows = RunSweep(log, c);
  if (!rows.ok()) {
    out.Check(false, rows.status().ToString());
    return out;
  }
  const int m_fixed = 1;
  std::vector<double> diff;
  for (double e : c.epsilons) {
    diff.push_back(*FindMetric(*rows, "zealous", ItemKind::kKeyword, m_fixed, e,
                               "count_diff"));
  }
  const double e_fixed = 1;
  std::vector<double> distinct;
  for (int m : c.ms) {
    distinct.push_back(*FindMetric(*rows, "zealous", ItemKind::kKeyword, m,
                                   e_fixed, "distinct_items"));
  }
  out.Check(NonIncreasingOneTie(diff), "count_diff over epsilon " + Join(diff));
  out.Check(NonIncreasingOneTie(distinct),
            "distinct items over m " + Join(distinct));
  out.Note("count_diff over eps {0.5..10}: " + Join(diff));
  out.Note("distinct over m {1..16}: " + Join(distinct));
  return out;
}

int Main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"tau' sweep and optimal tau", PlannerSweep},
      {"achieved delta and delta'", AchievedDeltas},
      {"impossibility threshold", Impossibility},
      {"privacy oracle on random instances", PrivacyOracle},
      {"release-set Monte Carlo agreement", ReleaseSetMonteCarlo},
      {"retention accuracy", Retention},
      {"history-sampling counterexample", HistorySampler},
      {"k-query anonymity invariants", AnonymityBaseline},
      {"ranking metrics and utility trends", RankingAndTrends},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    failures += !o.passed;
    std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace zealous

int main() { return zealous::Main(); }
