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

#include "zealous/zealous.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "zealous/search_log.hpp"
#include "zealous/synthetic.hpp"

namespace zealous {
namespace {

using ::zealous::testing::Entry;

// Independent evaluation of the second threshold for (eps, delta)-probabilistic
// privacy: tau' = tau + max(-lambda ln(2 - 2 e^{-1/lambda}),
//                           -lambda ln(2 delta tau / (U m))).
double ReferenceTauPrime(double epsilon, double delta, int m, double users,
                         double tau) {
  const double lambda = 2.0 * m / epsilon;
  const double ratio = -lambda * std::log(2 - 2 * std::exp(-1 / lambda));
  const double breach = -lambda * std::log(2 * delta * tau / (users * m));
  return tau + (ratio > breach ? ratio : breach);
}

Histogram SingleItem(const std::string& item, int64_t count) {
  Histogram h;
  h.counts[item] = count;
  return h;
}

TEST(PlanProbabilisticTest, PublishedThresholdTable) {
  // tau -> tau' for m = 2, eps = 1, delta = 0.001, U = 500000.
  const std::map<int, double> published = {{1, 81.1}, {3, 78.7}, {4, 78.6},
                                           {5, 78.7}, {7, 79.3}, {9, 80.3}};
  for (const auto& [tau, expected] : published) {
    auto plan = PlanProbabilistic(1.0, 0.001, 2, 500000, tau);
    ASSERT_TRUE(plan.ok());
    EXPECT_NEAR(plan->tau_prime, expected, 0.05) << "tau=" << tau;
    EXPECT_NEAR(plan->tau_prime, ReferenceTauPrime(1.0, 0.001, 2, 500000, tau),
                1e-9);
    EXPECT_DOUBLE_EQ(plan->lambda, 4.0);
  }
  auto at_one = PlanProbabilistic(1.0, 0.001, 2, 500000, 1.0);
  EXPECT_NEAR(at_one->tau_prime, 81.12, 0.005);
  auto at_nine = PlanProbabilistic(1.0, 0.001, 2, 500000, 9.0);
  EXPECT_NEAR(at_nine->tau_prime, 80.33, 0.005);
}

TEST(PlanProbabilisticTest, DefaultTauIsCeilOfTwoMOverEpsilon) {
  auto plan = PlanProbabilistic(1.0, 0.001, 2, 500000);
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->tau, 4.0);
  EXPECT_NEAR(plan->tau_prime, 78.58, 0.005);
  EXPECT_EQ(OptimalTau(3.0, 1), 1.0);
  EXPECT_EQ(OptimalTau(0.3, 1), 7.0);
}

TEST(PlanProbabilisticTest, RejectsInvalidBudgets) {
  EXPECT_FALSE(PlanProbabilistic(0.0, 0.001, 2, 10).ok());
  EXPECT_FALSE(PlanProbabilistic(-1.0, 0.001, 2, 10).ok());
  EXPECT_FALSE(PlanProbabilistic(1.0, 0.0, 2, 10).ok());
  EXPECT_FALSE(PlanProbabilistic(1.0, 1.0, 2, 10).ok());
  EXPECT_FALSE(PlanProbabilistic(1.0, 0.01, 0, 10).ok());
  EXPECT_FALSE(PlanProbabilistic(1.0, 0.01, 2, 0).ok());
  EXPECT_FALSE(PlanProbabilistic(1.0, 0.01, 2, 10, -3.0).ok());
}

// Over integer tau in [1, 10 ceil(2m/eps)] the second threshold is smallest at
// ceil(2m/eps). This needs 2m/eps integral and the breach term to set the gap
// at that tau; when the ratio term dominates, smaller tau can do better.
TEST(PlanProbabilisticTest, CeilTauMinimizesSecondThreshold) {
  int checked = 0;
  for (int m : {1, 2, 3, 5}) {
    for (int lambda_int : {1, 2, 3, 4, 6, 10}) {
      const double epsilon = 2.0 * m / lambda_int;
      for (double delta : {1e-6, 1e-3, 0.1}) {
        for (int64_t users : {10, 1000, 500000}) {
          auto best = PlanProbabilistic(epsilon, delta, m, users);
          ASSERT_TRUE(best.ok());
          ASSERT_EQ(best->tau, lambda_int);
          if (BreachGap(best->lambda, best->tau, m, users, delta) <
              RatioGap(best->lambda)) {
            continue;
          }
          ++checked;
          for (int tau = 1; tau <= 10 * lambda_int; ++tau) {
            auto other = PlanProbabilistic(epsilon, delta, m, users, tau);
            EXPECT_GE(other->tau_prime, best->tau_prime - 1e-9)
                << "m=" << m << " lambda=" << lambda_int << " tau=" << tau;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(PlanProbabilisticTest, SmallerTauCanWinWhenRatioTermDominates) {
  // m = 1, eps = 0.2, delta = 0.1, U = 10: at tau = 10 the gap is the ratio
  // term, and tau = 8 gives a smaller second threshold.
  auto best = PlanProbabilistic(0.2, 0.1, 1, 10);
  auto eight = PlanProbabilistic(0.2, 0.1, 1, 10, 8.0);
  ASSERT_TRUE(best.ok() && eight.ok());
  EXPECT_EQ(best->tau, 10.0);
  EXPECT_LT(eight->tau_prime, best->tau_prime);
}

TEST(PlanProbabilisticTest, SecondThresholdGrowsAsDeltaShrinks) {
  double previous = 0;
  for (double delta : {0.5, 0.1, 1e-2, 1e-3, 1e-6, 1e-12}) {
    auto plan = PlanProbabilistic(1.0, delta, 3, 100000);
    ASSERT_TRUE(plan.ok());
    EXPECT_GT(plan->tau_prime, previous);
    previous = plan->tau_prime;
  }
}

// When the breach term sets the gap, the achieved delta equals the request.
TEST(PlanProbabilisticTest, AchievedDeltaRoundTrip) {
  for (double epsilon : {0.1, 0.5, 1.0, 2.0}) {
    for (double delta : {1e-9, 1e-3, 0.05}) {
      for (int m : {1, 4}) {
        auto plan = PlanProbabilistic(epsilon, delta, m, 500000);
        ASSERT_TRUE(plan.ok());
        ASSERT_GT(BreachGap(plan->lambda, plan->tau, m, 500000, delta),
                  RatioGap(plan->lambda));
        const Guarantee g = AchievedDelta(plan->lambda, plan->tau,
                                          plan->tau_prime, m, 500000);
        EXPECT_NEAR(g.delta / delta, 1.0, 1e-12);
        EXPECT_NEAR(g.epsilon, epsilon, 1e-12);
        ASSERT_TRUE(plan->prob_dp.has_value());
        EXPECT_NEAR(plan->prob_dp->delta / delta, 1.0, 1e-12);
      }
    }
  }
}

TEST(AchievedDeltaTest, PublishedCells) {
  // U = 500000, m = 5, tau = 1.
  struct Cell {
    double lambda, tau_prime, delta, delta_prime;
  };
  for (const Cell& c : {Cell{1, 100, 1.3e-37, 1.4e-41},
                        Cell{1, 200, 4.7e-81, 5.2e-85},
                        Cell{5, 100, 3.2e-3, 1.4e-8},
                        Cell{5, 200, 6.5e-12, 2.9e-17}}) {
    const Guarantee d = AchievedDelta(c.lambda, 1, c.tau_prime, 5, 500000);
    const Guarantee dp = AchievedDeltaPrime(c.lambda, c.tau_prime, 5);
    EXPECT_NEAR(d.delta / c.delta, 1.0, 0.1) << c.lambda << "," << c.tau_prime;
    EXPECT_NEAR(dp.delta / c.delta_prime, 1.0, 0.1)
        << c.lambda << "," << c.tau_prime;
    EXPECT_DOUBLE_EQ(d.epsilon, 10.0 / c.lambda);
  }
}

TEST(AchievedDeltaTest, DecreasesAsSecondThresholdGrows) {
  double previous = 2;
  for (double tau_prime = 30; tau_prime <= 300; tau_prime += 10) {
    const double d = AchievedDelta(2, 1, tau_prime, 5, 500000).delta;
    EXPECT_LT(d, previous);
    previous = d;
  }
}

TEST(AchievedDeltaTest, ClampsToOne) {
  const Guarantee g = AchievedDelta(4, 10, 10.001, 2, 500000);
  EXPECT_EQ(g.delta, 1.0);
  EXPECT_TRUE(g.clamped);
  const Guarantee at_m = AchievedDeltaPrime(3, 4, 4);
  EXPECT_EQ(at_m.delta, 1.0);
  EXPECT_NEAR(AchievedDeltaPrime(3, 1, 1).delta, 0.5, 1e-15);
}

TEST(PlanIndistinguishableTest, Examples) {
  auto a = PlanIndistinguishable(10, 2.5 * std::exp(-19.0), 5);
  ASSERT_TRUE(a.ok());
  EXPECT_NEAR(a->tau_prime, 14.5, 1e-9);
  EXPECT_DOUBLE_EQ(a->lambda, 1.0);
  EXPECT_EQ(a->tau, 1.0);

  auto b = PlanIndistinguishable(1, 0.1, 1);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(b->tau_prime, 1 + std::log(5.0), 1e-12);
  EXPECT_NEAR(b->tau_prime, 2.609, 5e-4);

  EXPECT_NEAR(IndistinguishableTauPrime(2.0, 0.5, 1), 1.0, 1e-12);
  // delta' = m/2 gives tau' = m = tau, which leaves no gap.
  EXPECT_FALSE(PlanIndistinguishable(2.0, 0.5, 1).ok());
  EXPECT_FALSE(PlanIndistinguishable(0.0, 0.1, 1).ok());
}

TEST(PlanIndistinguishableTest, ReportsAchievedGuarantee) {
  auto plan = PlanIndistinguishable(2.0, 1e-6, 3, 1000);
  ASSERT_TRUE(plan.ok());
  const Guarantee expected = AchievedDeltaPrime(plan->lambda, plan->tau_prime, 3);
  EXPECT_DOUBLE_EQ(plan->indist.delta, expected.delta);
  EXPECT_DOUBLE_EQ(plan->indist.epsilon, 2.0);
  ASSERT_TRUE(plan->prob_dp.has_value());
}

TEST(PlanFromParametersTest, PublishedCell) {
  auto plan = PlanFromParameters(5, 1, 200, 5, 500000);
  ASSERT_TRUE(plan.ok());
  EXPECT_NEAR(plan->prob_dp->delta / 6.5e-12, 1.0, 0.1);
  EXPECT_NEAR(plan->indist.delta / 2.9e-17, 1.0, 0.1);
  EXPECT_FALSE(PlanFromParameters(5, 10, 10, 5, 100).ok());
  EXPECT_FALSE(PlanFromParameters(0, 1, 10, 5, 100).ok());
}

TEST(SanitizeTest, EverythingBelowFirstThresholdIsDropped) {
  const SearchLog log = SearchLog::FromEntries(
      {Entry("u", "a b", 0), Entry("v", "b c", 0), Entry("w", "d", 0)});
  auto plan = PlanFromParameters(1.0, 3.0, 4.0, 2, 3);
  ASSERT_TRUE(plan.ok());
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto out = Sanitize(log, ItemKind::kKeyword, *plan, seed);
    ASSERT_TRUE(out.ok());
    EXPECT_TRUE(out->entries.empty());
  }
}

TEST(SanitizeTest, FarAboveSecondThresholdIsAlwaysPublished) {
  auto plan = PlanFromParameters(4.0, 4.0, 78.6, 2, std::nullopt);
  ASSERT_TRUE(plan.ok());
  const Histogram h =
      SingleItem("hot", static_cast<int64_t>(std::ceil(78.6 + 50 * 4.0)));
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    EXPECT_EQ(SanitizeHistogram(h, *plan, seed).entries.size(), 1u);
  }
}

TEST(SanitizeTest, CountJustAboveFirstThresholdIsNeverPublished) {
  auto plan = PlanFromParameters(4.0, 4.0, 78.6, 2, std::nullopt);
  ASSERT_TRUE(plan.ok());
  const Histogram h = SingleItem("rare", 5);
  // Publishing probability e^{-73.6/4}/2 is about 5e-9.
  EXPECT_NEAR(LaplaceSurvival(78.6 - 5, 4.0), 5.1e-9, 0.1e-9);
  int published = 0;
  for (uint64_t seed = 0; seed < 100000; ++seed) {
    published += SanitizeHistogram(h, *plan, seed).entries.size();
  }
  EXPECT_EQ(published, 0);
}

TEST(SanitizeTest, OutputSatisfiesBothThresholdsAndIsDeterministic) {
  SyntheticSpec spec;
  spec.users = 2000;
  spec.vocab = 300;
  spec.seed = 11;
  auto log = GenerateSynthetic(spec);
  ASSERT_TRUE(log.ok());
  auto plan = PlanProbabilistic(1.0, 0.01, 3, log->user_count());
  ASSERT_TRUE(plan.ok());
  for (uint64_t seed : {1, 2, 3}) {
    auto out = Sanitize(*log, ItemKind::kKeyword, *plan, seed);
    ASSERT_TRUE(out.ok());
    ASSERT_FALSE(out->entries.empty());
    const Histogram selected =
        SelectPerUser(*log, ItemKind::kKeyword, 3, seed).histogram;
    for (const auto& [item, noisy] : out->entries) {
      EXPECT_GT(noisy, plan->tau_prime);
      EXPECT_GE(static_cast<double>(selected.Count(item)), plan->tau);
    }
    auto again = Sanitize(*log, ItemKind::kKeyword, *plan, seed);
    EXPECT_EQ(out->entries, again->entries);
  }
}

TEST(SanitizeTest, ItemNoiseDoesNotDependOnOtherItems) {
  auto plan = PlanFromParameters(2.0, 1.0, 5.0, 1, std::nullopt);
  ASSERT_TRUE(plan.ok());
  Histogram both;
  both.counts = {{"a", 40}, {"b", 40}};
  const auto full = SanitizeHistogram(both, *plan, 5);
  const auto alone = SanitizeHistogram(SingleItem("a", 40), *plan, 5);
  EXPECT_EQ(full.entries.at("a"), alone.entries.at("a"));
}

TEST(SanitizeTest, UserCountMismatchIsRejected) {
  const SearchLog log = SearchLog::FromEntries({Entry("u", "a", 0)});
  auto plan = PlanProbabilistic(1.0, 0.01, 1, 5);
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(Sanitize(log, ItemKind::kKeyword, *plan, 0).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

SanitizedHistogram PublishedQueries(std::vector<std::string> queries) {
  SanitizedHistogram h;
  h.kind = ItemKind::kQuery;
  for (auto& q : queries) h.entries[q] = 100;
  return h;
}

TEST(PublishClicksTest, QueryWithoutClicksGetsZeroCenteredSlots) {
  const SearchLog log = SearchLog::FromEntries({Entry("u", "q", 0)});
  const int n = 20000;
  double sum = 0;
  for (int seed = 0; seed < n; ++seed) {
    auto out = PublishClicks(log, PublishedQueries({"q"}), 3, 2.0, seed);
    ASSERT_TRUE(out.ok());
    const auto& docs = out->at("q");
    ASSERT_EQ(docs.size(), 3u);
    for (const auto& d : docs) EXPECT_EQ(d.raw, 0);
    sum += docs[0].noisy;
  }
  EXPECT_NEAR(sum / n, 0.0, 3 * 2.0 * std::sqrt(2.0 / n));
}

TEST(PublishClicksTest, VanishingNoiseReturnsRawCounts) {
  const SearchLog log = SearchLog::FromEntries(
      {Entry("u", "q", 0, {"x", "y"}), Entry("v", "q", 0, {"x"}),
       Entry("w", "other", 0, {"x"})});
  auto out = PublishClicks(log, PublishedQueries({"q"}), 2, 1e-9, 3);
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->size(), 1u);
  const auto& docs = out->at("q");
  EXPECT_EQ(docs[0].url, "x");
  EXPECT_NEAR(docs[0].noisy, 2.0, 1e-6);
  EXPECT_EQ(docs[1].url, "y");
  EXPECT_NEAR(docs[1].noisy, 1.0, 1e-6);
}

TEST(PublishClicksTest, NoisyCountIsUnbiased) {
  std::vector<SearchEntry> entries;
  for (int u = 0; u < 7; ++u) entries.push_back(Entry("u" + std::to_string(u), "q", 0, {"x"}));
  const SearchLog log = SearchLog::FromEntries(entries);
  const int n = 100000;
  const double lambda = 3.0;
  double sum = 0;
  for (int seed = 0; seed < n; ++seed) {
    sum += PublishClicks(log, PublishedQueries({"q"}), 1, lambda, seed)
               ->at("q")[0]
               .noisy;
  }
  EXPECT_NEAR(sum / n, 7.0, 3 * lambda * std::sqrt(2.0 / n));
}

TEST(PublishClicksTest, RequiresQueryHistogram) {
  SanitizedHistogram keywords;
  keywords.kind = ItemKind::kKeyword;
  EXPECT_FALSE(PublishClicks(SearchLog(), keywords, 3, 1.0, 0).ok());
  EXPECT_FALSE(PublishClicks(SearchLog(), PublishedQueries({}), 0, 1.0, 0).ok());
}

}  // namespace
}  // namespace zealous
