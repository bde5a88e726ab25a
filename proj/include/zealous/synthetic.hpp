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

// Reproducible synthetic search logs with Zipf keyword popularity.
//
// Keywords are named "kw<rank>" with rank 0 the most popular. Inside a
// session a user either issues a fresh query, repeats the previous one, or
// refines it (adds or replaces a keyword). Every keyword occurrence is either a
// fresh Zipf draw or a copy of an earlier draw, so keyword frequencies keep
// the Zipf shape while queries and query pairs still repeat across users.

#ifndef ZEALOUS_SYNTHETIC_HPP_
#define ZEALOUS_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "zealous/random.hpp"
#include "zealous/search_log.hpp"

namespace zealous {

// Distribution over positive counts: "fixed:N", "uniform:A:B" or
// "geometric:MEAN" (support 1, 2, ...).
class CountDistribution {
 public:
  static absl::StatusOr<CountDistribution> Parse(std::string_view spec) {
    std::vector<absl::string_view> parts = absl::StrSplit(AbslView(spec), ':');
    CountDistribution d;
    auto bad = [&] {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid count distribution '", AbslView(spec),
                       "'; expected fixed:N, uniform:A:B or geometric:MEAN"));
    };
    if (parts[0] == "fixed" && parts.size() == 2) {
      int64_t n;
      if (!absl::SimpleAtoi(parts[1], &n) || n < 1) return bad();
      d.kind_ = Kind::kFixed;
      d.lo_ = d.hi_ = n;
    } else if (parts[0] == "uniform" && parts.size() == 3) {
      int64_t lo, hi;
      if (!absl::SimpleAtoi(parts[1], &lo) || !absl::SimpleAtoi(parts[2], &hi) ||
          lo < 1 || hi < lo) {
        return bad();
      }
      d.kind_ = Kind::kUniform;
      d.lo_ = lo;
      d.hi_ = hi;
    } else if (parts[0] == "geometric" && parts.size() == 2) {
      double mean;
      if (!absl::SimpleAtod(parts[1], &mean) || !(mean >= 1.0) ||
          !std::isfinite(mean)) {
        return bad();
      }
      d.kind_ = Kind::kGeometric;
      d.mean_ = mean;
    } else {
      return bad();
    }
    return d;
  }

  int64_t Sample(RandomStream& rng) const {
    switch (kind_) {
      case Kind::kFixed:
        return lo_;
      case Kind::kUniform:
        return lo_ + static_cast<int64_t>(rng.Bounded(hi_ - lo_ + 1));
      case Kind::kGeometric: {
        if (mean_ <= 1.0) return 1;
        const double p = 1.0 / mean_;
        return 1 + static_cast<int64_t>(
                       std::floor(std::log(rng.UniformOpen01()) /
                                  std::log1p(-p)));
      }
    }
    return 1;
  }

 private:
  enum class Kind { kFixed, kUniform, kGeometric };
  Kind kind_ = Kind::kFixed;
  int64_t lo_ = 1;
  int64_t hi_ = 1;
  double mean_ = 1.0;
};

// Samples ranks 0..n-1 with P(r) proportional to (r+1)^-s.
class ZipfSampler {
 public:
  ZipfSampler(int64_t n, double exponent) : cdf_(n) {
    double total = 0;
    for (int64_t r = 0; r < n; ++r) {
      total += std::pow(static_cast<double>(r + 1), -exponent);
      cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  int64_t Sample(RandomStream& rng) const {
    const double u = rng.UniformOpen01();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return it - cdf_.begin();
  }

 private:
  std::vector<double> cdf_;
};

struct SyntheticSpec {
  int64_t users = 1000;
  int64_t vocab = 1000;
  double zipf_exponent = 1.0;
  std::string queries_per_user = "geometric:20";
  std::string keywords_per_query = "uniform:1:3";
  double repeat_probability = 0.1;
  double refine_probability = 0.3;
  double click_probability = 0.5;
  double session_break_probability = 0.25;
  int64_t session_gap_seconds = 1800;
  uint64_t seed = 1;
};

inline std::string SyntheticKeyword(int64_t rank) {
  return absl::StrCat("kw", rank);
}

inline absl::StatusOr<SearchLog> GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.users < 1) return absl::InvalidArgumentError("users must be >= 1");
  if (spec.vocab < 1) return absl::InvalidArgumentError("vocab must be >= 1");
  if (!(spec.zipf_exponent >= 0) || !std::isfinite(spec.zipf_exponent)) {
    return absl::InvalidArgumentError("zipf exponent must be >= 0");
  }
  for (double p : {spec.repeat_probability, spec.refine_probability,
                   spec.click_probability, spec.session_break_probability}) {
    if (!(p >= 0 && p <= 1)) {
      return absl::InvalidArgumentError("probabilities must lie in [0, 1]");
    }
  }
  auto per_user = CountDistribution::Parse(spec.queries_per_user);
  if (!per_user.ok()) return per_user.status();
  auto per_query = CountDistribution::Parse(spec.keywords_per_query);
  if (!per_query.ok()) return per_query.status();

  const ZipfSampler keywords(spec.vocab, spec.zipf_exponent);
  const ZipfSampler documents(5, 1.0);
  constexpr int64_t kEpoch = 1'140'000'000;
  constexpr int64_t kMonth = 30 * 86400;

  std::vector<SearchEntry> entries;
  for (int64_t u = 0; u < spec.users; ++u) {
    const std::string user_id = absl::StrCat("user", u);
    RandomStream rng(spec.seed, static_cast<uint64_t>(u),
                     StreamDomain::kSynthetic);
    auto fresh_query = [&] {
      const int64_t len =
          std::min<int64_t>(per_query->Sample(rng), spec.vocab);
      std::vector<int64_t> ranks;
      while (static_cast<int64_t>(ranks.size()) < len) {
        const int64_t r = keywords.Sample(rng);
        if (std::find(ranks.begin(), ranks.end(), r) == ranks.end())
          ranks.push_back(r);
      }
      return ranks;
    };

    const int64_t n = per_user->Sample(rng);
    int64_t time = kEpoch + static_cast<int64_t>(rng.Bounded(kMonth));
    std::vector<int64_t> previous;
    for (int64_t q = 0; q < n; ++q) {
      bool new_session = q == 0;
      if (q > 0) {
        if (rng.UniformOpen01() < spec.session_break_probability) {
          time += spec.session_gap_seconds + 1 +
                  static_cast<int64_t>(rng.Bounded(86400));
          new_session = true;
        } else {
          time += 10 + static_cast<int64_t>(rng.Bounded(290));
        }
      }
      std::vector<int64_t> ranks;
      const double action = rng.UniformOpen01();
      if (new_session || action >= spec.repeat_probability +
                                       spec.refine_probability) {
        ranks = fresh_query();
      } else if (action < spec.repeat_probability) {
        ranks = previous;
      } else {
        ranks = previous;
        const int64_t r = keywords.Sample(rng);
        if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) {
          if (rng.Bounded(2) == 0) {
            ranks.push_back(r);
          } else {
            ranks.back() = r;
          }
        }
      }
      previous = ranks;

      SearchEntry entry;
      entry.user_id = user_id;
      entry.time = time;
      for (int64_t r : ranks) entry.query.push_back(SyntheticKeyword(r));
      if (rng.UniformOpen01() < spec.click_probability) {
        entry.clicks.push_back(absl::StrCat("www.", entry.query.front(),
                                            ".com/", documents.Sample(rng)));
      }
      entries.push_back(std::move(entry));
    }
  }
  return SearchLog::FromEntries(std::move(entries));
}

}  // namespace zealous

#endif  // ZEALOUS_SYNTHETIC_HPP_
