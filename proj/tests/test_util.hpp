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

// Helpers shared by the test binaries.

#ifndef ZEALOUS_TESTS_TEST_UTIL_HPP_
#define ZEALOUS_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gtest/gtest.h"
#include "zealous/search_log.hpp"

namespace zealous::testing {

inline SearchEntry Entry(std::string user, std::string_view query, int64_t time,
                         std::vector<std::string> clicks = {}) {
  auto e = MakeEntry(std::move(user), query, time, std::move(clicks));
  EXPECT_TRUE(e.ok()) << e.status();
  return *e;
}

// Binomial standard deviation of an empirical rate over n trials.
inline double BinomialSigma(double p, int64_t n) {
  return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

inline std::string DataPath(std::string_view name) {
  return std::string(ZEALOUS_DATA_DIR) + "/" + std::string(name);
}

}  // namespace zealous::testing

#endif  // ZEALOUS_TESTS_TEST_UTIL_HPP_
