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

#include "zealous/io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gtest/gtest.h"
#include "zealous/zealous.hpp"

namespace zealous {
namespace {

TEST(CsvTest, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(CsvTest, RoundTrip) {
  const std::vector<std::string> fields = {"", "x", "a,b", "\"q\"", "a | b"};
  std::ostringstream out;
  WriteCsvRow(out, fields);
  std::string line = out.str();
  ASSERT_EQ(line.back(), '\n');
  line.pop_back();
  EXPECT_EQ(ParseCsvRow(line), fields);
}

TEST(FormatDoubleTest, RoundTripsAndNamesNonFinite) {
  for (double v : {0.1, 1.0 / 3, 78.57533, -2.5e-300}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(JsonNumber(std::nan("")).get<std::string>(), "nan");
  EXPECT_TRUE(JsonNumber(std::optional<double>()).is_null());
}

TEST(HistogramJsonlTest, RoundTrip) {
  Histogram h;
  h.kind = ItemKind::kQuery;
  h.counts = {{"new york", 7}, {"a \"quoted\" item", 2}, {"x", 1}};
  std::stringstream buf;
  WriteHistogramJsonl(h, buf);
  auto back = ReadHistogramJsonl(buf, ItemKind::kQuery);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->counts, h.counts);

  std::istringstream bad("{\"item\": \"x\"}\n");
  EXPECT_FALSE(ReadHistogramJsonl(bad, ItemKind::kQuery).ok());
}

TEST(SanitizedJsonTest, KeysAndEntries) {
  auto plan = PlanProbabilistic(1.0, 0.001, 2, 1000);
  ASSERT_TRUE(plan.ok());
  SanitizedHistogram h;
  h.plan = *plan;
  h.seed = 42;
  h.entries = {{"b", 12.5}, {"a", 30.25}};
  const Json j = SanitizedToJson(h);
  EXPECT_EQ(j["kind"], "keyword");
  EXPECT_EQ(j["seed"], 42);
  for (const char* key : {"m", "lambda", "tau", "tau_prime", "epsilon", "delta",
                          "epsilon_prime", "delta_prime", "U"}) {
    EXPECT_TRUE(j["plan"].contains(key)) << key;
  }
  EXPECT_EQ(j["plan"]["U"], 1000);
  ASSERT_EQ(j["entries"].size(), 2u);
  EXPECT_EQ(j["entries"][0]["item"], "a");  // highest noisy count first
  auto entries = SanitizedEntriesFromJson(j.dump());
  ASSERT_TRUE(entries.ok());
  EXPECT_EQ(*entries, h.entries);
  EXPECT_FALSE(SanitizedEntriesFromJson("{}").ok());
}

TEST(UtilityCsvTest, RowMatchesHeader) {
  UtilityReport r;
  const auto row = UtilityCsvRow(ItemKind::kKeyword, 5, "1", 10, r);
  EXPECT_EQ(row.size(), UtilityCsvHeader().size());
}

TEST(WriteFileAtomicallyTest, ReplacesContents) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("zealous_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  ASSERT_TRUE(WriteFileAtomically(path, "first").ok());
  ASSERT_TRUE(WriteFileAtomically(path, "second").ok());
  auto text = ReadFile(path);
  ASSERT_TRUE(text.ok());
  EXPECT_EQ(*text, "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  EXPECT_FALSE(WriteFileAtomically(dir / "missing" / "x", "y").ok());
  EXPECT_FALSE(ReadFile(dir / "nope").ok());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace zealous
