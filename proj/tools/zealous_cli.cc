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

// zealous_cli: ingest logs, plan parameters, publish histograms, run the
// k-query anonymity baseline, verify guarantees and run utility sweeps.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "zealous/anonymity.hpp"
#include "zealous/apps.hpp"
#include "zealous/experiment.hpp"
#include "zealous/io.hpp"
#include "zealous/privacy_analysis.hpp"
#include "zealous/search_log.hpp"
#include "zealous/synthetic.hpp"
#include "zealous/utility.hpp"
#include "zealous/zealous.hpp"

namespace zealous::cli {
namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;
constexpr char kSeedEnv[] = "ZEALOUS_SEED";

uint64_t DefaultSeed() {
  const char* env = std::getenv(kSeedEnv);
  uint64_t seed = 1;
  if (env != nullptr && !absl::SimpleAtoi(env, &seed)) {
    std::cerr << "warning: ignoring non-numeric " << kSeedEnv << "=" << env
              << "\n";
    seed = 1;
  }
  return seed;
}

// Effective option values of one subcommand, defaults included. Output
// destinations are left out so that reruns into other files match.
std::vector<std::pair<std::string, std::string>> EffectiveConfig(
    const CLI::App& sub, uint64_t seed) {
  static const std::set<std::string> kDestinations = {"help", "output", "csv",
                                                      "histogram"};
  std::vector<std::pair<std::string, std::string>> out = {
      {"command", sub.get_name()}, {"seed", absl::StrCat(seed)}};
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || kDestinations.count(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      value = absl::StrJoin(opt->results(), ",");
    } else {
      value = opt->get_default_str();
      if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
        value = value.substr(1, value.size() - 2);
      }
    }
    out.emplace_back(name, value);
  }
  return out;
}

Json ConfigJson(const std::vector<std::pair<std::string, std::string>>& config) {
  Json j = Json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

std::string ConfigComment(
    const std::vector<std::pair<std::string, std::string>>& config) {
  std::string out;
  for (const auto& [k, v] : config) absl::StrAppend(&out, "# ", k, "=", v, "\n");
  return out;
}

absl::Status WriteOrPrint(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteFileAtomically(path, text);
}

absl::StatusOr<SearchLog> LoadLog(const std::string& path,
                                  const std::string& format) {
  auto fmt = ParseLogFormat(format);
  if (!fmt.ok()) return fmt.status();
  auto result = IngestFile(path, *fmt);
  if (!result.ok()) return result.status();
  if (result->malformed_lines > 0) {
    std::cerr << "warning: skipped " << result->malformed_lines
              << " malformed lines of " << path << "\n";
  }
  return std::move(result->log);
}

absl::StatusOr<std::vector<ItemKind>> ParseKinds(
    const std::vector<std::string>& names) {
  std::vector<ItemKind> kinds;
  for (const auto& n : names) {
    auto k = ParseItemKind(n);
    if (!k.ok()) return k.status();
    kinds.push_back(*k);
  }
  return kinds;
}

// ---------------------------------------------------------------------------
// Plan flags shared by plan, sanitize, verify and the applications.

struct PlanFlags {
  double epsilon = 1.0;
  double delta = 0.001;
  int m = 1;
  int64_t users = 0;
  double lambda = 0;
  double tau = 1;
  double tau_prime = 0;
  std::string flavor = "prob";
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* users_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* tau_prime_opt = nullptr;

  void Register(CLI::App* sub, bool with_users) {
    epsilon_opt = sub->add_option("--epsilon", epsilon,
                                  "privacy parameter epsilon (or epsilon')")
                      ->capture_default_str();
    delta_opt =
        sub->add_option("--delta", delta, "privacy parameter delta (or delta')")
            ->capture_default_str();
    sub->add_option("--m", m, "items kept per user")->capture_default_str();
    if (with_users) {
      users_opt = sub->add_option("--users", users, "number of users U");
    }
    lambda_opt = sub->add_option("--lambda", lambda, "explicit noise scale");
    tau_opt = sub->add_option("--tau", tau, "first threshold");
    tau_prime_opt =
        sub->add_option("--tau-prime", tau_prime, "explicit second threshold");
    sub->add_option("--flavor", flavor,
                    "prob (probabilistic DP) or indist (indistinguishability)")
        ->check(CLI::IsMember({"prob", "indist"}))
        ->capture_default_str();
  }

  bool Explicit() const {
    return lambda_opt->count() > 0 || tau_prime_opt->count() > 0;
  }

  // `log_users` overrides --users when the command reads a log.
  absl::StatusOr<ZealousPlan> Build(std::optional<int64_t> log_users) const {
    std::optional<int64_t> u = log_users;
    if (!u.has_value() && users_opt != nullptr && users_opt->count() > 0) {
      u = users;
    }
    if (Explicit()) {
      if (epsilon_opt->count() > 0) {
        return absl::InvalidArgumentError(
            "--epsilon cannot be combined with --lambda/--tau-prime");
      }
      if (lambda_opt->count() == 0 || tau_prime_opt->count() == 0) {
        return absl::InvalidArgumentError(
            "--lambda and --tau-prime must be given together");
      }
      return PlanFromParameters(lambda, tau, tau_prime, m, u);
    }
    const PrivacyFlavor f = flavor == "indist"
                                ? PrivacyFlavor::kIndistinguishability
                                : PrivacyFlavor::kProbabilisticDp;
    if (auto s = PrivacyBudget{epsilon, delta, f}.Validate(); !s.ok()) return s;
    if (f == PrivacyFlavor::kIndistinguishability) {
      if (tau_opt->count() > 0) {
        return absl::InvalidArgumentError(
            "--tau is fixed to 1 for indistinguishability plans");
      }
      return PlanIndistinguishable(epsilon, delta, m, u);
    }
    if (!u.has_value()) {
      return absl::InvalidArgumentError(
          "probabilistic plans need the number of users (--users)");
    }
    return PlanProbabilistic(epsilon, delta, m, *u,
                             tau_opt->count() > 0 ? std::optional(tau)
                                                  : std::nullopt);
  }
};

void WarnIfClamped(const ZealousPlan& plan) {
  if (plan.prob_dp.has_value() && plan.prob_dp->clamped) {
    std::cerr << "warning: the achieved delta exceeds 1; reported as 1\n";
  }
  if (plan.indist.clamped) {
    std::cerr << "warning: the achieved delta' exceeds 1; reported as 1\n";
  }
}

std::string Num(double v) { return absl::StrFormat("%.6g", v); }

std::string PlanTable(const ZealousPlan& plan) {
  std::vector<std::pair<std::string, std::string>> rows = {
      {"m", absl::StrCat(plan.m)},
      {"lambda", Num(plan.lambda)},
      {"tau", Num(plan.tau)},
      {"tau'", Num(plan.tau_prime)},
      {"epsilon", plan.prob_dp ? Num(plan.prob_dp->epsilon) : "-"},
      {"delta", plan.prob_dp ? Num(plan.prob_dp->delta) : "-"},
      {"epsilon'", Num(plan.indist.epsilon)},
      {"delta'", Num(plan.indist.delta)},
      {"U", plan.users ? absl::StrCat(*plan.users) : "-"}};
  std::string out;
  for (const auto& [k, v] : rows) absl::StrAppend(&out, absl::StrFormat("%-9s %s\n", k, v));
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Context {
  uint64_t seed = 1;
};

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s.message() << "\n";
  return kExitError;
}

struct IngestCmd {
  std::string input, format = "native", output, kind = "keyword", histogram;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("ingest", "parse a log and write native TSV");
    sub->add_option("--input", input, "log file")->required();
    sub->add_option("--format", format, "native or aol")->capture_default_str();
    sub->add_option("--output", output, "native TSV output");
    sub->add_option("--kind", kind, "item kind for --histogram")
        ->capture_default_str();
    sub->add_option("--histogram", histogram, "user-level histogram (JSONL)");
  }

  int Run(const Context&) const {
    auto fmt = ParseLogFormat(format);
    if (!fmt.ok()) return Fail(fmt.status());
    auto result = IngestFile(input, *fmt);
    if (!result.ok()) return Fail(result.status());
    if (!output.empty()) {
      std::ostringstream tsv;
      WriteTsv(result->log, tsv);
      if (auto s = WriteFileAtomically(output, tsv.str()); !s.ok()) return Fail(s);
    }
    if (!histogram.empty()) {
      auto k = ParseItemKind(kind);
      if (!k.ok()) return Fail(k.status());
      std::ostringstream jsonl;
      WriteHistogramJsonl(BuildHistogram(result->log, *k), jsonl);
      if (auto s = WriteFileAtomically(histogram, jsonl.str()); !s.ok()) return Fail(s);
    }
    Json summary;
    summary["lines"] = result->lines;
    summary["malformed_lines"] = result->malformed_lines;
    summary["users"] = result->log.user_count();
    summary["entries"] = result->log.entry_count();
    std::cout << summary.dump() << "\n";
    return 0;
  }
};

struct GenerateCmd {
  SyntheticSpec spec;
  std::string output;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("generate", "write a synthetic Zipf log");
    sub->add_option("--users", spec.users)->capture_default_str();
    sub->add_option("--vocab", spec.vocab)->capture_default_str();
    sub->add_option("--zipf", spec.zipf_exponent, "keyword popularity exponent")
        ->capture_default_str();
    sub->add_option("--queries-per-user", spec.queries_per_user)
        ->capture_default_str();
    sub->add_option("--keywords-per-query", spec.keywords_per_query)
        ->capture_default_str();
    sub->add_option("--output", output, "native TSV output (default stdout)");
  }

  int Run(const Context& ctx) const {
    SyntheticSpec s = spec;
    s.seed = ctx.seed;
    auto log = GenerateSynthetic(s);
    if (!log.ok()) return Fail(log.status());
    std::ostringstream tsv;
    WriteTsv(*log, tsv);
    if (auto st = WriteOrPrint(output, tsv.str()); !st.ok()) return Fail(st);
    return 0;
  }
};

absl::StatusOr<std::pair<int64_t, int64_t>> ParseRange(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, "..");
  int64_t lo, hi;
  if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &lo) ||
      !absl::SimpleAtoi(parts[1], &hi) || lo < 1 || hi < lo) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad range '", text, "'; expected A..B with 1 <= A <= B"));
  }
  return std::make_pair(lo, hi);
}

struct PlanCmd {
  PlanFlags flags;
  std::string sweep_tau, output;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("plan", "compute lambda, tau and tau'");
    flags.Register(sub, /*with_users=*/true);
    sub->add_option("--sweep-tau", sweep_tau, "tabulate tau' over tau in A..B");
    sub->add_option("--output", output, "JSON output file");
  }

  int Run(const Context& ctx) const {
    const Json config = ConfigJson(EffectiveConfig(*sub, ctx.seed));
    if (sweep_tau.empty()) {
      auto plan = flags.Build(std::nullopt);
      if (!plan.ok()) return Fail(plan.status());
      WarnIfClamped(*plan);
      Json j;
      j["config"] = config;
      j["plan"] = PlanToJson(*plan);
      std::cout << PlanTable(*plan) << j.dump() << "\n";
      if (!output.empty()) {
        if (auto s = WriteFileAtomically(output, j.dump(2) + "\n"); !s.ok())
          return Fail(s);
      }
      return 0;
    }
    if (flags.Explicit() || flags.flavor != "prob" || flags.tau_opt->count() > 0) {
      return Fail(absl::InvalidArgumentError(
          "--sweep-tau needs --epsilon/--delta/--m/--users and no --tau"));
    }
    if (flags.users_opt->count() == 0) {
      return Fail(absl::InvalidArgumentError("--sweep-tau needs --users"));
    }
    auto range = ParseRange(sweep_tau);
    if (!range.ok()) return Fail(range.status());
    Json rows = Json::array();
    std::string table = absl::StrFormat("%-6s %-12s %s\n", "tau", "tau'", "delta");
    double best = std::numeric_limits<double>::infinity();
    int64_t best_tau = range->first;
    std::vector<ZealousPlan> plans;
    for (int64_t tau = range->first; tau <= range->second; ++tau) {
      auto plan = PlanProbabilistic(flags.epsilon, flags.delta, flags.m,
                                    flags.users, static_cast<double>(tau));
      if (!plan.ok()) return Fail(plan.status());
      if (plan->tau_prime < best) {
        best = plan->tau_prime;
        best_tau = tau;
      }
      plans.push_back(*plan);
    }
    for (const auto& plan : plans) {
      absl::StrAppend(&table,
                      absl::StrFormat("%-6g %-12.4f %.3g%s\n", plan.tau,
                                      plan.tau_prime, plan.prob_dp->delta,
                                      plan.tau == best_tau ? "  <- min" : ""));
      rows.push_back(PlanToJson(plan));
    }
    Json j;
    j["config"] = config;
    j["sweep"] = std::move(rows);
    j["argmin_tau"] = best_tau;
    j["optimal_tau"] = JsonNumber(OptimalTau(flags.epsilon, flags.m));
    std::cout << table << j.dump() << "\n";
    if (!output.empty()) {
      if (auto s = WriteFileAtomically(output, j.dump(2) + "\n"); !s.ok())
        return Fail(s);
    }
    return 0;
  }
};

struct SanitizeCmd {
  PlanFlags flags;
  std::string input, format = "native", kind = "keyword", output, csv;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("sanitize", "publish a noisy histogram");
    sub->add_option("--input", input, "log file")->required();
    sub->add_option("--format", format)->capture_default_str();
    sub->add_option("--kind", kind)->capture_default_str();
    flags.Register(sub, /*with_users=*/false);
    sub->add_option("--output", output, "JSON output (default stdout)");
    sub->add_option("--csv", csv, "also write item,noisy_count CSV");
  }

  int Run(const Context& ctx) const {
    const auto config = EffectiveConfig(*sub, ctx.seed);
    auto log = LoadLog(input, format);
    if (!log.ok()) return Fail(log.status());
    auto k = ParseItemKind(kind);
    if (!k.ok()) return Fail(k.status());
    auto plan = flags.Build(log->user_count());
    if (!plan.ok()) return Fail(plan.status());
    WarnIfClamped(*plan);
    auto out = Sanitize(*log, *k, *plan, ctx.seed);
    if (!out.ok()) return Fail(out.status());
    Json j = SanitizedToJson(*out);
    j["config"] = ConfigJson(config);
    if (auto s = WriteOrPrint(output, j.dump(2) + "\n"); !s.ok()) return Fail(s);
    if (!csv.empty()) {
      std::ostringstream text;
      text << ConfigComment(config);
      WriteSanitizedCsv(*out, text);
      if (auto s = WriteFileAtomically(csv, text.str()); !s.ok()) return Fail(s);
    }
    return 0;
  }
};

struct AnonymizeCmd {
  std::string input, format = "native", output, kind = "query", histogram;
  int64_t k = 10;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("anonymize", "k-query anonymity baseline");
    sub->add_option("--input", input, "log file")->required();
    sub->add_option("--format", format)->capture_default_str();
    sub->add_option("--k", k, "minimum users per kept query")->capture_default_str();
    sub->add_option("--output", output, "anonymized native TSV");
    sub->add_option("--kind", kind, "item kind for --histogram")
        ->capture_default_str();
    sub->add_option("--histogram", histogram, "histogram of the result (JSONL)");
  }

  int Run(const Context& ctx) const {
    auto log = LoadLog(input, format);
    if (!log.ok()) return Fail(log.status());
    auto anon = KQueryAnonymize(*log, k, ctx.seed);
    if (!anon.ok()) return Fail(anon.status());
    if (!output.empty()) {
      std::ostringstream tsv;
      WriteAnonymousTsv(*anon, tsv);
      if (auto s = WriteFileAtomically(output, tsv.str()); !s.ok()) return Fail(s);
    }
    if (!histogram.empty()) {
      auto item_kind = ParseItemKind(kind);
      if (!item_kind.ok()) return Fail(item_kind.status());
      auto h = HistogramsFromAnonymous(*anon, *item_kind);
      if (!h.ok()) return Fail(h.status());
      std::ostringstream jsonl;
      WriteHistogramJsonl(*h, jsonl);
      if (auto s = WriteFileAtomically(histogram, jsonl.str()); !s.ok()) return Fail(s);
    }
    Json summary;
    summary["config"] = ConfigJson(EffectiveConfig(*sub, ctx.seed));
    summary["k"] = k;
    summary["sessions"] = anon->sessions.size();
    summary["entries"] = anon->Entries().size();
    std::cout << summary.dump() << "\n";
    return 0;
  }
};

absl::StatusOr<std::vector<std::string>> ReadDomain(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<std::string> domain;
  for (absl::string_view line : absl::StrSplit(*text, '\n', absl::SkipWhitespace())) {
    domain.emplace_back(absl::StripAsciiWhitespace(line));
  }
  return domain;
}

struct VerifyCmd {
  PlanFlags flags;
  std::string log_path, neighbor_path, domain_path, format = "native", kind = "keyword",
      output;
  int64_t points = 10000;
  int random_instances = 0;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand(
        "verify", "check the privacy obligations on small neighbor logs");
    sub->add_option("--log", log_path, "first log");
    sub->add_option("--neighbor", neighbor_path, "neighboring log");
    sub->add_option("--domain", domain_path, "item domain, one per line");
    sub->add_option("--format", format)->capture_default_str();
    sub->add_option("--kind", kind)->capture_default_str();
    flags.Register(sub, /*with_users=*/false);
    sub->add_option("--points", points, "sampled outputs per instance")
        ->capture_default_str();
    sub->add_option("--random-instances", random_instances,
                    "check this many random instances instead of --log");
    sub->add_option("--output", output, "JSON report");
  }

  absl::StatusOr<OracleInstance> FixtureInstance() const {
    if (log_path.empty() || neighbor_path.empty() || domain_path.empty()) {
      return absl::InvalidArgumentError(
          "verify needs --log, --neighbor and --domain, or --random-instances");
    }
    OracleInstance in;
    auto log = LoadLog(log_path, format);
    if (!log.ok()) return log.status();
    auto neighbor = LoadLog(neighbor_path, format);
    if (!neighbor.ok()) return neighbor.status();
    auto domain = ReadDomain(domain_path);
    if (!domain.ok()) return domain.status();
    auto k = ParseItemKind(kind);
    if (!k.ok()) return k.status();
    in.log = *std::move(log);
    in.neighbor = *std::move(neighbor);
    in.domain = *std::move(domain);
    in.kind = *k;
    auto plan = flags.Build(in.log.user_count());
    if (!plan.ok()) return plan.status();
    in.plan = *plan;
    // An explicit plan is checked against the requested delta when one is
    // given, instead of the delta it achieves.
    if (flags.Explicit() && flags.delta_opt->count() > 0) {
      in.plan.prob_dp = Guarantee{2.0 * in.plan.m / in.plan.lambda, flags.delta};
    }
    return in;
  }

  int Run(const Context& ctx) const {
    std::vector<OracleInstance> instances;
    if (random_instances > 0) {
      for (int i = 0; i < random_instances; ++i) {
        auto in = RandomOracleInstance(ctx.seed + i);
        if (!in.ok()) return Fail(in.status());
        instances.push_back(*std::move(in));
      }
    } else {
      auto in = FixtureInstance();
      if (!in.ok()) return Fail(in.status());
      instances.push_back(*std::move(in));
    }
    Json reports = Json::array();
    bool passed = true;
    for (size_t i = 0; i < instances.size(); ++i) {
      auto r = CheckImplication(instances[i], points, ctx.seed + i);
      if (!r.ok()) return Fail(r.status());
      const bool ok = r->verdict == Verdict::kPass;
      passed = passed && ok;
      Json j = ImplicationToJson(*r);
      j["plan"] = PlanToJson(instances[i].plan);
      reports.push_back(std::move(j));
      std::cout << absl::StrFormat(
          "instance %d: %s (breach %.3g/%.3g vs delta %.3g, max |log ratio| "
          "%.4g vs epsilon %.4g)\n",
          i, AbslView(VerdictName(r->verdict)),
          r->prob_dp.breach_log.breach_probability,
          r->prob_dp.breach_neighbor.breach_probability, r->prob_dp.delta,
          r->prob_dp.max_abs_log_ratio, r->prob_dp.epsilon);
    }
    Json j;
    j["config"] = ConfigJson(EffectiveConfig(*sub, ctx.seed));
    j["instances"] = std::move(reports);
    j["passed"] = passed;
    if (!output.empty()) {
      if (auto s = WriteFileAtomically(output, j.dump(2) + "\n"); !s.ok())
        return Fail(s);
    }
    std::cout << (passed ? "all instances passed" : "violation found") << "\n";
    return passed ? 0 : kExitViolation;
  }
};

// Reads either a sanitized-histogram JSON document or a histogram JSONL file.
absl::StatusOr<std::map<std::string, double>> ReadPublished(
    const std::string& path, ItemKind kind) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  const std::string_view trimmed = StdView(absl::StripLeadingAsciiWhitespace(*text));
  if (!trimmed.empty() && trimmed.front() == '{' &&
      trimmed.find("\"entries\"") != std::string_view::npos) {
    return SanitizedEntriesFromJson(*text);
  }
  std::istringstream in(*text);
  auto h = ReadHistogramJsonl(in, kind);
  if (!h.ok()) return h.status();
  return AsCounts(*h);
}

struct EvalCmd {
  std::string input, format = "native", against, output, l1 = "per-item";
  std::vector<std::string> kinds = {"keyword"};
  std::vector<double> epsilons = {0.1, 1, 10};
  std::vector<int64_t> ks;
  std::vector<int> ms = {1};
  std::vector<int64_t> js = {10};
  double delta = 0.001;
  int runs = 1;
  int threads = 0;
  int64_t synthetic_users = 0;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("eval", "utility sweep as long-format CSV");
    sub->add_option("--input", input, "log file");
    sub->add_option("--format", format)->capture_default_str();
    sub->add_option("--synthetic-users", synthetic_users,
                    "generate a synthetic log of this many users instead");
    sub->add_option("--against", against,
                    "score this sanitized JSON or histogram JSONL instead of "
                    "running a sweep");
    sub->add_option("--kinds", kinds)->delimiter(',')->capture_default_str();
    sub->add_option("--epsilons", epsilons)->delimiter(',')->capture_default_str();
    sub->add_option("--ks", ks, "k-query anonymity levels")->delimiter(',');
    sub->add_option("--ms", ms)->delimiter(',')->capture_default_str();
    sub->add_option("--js", js)->delimiter(',')->capture_default_str();
    sub->add_option("--delta", delta)->capture_default_str();
    sub->add_option("--runs", runs, "seeds averaged per ZEALOUS point")
        ->capture_default_str();
    sub->add_option("--l1", l1, "per-item or total")
        ->check(CLI::IsMember({"per-item", "total"}))
        ->capture_default_str();
    sub->add_option("--threads", threads, "0: one per hardware thread")
        ->capture_default_str();
    sub->add_option("--output", output, "CSV output (default stdout)");
  }

  int Run(const Context& ctx) const {
    const auto config = EffectiveConfig(*sub, ctx.seed);
    absl::StatusOr<SearchLog> log;
    if (synthetic_users > 0) {
      SyntheticSpec spec;
      spec.users = synthetic_users;
      spec.seed = ctx.seed;
      log = GenerateSynthetic(spec);
    } else if (!input.empty()) {
      log = LoadLog(input, format);
    } else {
      return Fail(absl::InvalidArgumentError("eval needs --input or --synthetic-users"));
    }
    if (!log.ok()) return Fail(log.status());
    auto item_kinds = ParseKinds(kinds);
    if (!item_kinds.ok()) return Fail(item_kinds.status());
    const L1Normalization norm =
        l1 == "total" ? L1Normalization::kTotal : L1Normalization::kPerItem;

    std::vector<SweepRow> rows;
    if (!against.empty()) {
      if (item_kinds->size() != 1) {
        return Fail(absl::InvalidArgumentError("--against takes exactly one kind"));
      }
      const ItemKind kind = item_kinds->front();
      auto published = ReadPublished(against, kind);
      if (!published.ok()) return Fail(published.status());
      auto r = MetricRows(SweepRow{"given", kind, std::nullopt, "none", 0, std::nullopt, "", 0},
                          BuildHistogram(*log, kind), *published, js, norm);
      if (!r.ok()) return Fail(r.status());
      rows = *std::move(r);
    } else {
      SweepConfig sweep;
      sweep.kinds = *item_kinds;
      sweep.epsilons = epsilons;
      sweep.ks = ks;
      sweep.ms = ms;
      sweep.js = js;
      sweep.delta = delta;
      sweep.seed = ctx.seed;
      sweep.runs = runs;
      sweep.l1 = norm;
      sweep.threads = threads;
      auto r = RunSweep(*log, sweep);
      if (!r.ok()) return Fail(r.status());
      rows = *std::move(r);
    }
    std::ostringstream text;
    text << ConfigComment(config);
    WriteSweepCsv(rows, text);
    if (auto s = WriteOrPrint(output, text.str()); !s.ok()) return Fail(s);
    return 0;
  }
};

// Published workloads of both algorithms, keyed by (algorithm, parameter).
struct Workloads {
  std::map<std::string, double> truth;
  std::vector<std::tuple<std::string, std::string, double,
                         std::map<std::string, double>>>
      sanitized;
};

absl::StatusOr<Workloads> BuildWorkloads(const SearchLog& log, ItemKind kind,
                                         int m, const std::vector<double>& epsilons,
                                         double delta,
                                         const std::vector<int64_t>& ks,
                                         uint64_t seed) {
  Workloads w;
  w.truth = AsCounts(BuildHistogram(log, kind));
  for (double epsilon : epsilons) {
    auto plan = PlanProbabilistic(epsilon, delta, m, log.user_count());
    if (!plan.ok()) return plan.status();
    auto out = Sanitize(log, kind, *plan, seed);
    if (!out.ok()) return out.status();
    w.sanitized.emplace_back("zealous", "epsilon", epsilon, out->entries);
  }
  for (int64_t k : ks) {
    auto anon = KQueryAnonymize(log, k, seed);
    if (!anon.ok()) return anon.status();
    auto h = HistogramsFromAnonymous(*anon, kind);
    if (!h.ok()) return h.status();
    w.sanitized.emplace_back("k-anonymity", "k", static_cast<double>(k),
                             AsCounts(*h));
  }
  return w;
}

void WriteAppRow(std::ostream& out, const std::string& algorithm,
                 const std::string& parameter, double value,
                 const std::string& metric, std::optional<double> metric_value) {
  WriteCsvRow(out, {algorithm, parameter, FormatDouble(value), metric,
                    metric_value ? FormatDouble(*metric_value) : ""});
}

struct AppFlags {
  std::string input, format = "native", output;
  int m = 6;
  std::vector<double> epsilons = {1, 10};
  std::vector<int64_t> ks = {10};
  double delta = 0.001;

  void Register(CLI::App* sub) {
    sub->add_option("--input", input, "log file")->required();
    sub->add_option("--format", format)->capture_default_str();
    sub->add_option("--m", m)->capture_default_str();
    sub->add_option("--epsilons", epsilons)->delimiter(',')->capture_default_str();
    sub->add_option("--ks", ks)->delimiter(',')->capture_default_str();
    sub->add_option("--delta", delta)->capture_default_str();
    sub->add_option("--output", output, "CSV output (default stdout)");
  }
};

struct CacheAppCmd {
  AppFlags app_flags;
  int64_t budget = 1 << 20;
  int64_t corpus = 100000;
  double posting_exponent = 1.0;
  bool skip_ahead = false;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("cache-app", "index caching with published keywords");
    app_flags.Register(sub);
    sub->add_option("--budget", budget, "cache size in bytes")->capture_default_str();
    sub->add_option("--corpus", corpus, "documents in the synthetic corpus")
        ->capture_default_str();
    sub->add_option("--posting-exponent", posting_exponent)->capture_default_str();
    sub->add_flag("--skip-ahead", skip_ahead,
                  "keep packing past a list that does not fit")
        ->capture_default_str();
  }

  int Run(const Context& ctx) const {
    const auto config = EffectiveConfig(*sub, ctx.seed);
    auto log = LoadLog(app_flags.input, app_flags.format);
    if (!log.ok()) return Fail(log.status());
    auto w = BuildWorkloads(*log, ItemKind::kKeyword, app_flags.m, app_flags.epsilons,
                            app_flags.delta, app_flags.ks, ctx.seed);
    if (!w.ok()) return Fail(w.status());
    std::vector<std::string> keywords;
    for (const auto& [kw, c] : w->truth) keywords.push_back(kw);
    PostingListModel model = SyntheticPostings(keywords, corpus, posting_exponent, ctx.seed);
    model.memory_budget = budget;
    const CacheOptions options{skip_ahead};

    std::ostringstream out;
    out << ConfigComment(config);
    WriteCsvRow(out, {"algorithm", "parameter", "parameter_value", "metric", "value"});
    auto truth_hit = EvaluateCache(w->truth, w->truth, model, options);
    if (!truth_hit.ok()) return Fail(truth_hit.status());
    WriteAppRow(out, "original", "none", 0, "hit_probability", *truth_hit);
    for (const auto& [algorithm, parameter, value, workload] : w->sanitized) {
      auto hit = EvaluateCache(w->truth, workload, model, options);
      if (!hit.ok()) return Fail(hit.status());
      WriteAppRow(out, algorithm, parameter, value, "hit_probability", *hit);
    }
    if (auto s = WriteOrPrint(app_flags.output, out.str()); !s.ok()) return Fail(s);
    return 0;
  }
};

struct SubstAppCmd {
  AppFlags app_flags;
  int64_t j = 5;
  int64_t queries = 100;
  CLI::App* sub = nullptr;

  void Register(CLI::App& app) {
    sub = app.add_subcommand("subst-app", "query substitution from published pairs");
    app_flags.Register(sub);
    sub->add_option("--j", j, "substitutions per query")->capture_default_str();
    sub->add_option("--queries", queries, "evaluate the most frequent queries")
        ->capture_default_str();
  }

  int Run(const Context& ctx) const {
    const auto config = EffectiveConfig(*sub, ctx.seed);
    if (j < 1) return Fail(absl::InvalidArgumentError("--j must be >= 1"));
    auto log = LoadLog(app_flags.input, app_flags.format);
    if (!log.ok()) return Fail(log.status());
    auto w = BuildWorkloads(*log, ItemKind::kQueryPair, app_flags.m,
                            app_flags.epsilons, app_flags.delta, app_flags.ks,
                            ctx.seed);
    if (!w.ok()) return Fail(w.status());
    const auto eval_queries = TopJ(BuildHistogram(*log, ItemKind::kQuery), queries);

    std::ostringstream out;
    out << ConfigComment(config);
    WriteCsvRow(out, {"algorithm", "parameter", "parameter_value", "metric", "value"});
    for (const auto& [algorithm, parameter, value, pairs] : w->sanitized) {
      const SubstitutionEval e = EvaluateSubstitutions(w->truth, pairs, eval_queries, j);
      WriteAppRow(out, algorithm, parameter, value, "precision", e.precision);
      WriteAppRow(out, algorithm, parameter, value, "recall", e.recall);
      WriteAppRow(out, algorithm, parameter, value, "map", e.map);
      WriteAppRow(out, algorithm, parameter, value, "ndcg", e.ndcg);
      WriteAppRow(out, algorithm, parameter, value, "coverage", e.coverage);
    }
    if (auto s = WriteOrPrint(app_flags.output, out.str()); !s.ok()) return Fail(s);
    return 0;
  }
};

int Main(int argc, char** argv) {
  CLI::App app{"Publish frequent search-log items with the ZEALOUS algorithm."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "key = value config file; [command] sections set subcommand "
                 "options; command-line flags win");
  Context ctx;
  ctx.seed = DefaultSeed();
  app.add_option("--seed", ctx.seed,
                 absl::StrCat("random seed (default: $", kSeedEnv, " or 1)"));

  IngestCmd ingest;
  GenerateCmd generate;
  PlanCmd plan;
  SanitizeCmd sanitize;
  AnonymizeCmd anonymize;
  VerifyCmd verify;
  EvalCmd eval;
  CacheAppCmd cache_app;
  SubstAppCmd subst_app;
  ingest.Register(app);
  generate.Register(app);
  plan.Register(app);
  sanitize.Register(app);
  anonymize.Register(app);
  verify.Register(app);
  eval.Register(app);
  cache_app.Register(app);
  subst_app.Register(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  if (*ingest.sub) return ingest.Run(ctx);
  if (*generate.sub) return generate.Run(ctx);
  if (*plan.sub) return plan.Run(ctx);
  if (*sanitize.sub) return sanitize.Run(ctx);
  if (*anonymize.sub) return anonymize.Run(ctx);
  if (*verify.sub) return verify.Run(ctx);
  if (*eval.sub) return eval.Run(ctx);
  if (*cache_app.sub) return cache_app.Run(ctx);
  if (*subst_app.sub) return subst_app.Run(ctx);
  return kExitError;
}

}  // namespace
}  // namespace zealous::cli

int main(int argc, char** argv) { return zealous::cli::Main(argc, argv); }
