// Copyright 2026 The ldpcount Authors
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


#include "cli.h"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "ldpcount/experiment.h"
#include "ldpcount/memoization.h"
#include "ldpcount/patterns.h"
#include "ldpcount/perturbation.h"
#include "ldpcount/population.h"

namespace ldpcount::cli {

namespace {

struct CommonFlags {
  std::vector<double> epsilons{1.0};
  std::vector<double> gammas{0.0};
  int64_t n = 10000;
  int64_t rounds = 1;
  int64_t m = 86400;
  std::string population = "constant:43200";
  int64_t trials = 200;
  uint64_t seed = 0;
  double delta = 0.05;
  bool clip = false;
  int threads = 0;
  std::string out;
  std::string json_out;
  bool keep_trials = false;
};

struct MeanFlags {
  int64_t s = 4320;
  std::string mechanism = "1BitRRPM";
  std::string baseline;
};

struct HistFlags {
  int64_t k = 32;
  std::vector<int64_t> ds{4};
  std::string mechanism = "dBitFlipPM";
};

struct PatternFlags {
  std::string trace;
  std::string population;
  int64_t n = 1000;
  int64_t rounds = 31;
  int64_t m = 86400;
  int64_t s = 86400;
  uint64_t seed = 0;
  std::string out;
};

struct AccountingFlags {
  std::vector<double> epsilons;
  std::vector<double> gammas{0.0};
  std::string out;
};

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitValidation;
    default:
      return kExitIo;
  }
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

std::string JoinNums(const std::vector<double>& values) {
  return absl::StrJoin(values, ",", [](std::string* out, double v) {
    out->append(Num(v));
  });
}

// Writes `contents` to `path`, or to `out` when path is empty.
absl::Status Emit(const std::string& path, const std::string& contents,
                  std::ostream& out) {
  if (path.empty()) {
    out << contents;
    return absl::OkStatus();
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  file << contents;
  file.close();
  if (!file) {
    return absl::UnavailableError(absl::StrCat("failed writing '", path, "'"));
  }
  return absl::OkStatus();
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--epsilon", f.epsilons, "Privacy budgets (list)")
      ->delimiter(',');
  cmd->add_option("--gamma", f.gammas, "Flip probabilities (list)")
      ->delimiter(',');
  cmd->add_option("--n", f.n, "Number of users");
  cmd->add_option("--t", f.rounds, "Rounds of collection (T)");
  cmd->add_option("--m", f.m, "Counter range upper bound");
  cmd->add_option("--population", f.population,
                  "constant:<v> | uniform:<lo>:<hi> | "
                  "truncated_normal:<mean>:<std>[:<lo>:<hi>] | "
                  "age_in_days:<lo>:<hi> | trace:<path>");
  cmd->add_option("--trials", f.trials, "Independent trials");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--delta", f.delta, "Confidence parameter of the bounds");
  cmd->add_flag("--clip", f.clip, "Clip estimates to the valid range");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "Result CSV path (default stdout)");
  cmd->add_option("--json", f.json_out, "Also write a JSON mirror here");
  cmd->add_flag("--keep-trials", f.keep_trials,
                "Include per-trial errors in the JSON mirror");
}

std::string CommonConfig(const CommonFlags& f) {
  return absl::StrCat("--epsilon ", JoinNums(f.epsilons), " --gamma ",
                      JoinNums(f.gammas), " --n ", f.n, " --t ", f.rounds,
                      " --m ", f.m, " --population ", f.population,
                      " --trials ", f.trials, " --seed ", f.seed, " --delta ",
                      Num(f.delta), f.clip ? " --clip" : "");
}

absl::StatusOr<ExperimentPlan> BasePlan(const CommonFlags& f, int64_t s) {
  ExperimentPlan plan;
  auto population = ParsePopulationSpec(f.population, f.m);
  if (!population.ok()) return population.status();
  plan.population = *population;
  plan.population.n = f.n;
  plan.population.rounds = f.rounds;
  plan.mean_config = {.m = f.m, .s = s};
  plan.trials = f.trials;
  plan.seed = f.seed;
  plan.delta = f.delta;
  plan.clip_estimates = f.clip;
  plan.keep_trial_errors = f.keep_trials;
  plan.threads = f.threads;
  if (f.epsilons.empty()) {
    return absl::InvalidArgumentError("at least one --epsilon is required");
  }
  for (const double epsilon : f.epsilons) {
    for (const double gamma : f.gammas) {
      if (absl::Status s = PrivacyParams{.epsilon = epsilon, .gamma = gamma}
                               .Validate();
          !s.ok()) {
        return s;
      }
    }
  }
  if (absl::Status status = plan.Validate(); !status.ok()) return status;
  return plan;
}

absl::Status WriteResults(const CommonFlags& f, const std::string& config,
                          const std::vector<ExperimentResult>& results,
                          std::ostream& out) {
  std::ostringstream csv;
  WriteResultsCsv(results, config, csv);
  if (absl::Status s = Emit(f.out, csv.str(), out); !s.ok()) return s;
  if (!f.json_out.empty()) {
    std::ostringstream json;
    WriteResultsJson(results, config, json);
    return Emit(f.json_out, json.str(), out);
  }
  return absl::OkStatus();
}

absl::Status SimulateMean(const CommonFlags& f, const MeanFlags& mf,
                          std::ostream& out) {
  Mechanism mechanism;
  if (mf.mechanism == "1BitRRPM") {
    mechanism = Mechanism::kOneBitRRPM;
  } else if (mf.mechanism == "1BitMean") {
    mechanism = Mechanism::kOneBitMean;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "--mechanism must be 1BitRRPM or 1BitMean, got '", mf.mechanism, "'"));
  }
  if (!mf.baseline.empty() && mf.baseline != "laplace") {
    return absl::InvalidArgumentError(
        absl::StrCat("--baseline must be 'laplace', got '", mf.baseline, "'"));
  }
  auto plan = BasePlan(f, mf.s);
  if (!plan.ok()) return plan.status();
  plan->mechanism = mechanism;
  if (mechanism != Mechanism::kOneBitRRPM) {
    for (const double gamma : f.gammas) {
      if (gamma != 0) {
        return absl::InvalidArgumentError(
            "--gamma > 0 needs the memoized 1BitRRPM mechanism");
      }
    }
  }
  auto people = GeneratePopulation(plan->population, f.m,
                                   PopulationSeed(plan->seed));
  if (!people.ok()) return people.status();

  std::vector<ExperimentResult> results;
  for (const double epsilon : f.epsilons) {
    for (const double gamma : f.gammas) {
      plan->mechanism = mechanism;
      plan->privacy = {.epsilon = epsilon, .gamma = gamma};
      auto result = RunMeanExperiment(*plan, *people);
      if (!result.ok()) return result.status();
      results.push_back(*std::move(result));
    }
    if (mf.baseline == "laplace") {
      plan->mechanism = Mechanism::kLaplace;
      plan->privacy = {.epsilon = epsilon, .gamma = 0};
      auto result = RunMeanExperiment(*plan, *people);
      if (!result.ok()) return result.status();
      results.push_back(*std::move(result));
    }
  }
  const std::string config = absl::StrCat(
      "simulate-mean ", CommonConfig(f), " --s ", mf.s, " --mechanism ",
      mf.mechanism, mf.baseline.empty() ? "" : " --baseline ", mf.baseline);
  return WriteResults(f, config, results, out);
}

absl::Status SimulateHist(const CommonFlags& f, const HistFlags& hf,
                          std::ostream& out) {
  Mechanism mechanism;
  if (hf.mechanism == "dBitFlipPM") {
    mechanism = Mechanism::kDBitFlipPM;
  } else if (hf.mechanism == "dBitFlip") {
    mechanism = Mechanism::kDBitFlip;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "--mechanism must be dBitFlipPM or dBitFlip, got '", hf.mechanism,
        "'"));
  }
  if (hf.ds.empty()) return absl::InvalidArgumentError("--d needs a value");
  for (const int64_t d : hf.ds) {
    if (absl::Status s = HistConfig{.k = hf.k, .d = d}.Validate(); !s.ok()) {
      return s;
    }
  }
  auto plan = BasePlan(f, f.m);
  if (!plan.ok()) return plan.status();
  plan->mechanism = mechanism;
  auto people = GeneratePopulation(plan->population, f.m,
                                   PopulationSeed(plan->seed));
  if (!people.ok()) return people.status();

  std::vector<ExperimentResult> results;
  for (const double epsilon : f.epsilons) {
    for (const double gamma : f.gammas) {
      for (const int64_t d : hf.ds) {
        plan->privacy = {.epsilon = epsilon, .gamma = gamma};
        plan->hist_config = {.k = hf.k, .d = d};
        auto result = RunHistExperiment(*plan, *people);
        if (!result.ok()) return result.status();
        results.push_back(*std::move(result));
      }
    }
  }
  const std::string config = absl::StrCat(
      "simulate-hist ", CommonConfig(f), " --k ", hf.k, " --d ",
      absl::StrJoin(hf.ds, ","), " --mechanism ", hf.mechanism);
  return WriteResults(f, config, results, out);
}

absl::Status Patterns(const PatternFlags& pf, std::ostream& out) {
  if (absl::Status s = MeanConfig{.m = pf.m, .s = pf.s}.Validate(); !s.ok()) {
    return s;
  }
  const MeanConfig config{.m = pf.m, .s = pf.s};
  if (pf.trace.empty() == pf.population.empty()) {
    return absl::InvalidArgumentError(
        "exactly one of --trace or --population is required");
  }
  absl::StatusOr<Population> people;
  if (!pf.trace.empty()) {
    people = ReadTraceFile(pf.trace, pf.m);
  } else {
    auto spec = ParsePopulationSpec(pf.population, pf.m);
    if (!spec.ok()) return spec.status();
    spec->n = pf.n;
    spec->rounds = pf.rounds;
    people = GeneratePopulation(*spec, pf.m, PopulationSeed(pf.seed));
  }
  if (!people.ok()) return people.status();

  std::vector<std::vector<int64_t>> rounded(people->n());
  for (int64_t i = 0; i < people->n(); ++i) {
    // Each user's private rounding offset, as InitMeanState would draw it.
    Rng rng = Rng::ForStream(pf.seed, static_cast<uint64_t>(i) + 1);
    const auto alpha = static_cast<int64_t>(rng.UniformInt(config.s));
    for (const int64_t x : people->user(i)) {
      rounded[i].push_back(AlphaRound(x, alpha, config));
    }
  }
  auto distribution = ComputeSupportDistribution(rounded);
  if (!distribution.ok()) return distribution.status();

  const std::string source = pf.trace.empty()
                                 ? absl::StrCat("--population ", pf.population,
                                                " --n ", pf.n, " --t ",
                                                pf.rounds)
                                 : absl::StrCat("--trace ", pf.trace);
  std::ostringstream csv;
  WriteSupportCsv(*distribution,
                  absl::StrCat("patterns ", source, " --s ", pf.s, " --m ",
                               pf.m, " --seed ", pf.seed),
                  csv);
  return Emit(pf.out, csv.str(), out);
}

absl::Status Accounting(const AccountingFlags& af, std::ostream& out) {
  if (af.epsilons.empty()) {
    return absl::InvalidArgumentError("at least one --epsilon is required");
  }
  std::ostringstream table;
  table << "epsilon,gamma,epsilon_prime,multiapp_epsilon\n";
  for (const double epsilon : af.epsilons) {
    for (const double gamma : af.gammas) {
      auto budget = ComputeEffectiveBudget(epsilon, gamma);
      if (!budget.ok()) return budget.status();
      table << absl::StrFormat("%.4f,%.4f,%.4f,%.4f\n", epsilon, gamma,
                               budget->epsilon_prime,
                               budget->epsilon_multiapp);
    }
  }
  return Emit(af.out, table.str(), out);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Locally private repeated collection of counter data"};
  app.name("ldpcount");
  app.require_subcommand(1);

  CommonFlags mean_common;
  MeanFlags mean_flags;
  CLI::App* mean = app.add_subcommand(
      "simulate-mean", "Mean estimation experiment (1BitRRPM vs Laplace)");
  AddCommonFlags(mean, mean_common);
  mean->add_option("--s", mean_flags.s, "Rounding granularity (divides m)");
  mean->add_option("--mechanism", mean_flags.mechanism,
                   "1BitRRPM (default) or 1BitMean");
  mean->add_option("--baseline", mean_flags.baseline,
                   "Add baseline rows: laplace");

  CommonFlags hist_common;
  HistFlags hist_flags;
  CLI::App* hist = app.add_subcommand(
      "simulate-hist", "Histogram estimation experiment (dBitFlipPM)");
  AddCommonFlags(hist, hist_common);
  hist->add_option("--k", hist_flags.k, "Number of buckets");
  hist->add_option("--d", hist_flags.ds, "Bits per user (list)")
      ->delimiter(',');
  hist->add_option("--mechanism", hist_flags.mechanism,
                   "dBitFlipPM (default) or dBitFlip");

  PatternFlags pattern_flags;
  CLI::App* patterns = app.add_subcommand(
      "patterns", "Behavior-pattern support distribution");
  patterns->add_option("--trace", pattern_flags.trace, "Trace CSV path");
  patterns->add_option("--population", pattern_flags.population,
                       "Synthetic population instead of a trace");
  patterns->add_option("--n", pattern_flags.n, "Users (synthetic only)");
  patterns->add_option("--t", pattern_flags.rounds, "Rounds (synthetic only)");
  patterns->add_option("--s", pattern_flags.s, "Rounding granularity");
  patterns->add_option("--m", pattern_flags.m, "Counter range upper bound");
  patterns->add_option("--seed", pattern_flags.seed, "Seed for user offsets");
  patterns->add_option("--out", pattern_flags.out, "Output CSV path");

  AccountingFlags accounting_flags;
  CLI::App* accounting = app.add_subcommand(
      "accounting", "Effective and multi-counter privacy budgets");
  accounting->add_option("--epsilon", accounting_flags.epsilons, "Budgets")
      ->delimiter(',');
  accounting->add_option("--gamma", accounting_flags.gammas,
                         "Flip probabilities")
      ->delimiter(',');
  accounting->add_option("--out", accounting_flags.out, "Output path");

  std::vector<const char*> argv{"ldpcount"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  absl::Status status;
  if (mean->parsed()) {
    status = SimulateMean(mean_common, mean_flags, out);
  } else if (hist->parsed()) {
    status = SimulateHist(hist_common, hist_flags, out);
  } else if (patterns->parsed()) {
    status = Patterns(pattern_flags, out);
  } else if (accounting->parsed()) {
    status = Accounting(accounting_flags, out);
  }
  if (!status.ok()) return Fail(status, err);
  return kExitOk;
}

}  // namespace ldpcount::cli
