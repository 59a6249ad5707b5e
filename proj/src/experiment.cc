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


#include "ldpcount/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "ldpcount/collector.h"
#include "ldpcount/memoization.h"
#include "ldpcount/perturbation.h"
#include "ldpcount/status_macros.h"

namespace ldpcount {

namespace {

// Substream ids under the plan seed and under each trial seed.
constexpr uint64_t kPopulationStream = 0x706f70;  // "pop"
constexpr uint64_t kTrialStreamBase = 1ULL << 32;
constexpr uint64_t kPublicCoinStream = 0;
constexpr uint64_t kUserStreamBase = 1;

struct TrialOutcome {
  double error = 0;
  int64_t within_bound = 0;
  absl::Status status;
};

uint64_t TrialSeed(uint64_t plan_seed, int64_t trial) {
  return DeriveSeed(plan_seed, kTrialStreamBase + static_cast<uint64_t>(trial));
}

// Runs `trial_fn(trial)` for every trial, spreading trials over threads.
// Outcomes are stored by trial index so the result is order independent.
template <typename TrialFn>
std::vector<TrialOutcome> RunTrials(int64_t trials, int threads,
                                    const TrialFn& trial_fn) {
  std::vector<TrialOutcome> outcomes(trials);
  int workers = threads > 0 ? threads
                            : static_cast<int>(
                                  std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<int64_t>(workers, trials));
  if (workers <= 1) {
    for (int64_t t = 0; t < trials; ++t) outcomes[t] = trial_fn(t);
    return outcomes;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int64_t t = next++; t < trials; t = next++) {
        outcomes[t] = trial_fn(t);
      }
    });
  }
  pool.clear();  // joins
  return outcomes;
}

absl::StatusOr<ExperimentResult> Summarize(
    const ExperimentPlan& plan, std::vector<TrialOutcome> outcomes,
    int64_t rounds) {
  ExperimentResult result;
  double sum = 0;
  int64_t within = 0;
  std::vector<double> errors;
  errors.reserve(outcomes.size());
  for (const TrialOutcome& outcome : outcomes) {
    LDP_RETURN_IF_ERROR(outcome.status);
    errors.push_back(outcome.error);
    sum += outcome.error;
    within += outcome.within_bound;
  }
  const double trials = static_cast<double>(errors.size());
  result.mean_error = sum / trials;
  double squares = 0;
  for (const double e : errors) {
    squares += (e - result.mean_error) * (e - result.mean_error);
  }
  result.std_error = errors.size() > 1 ? std::sqrt(squares / (trials - 1)) : 0;
  result.within_bound_fraction =
      static_cast<double>(within) / (trials * static_cast<double>(rounds));
  result.mechanism = std::string(MechanismName(plan.mechanism));
  result.epsilon = plan.privacy.epsilon;
  result.gamma = plan.privacy.gamma;
  result.trials = plan.trials;
  result.rounds = rounds;
  if (plan.keep_trial_errors) result.trial_errors = std::move(errors);
  return result;
}

}  // namespace

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kOneBitRRPM:
      return "1BitRRPM";
    case Mechanism::kOneBitMean:
      return "1BitMean";
    case Mechanism::kLaplace:
      return "Laplace";
    case Mechanism::kDBitFlipPM:
      return "dBitFlipPM";
    case Mechanism::kDBitFlip:
      return "dBitFlip";
  }
  return "unknown";
}

bool IsHistogramMechanism(Mechanism mechanism) {
  return mechanism == Mechanism::kDBitFlipPM ||
         mechanism == Mechanism::kDBitFlip;
}

absl::Status ExperimentPlan::Validate() const {
  LDP_RETURN_IF_ERROR(population.Validate());
  LDP_RETURN_IF_ERROR(mean_config.Validate());
  LDP_RETURN_IF_ERROR(privacy.Validate());
  if (IsHistogramMechanism(mechanism)) {
    LDP_RETURN_IF_ERROR(hist_config.Validate());
  }
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be >= 1, got ", trials));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (privacy.gamma > 0 && (mechanism == Mechanism::kLaplace ||
                            mechanism == Mechanism::kOneBitMean ||
                            mechanism == Mechanism::kDBitFlip)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "output perturbation (gamma > 0) only applies to memoized "
        "mechanisms, not ", std::string(MechanismName(mechanism))));
  }
  return absl::OkStatus();
}

uint64_t PopulationSeed(uint64_t plan_seed) {
  return DeriveSeed(plan_seed, kPopulationStream);
}

MeanClientSimulator::MeanClientSimulator(const MeanConfig& config,
                                         const PrivacyParams& privacy)
    : config_(config), gamma_(privacy.gamma) {
  grid_prob_.reserve(config.GridSize());
  for (int64_t l = 0; l < config.GridSize(); ++l) {
    grid_prob_.push_back(*OneBitMeanProb(l * config.s, config, privacy));
  }
}

void MeanClientSimulator::Run(std::span<const int64_t> xs, Rng& rng,
                              std::span<uint8_t> out) const {
  const auto alpha = static_cast<int64_t>(rng.UniformInt(config_.s));
  const uint64_t memo_seed = rng();
  // Rows depend only on (memo_seed, l); remember the last one to skip
  // recomputing it while the rounded value stays put.
  int64_t last_row = -1;
  bool last_bit = false;
  for (size_t t = 0; t < xs.size(); ++t) {
    const int64_t row = AlphaRound(xs[t], alpha, config_) / config_.s;
    if (row != last_row) {
      last_bit = MemoRowRng(memo_seed, row).Bernoulli(grid_prob_[row]);
      last_row = row;
    }
    bool bit = last_bit;
    if (gamma_ > 0 && rng.Bernoulli(gamma_)) bit = !bit;
    out[t] = bit ? 1 : 0;
  }
}

absl::Status SimulateHistClient(std::span<const int64_t> buckets_by_round,
                                UserId user_id, uint64_t public_seed,
                                const HistConfig& config,
                                const PrivacyParams& privacy, Rng& rng,
                                std::vector<HistResponse>& out) {
  const std::vector<int64_t> buckets =
      DBitFlipBuckets(user_id, public_seed, config);
  const uint64_t memo_seed = rng();
  out.clear();
  for (const int64_t v : buckets_by_round) {
    Rng row = MemoRowRng(memo_seed, v);
    LDP_ASSIGN_OR_RETURN(HistResponse response,
                         DBitFlipRespond(v, buckets, config, privacy, row));
    if (privacy.gamma > 0) {
      for (HistEntry& entry : response.entries) {
        if (rng.Bernoulli(privacy.gamma)) entry.bit = !entry.bit;
      }
    }
    out.push_back(std::move(response));
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentResult> RunMeanExperiment(const ExperimentPlan& plan) {
  LDP_RETURN_IF_ERROR(plan.Validate());
  LDP_ASSIGN_OR_RETURN(const Population people,
                       GeneratePopulation(plan.population, plan.mean_config.m,
                                          PopulationSeed(plan.seed)));
  return RunMeanExperiment(plan, people);
}

absl::StatusOr<ExperimentResult> RunMeanExperiment(const ExperimentPlan& plan,
                                                   const Population& people) {
  if (IsHistogramMechanism(plan.mechanism)) {
    return absl::InvalidArgumentError(absl::StrCat(
        std::string(MechanismName(plan.mechanism)), " is not a mean mechanism"));
  }
  {
    ExperimentPlan check = plan;
    check.population.n = people.n();
    check.population.rounds = people.rounds();
    LDP_RETURN_IF_ERROR(check.Validate());
  }
  const MeanConfig& config = plan.mean_config;
  const int64_t n = people.n();
  const int64_t rounds = people.rounds();
  for (int64_t i = 0; i < n; ++i) {
    for (const int64_t x : people.user(i)) {
      if (x < 0 || x > config.m) {
        return absl::InvalidArgumentError(absl::StrCat(
            "population value ", x, " outside [0, ", config.m, "]"));
      }
    }
  }

  std::vector<double> truth(rounds, 0.0);
  for (int64_t t = 0; t < rounds; ++t) {
    int64_t sum = 0;
    for (int64_t i = 0; i < n; ++i) sum += people.at(i, t);
    truth[t] = static_cast<double>(sum) / static_cast<double>(n);
  }

  // Perturbed memoized bits follow the one-bit law at the effective budget.
  double estimator_epsilon = plan.privacy.epsilon;
  if (plan.mechanism == Mechanism::kOneBitRRPM) {
    LDP_ASSIGN_OR_RETURN(estimator_epsilon,
                         EffectiveEpsilon(plan.privacy.epsilon,
                                          plan.privacy.gamma));
  }
  const double bound =
      MeanErrorBound(n, config.m, estimator_epsilon, plan.delta);
  const MeanClientSimulator simulator(config, plan.privacy);

  auto trial_fn = [&](int64_t trial) -> TrialOutcome {
    const uint64_t trial_seed = TrialSeed(plan.seed, trial);
    std::vector<MeanAggregate> aggregates(rounds);
    std::vector<double> laplace_sums(rounds, 0.0);
    std::vector<uint8_t> bits(rounds);
    for (int64_t i = 0; i < n; ++i) {
      Rng rng = Rng::ForStream(trial_seed, kUserStreamBase + i);
      const std::span<const int64_t> xs = people.user(i);
      switch (plan.mechanism) {
        case Mechanism::kOneBitRRPM:
          simulator.Run(xs, rng, bits);
          for (int64_t t = 0; t < rounds; ++t) {
            aggregates[t].Add({.bit = bits[t] != 0});
          }
          break;
        case Mechanism::kOneBitMean:
          for (int64_t t = 0; t < rounds; ++t) {
            aggregates[t].Add(*OneBitMeanRespond(xs[t], config, plan.privacy,
                                                 rng));
          }
          break;
        case Mechanism::kLaplace:
          for (int64_t t = 0; t < rounds; ++t) {
            laplace_sums[t] +=
                *LaplaceMeanRespond(xs[t], config, plan.privacy, rng);
          }
          break;
        default:
          break;
      }
    }
    TrialOutcome outcome;
    double error_sum = 0;
    for (int64_t t = 0; t < rounds; ++t) {
      double estimate;
      if (plan.mechanism == Mechanism::kLaplace) {
        estimate = laplace_sums[t] / static_cast<double>(n);
      } else {
        auto est = MeanEstimate(aggregates[t], config.m, estimator_epsilon,
                                plan.delta);
        if (!est.ok()) {
          outcome.status = est.status();
          return outcome;
        }
        estimate = est->point;
      }
      if (plan.clip_estimates) {
        estimate = std::clamp(estimate, 0.0, static_cast<double>(config.m));
      }
      const double error = std::fabs(estimate - truth[t]);
      error_sum += error;
      if (error <= bound) ++outcome.within_bound;
    }
    outcome.error = error_sum / static_cast<double>(rounds);
    return outcome;
  };

  LDP_ASSIGN_OR_RETURN(
      ExperimentResult result,
      Summarize(plan, RunTrials(plan.trials, plan.threads, trial_fn), rounds));
  result.n = n;
  result.d_or_s = config.s;
  result.estimator_epsilon = estimator_epsilon;
  result.bound = bound;
  return result;
}

absl::StatusOr<ExperimentResult> RunHistExperiment(const ExperimentPlan& plan) {
  LDP_RETURN_IF_ERROR(plan.Validate());
  LDP_ASSIGN_OR_RETURN(const Population people,
                       GeneratePopulation(plan.population, plan.mean_config.m,
                                          PopulationSeed(plan.seed)));
  return RunHistExperiment(plan, people);
}

absl::StatusOr<ExperimentResult> RunHistExperiment(const ExperimentPlan& plan,
                                                   const Population& people) {
  if (!IsHistogramMechanism(plan.mechanism)) {
    return absl::InvalidArgumentError(absl::StrCat(
        std::string(MechanismName(plan.mechanism)), " is not a histogram mechanism"));
  }
  {
    ExperimentPlan check = plan;
    check.population.n = people.n();
    check.population.rounds = people.rounds();
    LDP_RETURN_IF_ERROR(check.Validate());
  }
  const HistConfig& config = plan.hist_config;
  const int64_t m = plan.mean_config.m;
  const int64_t n = people.n();
  const int64_t rounds = people.rounds();

  // Bucket of every (user, round), and the true per-round histogram.
  Population buckets(n, rounds);
  std::vector<std::vector<double>> truth(rounds,
                                         std::vector<double>(config.k, 0.0));
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t t = 0; t < rounds; ++t) {
      const int64_t x = people.at(i, t);
      if (x < 0 || x > m) {
        return absl::InvalidArgumentError(absl::StrCat(
            "population value ", x, " outside [0, ", m, "]"));
      }
      const int64_t v = BucketOf(x, m, config.k);
      buckets.mutable_user(i)[t] = v;
      truth[t][v - 1] += 1.0;
    }
  }
  for (auto& row : truth) {
    for (double& h : row) h /= static_cast<double>(n);
  }

  double estimator_epsilon = plan.privacy.epsilon;
  if (plan.mechanism == Mechanism::kDBitFlipPM && plan.privacy.gamma > 0) {
    LDP_ASSIGN_OR_RETURN(estimator_epsilon,
                         HistEffectiveEpsilon(plan.privacy.epsilon,
                                              plan.privacy.gamma));
  }
  const double bound = HistErrorBound(n, config, estimator_epsilon, plan.delta);

  auto trial_fn = [&](int64_t trial) -> TrialOutcome {
    const uint64_t trial_seed = TrialSeed(plan.seed, trial);
    const uint64_t public_seed = DeriveSeed(trial_seed, kPublicCoinStream);
    std::vector<HistAggregate> aggregates(rounds, HistAggregate(config));
    std::vector<HistResponse> responses;
    TrialOutcome outcome;
    for (int64_t i = 0; i < n; ++i) {
      Rng rng = Rng::ForStream(trial_seed, kUserStreamBase + i);
      const std::span<const int64_t> vs = buckets.user(i);
      const auto user_id = static_cast<UserId>(i);
      if (plan.mechanism == Mechanism::kDBitFlipPM) {
        outcome.status = SimulateHistClient(vs, user_id, public_seed, config,
                                            plan.privacy, rng, responses);
      } else {
        const std::vector<int64_t> sampled =
            DBitFlipBuckets(user_id, public_seed, config);
        responses.clear();
        for (const int64_t v : vs) {
          auto response = DBitFlipRespond(v, sampled, config, plan.privacy, rng);
          if (!response.ok()) {
            outcome.status = response.status();
            break;
          }
          responses.push_back(*std::move(response));
        }
      }
      if (!outcome.status.ok()) return outcome;
      for (int64_t t = 0; t < rounds; ++t) {
        outcome.status = aggregates[t].Add(responses[t]);
        if (!outcome.status.ok()) return outcome;
      }
    }
    double error_sum = 0;
    for (int64_t t = 0; t < rounds; ++t) {
      auto estimates =
          HistEstimate(aggregates[t], estimator_epsilon, plan.delta);
      if (!estimates.ok()) {
        outcome.status = estimates.status();
        return outcome;
      }
      double worst = 0;
      for (int64_t v = 0; v < config.k; ++v) {
        double point = (*estimates)[v].point;
        if (plan.clip_estimates) point = std::clamp(point, 0.0, 1.0);
        worst = std::max(worst, std::fabs(point - truth[t][v]));
      }
      error_sum += worst;
      if (worst <= bound) ++outcome.within_bound;
    }
    outcome.error = error_sum / static_cast<double>(rounds);
    return outcome;
  };

  LDP_ASSIGN_OR_RETURN(
      ExperimentResult result,
      Summarize(plan, RunTrials(plan.trials, plan.threads, trial_fn), rounds));
  result.n = n;
  result.d_or_s = config.d;
  result.estimator_epsilon = estimator_epsilon;
  result.bound = bound;
  return result;
}

void WriteResultsCsv(std::span<const ExperimentResult> results,
                     std::string_view config_line, std::ostream& out) {
  out << "# config: " << config_line << "\n";
  out << "mechanism,epsilon,gamma,n,d_or_s,trials,mean_error,std_error\n";
  for (const ExperimentResult& r : results) {
    out << absl::StrFormat("%s,%.6g,%.6g,%d,%d,%d,%.10g,%.10g\n", r.mechanism,
                           r.epsilon, r.gamma, r.n, r.d_or_s, r.trials,
                           r.mean_error, r.std_error);
  }
}

void WriteResultsJson(std::span<const ExperimentResult> results,
                      std::string_view config_line, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["config"] = std::string(config_line);
  doc["results"] = nlohmann::ordered_json::array();
  for (const ExperimentResult& r : results) {
    nlohmann::ordered_json row;
    row["mechanism"] = r.mechanism;
    row["epsilon"] = r.epsilon;
    row["gamma"] = r.gamma;
    row["estimator_epsilon"] = r.estimator_epsilon;
    row["n"] = r.n;
    row["rounds"] = r.rounds;
    row["d_or_s"] = r.d_or_s;
    row["trials"] = r.trials;
    row["mean_error"] = r.mean_error;
    row["std_error"] = r.std_error;
    row["bound"] = r.bound;
    row["within_bound_fraction"] = r.within_bound_fraction;
    if (!r.trial_errors.empty()) row["trial_errors"] = r.trial_errors;
    doc["results"].push_back(std::move(row));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace ldpcount
