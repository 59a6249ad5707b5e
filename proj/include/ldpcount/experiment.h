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


// Repeated-collection experiments: a population answers T rounds through
// the full client stack, the collector estimates every round, and errors
// are averaged over rounds and then summarized over independent trials.
//
// Every random draw descends from ExperimentPlan::seed, and trials run on
// disjoint substreams, so a plan always reproduces the same result
// regardless of thread count.

#ifndef LDPCOUNT_EXPERIMENT_H_
#define LDPCOUNT_EXPERIMENT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpcount/mechanisms.h"
#include "ldpcount/population.h"
#include "ldpcount/random.h"

namespace ldpcount {

enum class Mechanism {
  kOneBitRRPM,  // alpha-point rounding + memoization (+ perturbation)
  kOneBitMean,  // fresh one-bit report every round, no memoization
  kLaplace,     // additive Laplace(m / eps) baseline
  kDBitFlipPM,  // memoized dBitFlip (+ optional per-bit perturbation)
  kDBitFlip,    // fresh dBitFlip every round
};

std::string_view MechanismName(Mechanism mechanism);
bool IsHistogramMechanism(Mechanism mechanism);

struct ExperimentPlan {
  PopulationSpec population;
  Mechanism mechanism = Mechanism::kOneBitRRPM;
  // m and s. For histogram runs only m is used (to map values to buckets).
  MeanConfig mean_config;
  HistConfig hist_config;
  PrivacyParams privacy;
  int64_t trials = 200;
  uint64_t seed = 0;
  double delta = 0.05;
  bool keep_trial_errors = false;
  // Clip estimates to [0, m] (mean) or [0, 1] (histogram) before measuring
  // error. Off by default since clipping biases the estimators.
  bool clip_estimates = false;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  absl::Status Validate() const;
};

struct ExperimentResult {
  std::string mechanism;
  double epsilon = 0;
  double gamma = 0;
  // Budget the estimator was evaluated at (differs from epsilon when
  // perturbation is on).
  double estimator_epsilon = 0;
  int64_t n = 0;
  int64_t rounds = 0;
  // s for mean runs, d for histogram runs.
  int64_t d_or_s = 0;
  int64_t trials = 0;
  // Mean task: |estimate - true mean| averaged over rounds.
  // Histogram task: max-bucket error averaged over rounds.
  double mean_error = 0;
  double std_error = 0;
  // Error bound at plan.delta for one round, and the fraction of all
  // (trial, round) estimates that fell within it.
  double bound = 0;
  double within_bound_fraction = 0;
  std::vector<double> trial_errors;
};

absl::StatusOr<ExperimentResult> RunMeanExperiment(const ExperimentPlan& plan);
absl::StatusOr<ExperimentResult> RunHistExperiment(const ExperimentPlan& plan);
// Variants that reuse an already generated population (plan.population is
// then ignored).
absl::StatusOr<ExperimentResult> RunMeanExperiment(const ExperimentPlan& plan,
                                                   const Population& people);
absl::StatusOr<ExperimentResult> RunHistExperiment(const ExperimentPlan& plan,
                                                   const Population& people);

// Population generation seed used by Run*Experiment for plan.seed.
uint64_t PopulationSeed(uint64_t plan_seed);

// One simulated mean client under OneBitRRPM. Consumes rng exactly like
// InitMeanState followed by one PerturbBit per round (PerturbBit is skipped
// when gamma = 0), so the bits equal those of the eager client stack.
class MeanClientSimulator {
 public:
  MeanClientSimulator(const MeanConfig& config, const PrivacyParams& privacy);

  // Writes one response bit per element of xs into out.
  void Run(std::span<const int64_t> xs, Rng& rng,
           std::span<uint8_t> out) const;

 private:
  MeanConfig config_;
  double gamma_;
  std::vector<double> grid_prob_;
};

// One simulated histogram client under dBitFlipPM; matches InitHistState
// followed by HistRespondMemoized per round, plus per-bit flips drawn from
// rng when gamma > 0. `out` receives one response per round.
absl::Status SimulateHistClient(std::span<const int64_t> buckets_by_round,
                                UserId user_id, uint64_t public_seed,
                                const HistConfig& config,
                                const PrivacyParams& privacy, Rng& rng,
                                std::vector<HistResponse>& out);

// Columns mechanism,epsilon,gamma,n,d_or_s,trials,mean_error,std_error,
// preceded by "# config: <config_line>".
void WriteResultsCsv(std::span<const ExperimentResult> results,
                     std::string_view config_line, std::ostream& out);
// JSON mirror; per-trial arrays are included when present.
void WriteResultsJson(std::span<const ExperimentResult> results,
                      std::string_view config_line, std::ostream& out);

}  // namespace ldpcount

#endif  // LDPCOUNT_EXPERIMENT_H_
