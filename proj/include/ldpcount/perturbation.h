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


// Output perturbation over memoized responses, plus the privacy accounting
// that goes with it.

#ifndef LDPCOUNT_PERTURBATION_H_
#define LDPCOUNT_PERTURBATION_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "ldpcount/mechanisms.h"
#include "ldpcount/random.h"

namespace ldpcount {

struct EffectiveBudget {
  // Per-round budget of one-bit mean collection under flip probability gamma.
  double epsilon_prime = 0;
  // Budget when several counters whose sum is bounded by m are collected
  // together at per-counter budget epsilon_prime.
  double epsilon_multiapp = 0;
};

// Keeps b with probability 1 - gamma and flips it otherwise. Uses fresh
// randomness on every call; the memoized table is never touched.
absl::StatusOr<bool> PerturbBit(bool bit, double gamma, Rng& rng);

// Pr[perturbed bit = 1] when the unperturbed bit is 1 with probability p_one.
double PerturbedOneProb(double p_one, double gamma);

// ln(((1-2g) e^eps/(e^eps+1) + g) / ((1-2g)/(e^eps+1) + g)). Equal to eps
// at gamma = 0 and tends to 0 as gamma approaches 0.5.
absl::StatusOr<double> EffectiveEpsilon(double epsilon, double gamma);

// Budget at which the histogram estimator must be evaluated when each of
// the d memoized bits is flipped with probability gamma: the per-bit
// exponent eps/2 is replaced by EffectiveEpsilon(eps/2, gamma).
absl::StatusOr<double> HistEffectiveEpsilon(double epsilon, double gamma);

// tau + e^tau - 1.
absl::StatusOr<double> MultiappEpsilon(double tau);

absl::StatusOr<EffectiveBudget> ComputeEffectiveBudget(double epsilon,
                                                       double gamma);

// gamma^delta: lower bound on Pr[A'(x) = S] / Pr[A'(x') = S] when the
// memoized streams of x and x' differ in at most delta positions.
absl::StatusOr<double> HammingRatioBound(int64_t delta, double gamma);

}  // namespace ldpcount

#endif  // LDPCOUNT_PERTURBATION_H_
