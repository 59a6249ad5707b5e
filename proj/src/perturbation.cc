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


#include "ldpcount/perturbation.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "ldpcount/status_macros.h"

namespace ldpcount {

namespace {

absl::Status CheckGamma(double gamma) {
  if (!(gamma >= 0 && gamma < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must satisfy 0 <= gamma < 0.5, got ", gamma));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<bool> PerturbBit(bool bit, double gamma, Rng& rng) {
  LDP_RETURN_IF_ERROR(CheckGamma(gamma));
  return rng.Bernoulli(gamma) ? !bit : bit;
}

double PerturbedOneProb(double p_one, double gamma) {
  return (1.0 - 2.0 * gamma) * p_one + gamma;
}

absl::StatusOr<double> EffectiveEpsilon(double epsilon, double gamma) {
  const PrivacyParams params{.epsilon = epsilon, .gamma = gamma};
  LDP_RETURN_IF_ERROR(params.Validate());
  if (gamma == 0) return epsilon;
  const double e = std::exp(epsilon);
  const double high = PerturbedOneProb(e / (e + 1.0), gamma);
  const double low = PerturbedOneProb(1.0 / (e + 1.0), gamma);
  return std::log(high / low);
}

absl::StatusOr<double> HistEffectiveEpsilon(double epsilon, double gamma) {
  LDP_ASSIGN_OR_RETURN(const double half, EffectiveEpsilon(epsilon / 2, gamma));
  return 2.0 * half;
}

absl::StatusOr<double> MultiappEpsilon(double tau) {
  if (!(tau > 0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must be a finite value > 0, got ", tau));
  }
  return tau + std::expm1(tau);
}

absl::StatusOr<EffectiveBudget> ComputeEffectiveBudget(double epsilon,
                                                       double gamma) {
  EffectiveBudget budget;
  LDP_ASSIGN_OR_RETURN(budget.epsilon_prime, EffectiveEpsilon(epsilon, gamma));
  LDP_ASSIGN_OR_RETURN(budget.epsilon_multiapp,
                       MultiappEpsilon(budget.epsilon_prime));
  return budget;
}

absl::StatusOr<double> HammingRatioBound(int64_t delta, double gamma) {
  if (delta < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be >= 0, got ", delta));
  }
  LDP_RETURN_IF_ERROR(CheckGamma(gamma));
  if (delta == 0) return 1.0;
  if (gamma == 0) {
    return absl::InvalidArgumentError(
        "ratio bound is undefined for gamma = 0 when delta > 0: without "
        "perturbation differing memoized streams are distinguishable");
  }
  return std::pow(gamma, static_cast<double>(delta));
}

}  // namespace ldpcount
