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


#include "ldpcount/mechanisms.h"

#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "ldpcount/status_macros.h"

namespace ldpcount {

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double gamma) {
  PrivacyParams params{.epsilon = epsilon, .gamma = gamma};
  LDP_RETURN_IF_ERROR(params.Validate());
  return params;
}

absl::Status PrivacyParams::Validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be a finite value > 0, got ", epsilon));
  }
  if (!(gamma >= 0 && gamma < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must satisfy 0 <= gamma < 0.5, got ", gamma));
  }
  return absl::OkStatus();
}

absl::StatusOr<MeanConfig> MeanConfig::Create(int64_t m, int64_t s) {
  MeanConfig config{.m = m, .s = s};
  LDP_RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::Status MeanConfig::Validate() const {
  if (m < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("m must be >= 1, got ", m));
  }
  if (s < 1 || s > m) {
    return absl::InvalidArgumentError(
        absl::StrCat("s must satisfy 1 <= s <= m, got s=", s, " m=", m));
  }
  if (m % s != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("s must divide m, got s=", s, " m=", m));
  }
  return absl::OkStatus();
}

absl::StatusOr<HistConfig> HistConfig::Create(int64_t k, int64_t d) {
  HistConfig config{.k = k, .d = d};
  LDP_RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::Status HistConfig::Validate() const {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must be >= 1, got ", k));
  }
  if (d < 1 || d > k) {
    return absl::InvalidArgumentError(
        absl::StrCat("d must satisfy 1 <= d <= k, got d=", d, " k=", k));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> OneBitMeanProb(int64_t x, const MeanConfig& config,
                                      const PrivacyParams& privacy) {
  if (x < 0 || x > config.m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "counter value must lie in [0, ", config.m, "], got ", x));
  }
  const double e = std::exp(privacy.epsilon);
  return 1.0 / (e + 1.0) + (static_cast<double>(x) /
                            static_cast<double>(config.m)) *
                               ((e - 1.0) / (e + 1.0));
}

absl::StatusOr<MeanResponse> OneBitMeanRespond(int64_t x,
                                               const MeanConfig& config,
                                               const PrivacyParams& privacy,
                                               Rng& rng) {
  LDP_ASSIGN_OR_RETURN(const double p, OneBitMeanProb(x, config, privacy));
  return MeanResponse{.bit = rng.Bernoulli(p)};
}

std::vector<int64_t> DBitFlipBuckets(UserId user_id, uint64_t public_seed,
                                     const HistConfig& config) {
  // Partial Fisher-Yates over [1, k]; the first d slots are the sample.
  Rng coins = Rng::ForStream(public_seed, user_id);
  std::vector<int64_t> pool(config.k);
  std::iota(pool.begin(), pool.end(), int64_t{1});
  for (int64_t i = 0; i < config.d; ++i) {
    const int64_t j =
        i + static_cast<int64_t>(
                coins.UniformInt(static_cast<uint64_t>(config.k - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(config.d);
  return pool;
}

double DBitFlipBitProb(bool bucket_matches, double epsilon) {
  const double half = std::exp(epsilon / 2.0);
  return bucket_matches ? half / (half + 1.0) : 1.0 / (half + 1.0);
}

absl::StatusOr<HistResponse> DBitFlipRespond(int64_t v,
                                             std::span<const int64_t> buckets,
                                             const HistConfig& config,
                                             const PrivacyParams& privacy,
                                             Rng& rng) {
  if (v < 1 || v > config.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bucket value must lie in [1, ", config.k, "], got ", v));
  }
  if (static_cast<int64_t>(buckets.size()) != config.d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", config.d, " sampled buckets, got ", buckets.size()));
  }
  const double p_match = DBitFlipBitProb(true, privacy.epsilon);
  const double p_other = DBitFlipBitProb(false, privacy.epsilon);
  HistResponse response;
  response.entries.reserve(buckets.size());
  for (const int64_t bucket : buckets) {
    const bool bit = rng.Bernoulli(bucket == v ? p_match : p_other);
    response.entries.push_back({.bucket = bucket, .bit = bit});
  }
  return response;
}

absl::StatusOr<double> LaplaceMeanRespond(int64_t x, const MeanConfig& config,
                                          const PrivacyParams& privacy,
                                          Rng& rng) {
  if (x < 0 || x > config.m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "counter value must lie in [0, ", config.m, "], got ", x));
  }
  const double scale = static_cast<double>(config.m) / privacy.epsilon;
  return static_cast<double>(x) + rng.Laplace(scale);
}

int64_t BucketOf(int64_t x, int64_t m, int64_t k) {
  const int64_t bucket =
      static_cast<int64_t>((static_cast<__int128>(x) * k) / m) + 1;
  return bucket > k ? k : bucket;
}

}  // namespace ldpcount
