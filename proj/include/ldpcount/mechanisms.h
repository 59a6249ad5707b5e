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


// Single-round locally differentially private randomizers for counters.
//
// A counter takes integer values in [0, m]. For mean estimation each client
// reports one biased bit whose probability of being 1 is affine in x/m. For
// histogram estimation the domain is split into k buckets, and each client
// reports noisy membership bits for d buckets that are sampled from public
// coins, so the collector can recompute which buckets a client reports on.

#ifndef LDPCOUNT_MECHANISMS_H_
#define LDPCOUNT_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpcount/random.h"

namespace ldpcount {

using UserId = uint64_t;

struct PrivacyParams {
  // Budget of one mechanism invocation. Must be positive.
  double epsilon = 1.0;
  // Output-perturbation flip probability in [0, 0.5). Zero disables it.
  double gamma = 0.0;

  static absl::StatusOr<PrivacyParams> Create(double epsilon,
                                              double gamma = 0.0);
  absl::Status Validate() const;

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

// Counter range [0, m] and rounding granularity s, with s dividing m.
struct MeanConfig {
  int64_t m = 0;
  int64_t s = 0;

  static absl::StatusOr<MeanConfig> Create(int64_t m, int64_t s);
  absl::Status Validate() const;

  // Number of points in the rounding grid {0, s, 2s, ..., m}.
  int64_t GridSize() const { return m / s + 1; }

  friend bool operator==(const MeanConfig&, const MeanConfig&) = default;
};

// k buckets, d reported bits per client, 1 <= d <= k.
struct HistConfig {
  int64_t k = 0;
  int64_t d = 0;

  static absl::StatusOr<HistConfig> Create(int64_t k, int64_t d);
  absl::Status Validate() const;

  friend bool operator==(const HistConfig&, const HistConfig&) = default;
};

struct MeanResponse {
  bool bit = false;

  friend bool operator==(const MeanResponse&, const MeanResponse&) = default;
};

struct HistEntry {
  int64_t bucket = 0;  // 1-based
  bool bit = false;

  friend bool operator==(const HistEntry&, const HistEntry&) = default;
};

// The d (bucket, bit) pairs one client sends. On the wire the bucket indices
// can be dropped because the collector re-derives them from public coins.
struct HistResponse {
  std::vector<HistEntry> entries;

  friend bool operator==(const HistResponse&, const HistResponse&) = default;
};

// Pr[bit = 1] = 1/(e^eps + 1) + (x/m) * (e^eps - 1)/(e^eps + 1).
// Fails with InvalidArgument if x is outside [0, m].
absl::StatusOr<double> OneBitMeanProb(int64_t x, const MeanConfig& config,
                                      const PrivacyParams& privacy);

// Draws the one-bit mean report for x. privacy.gamma is ignored here;
// perturbation is applied by a separate layer.
absl::StatusOr<MeanResponse> OneBitMeanRespond(int64_t x,
                                               const MeanConfig& config,
                                               const PrivacyParams& privacy,
                                               Rng& rng);

// d distinct 1-based bucket indices, uniform over d-subsets, derived only
// from (user_id, public_seed) so client and collector agree.
std::vector<int64_t> DBitFlipBuckets(UserId user_id, uint64_t public_seed,
                                     const HistConfig& config);

// Probability that a reported bit is 1: e^(eps/2)/(e^(eps/2)+1) when the
// bucket holds the client's value, 1/(e^(eps/2)+1) otherwise.
double DBitFlipBitProb(bool bucket_matches, double epsilon);

// One round of dBitFlip for bucket value v over the given bucket list.
// Bits are drawn independently, in list order.
absl::StatusOr<HistResponse> DBitFlipRespond(int64_t v,
                                             std::span<const int64_t> buckets,
                                             const HistConfig& config,
                                             const PrivacyParams& privacy,
                                             Rng& rng);

// Laplace baseline: x + Laplace(m/eps), unclamped.
absl::StatusOr<double> LaplaceMeanRespond(int64_t x, const MeanConfig& config,
                                          const PrivacyParams& privacy,
                                          Rng& rng);

// Maps a counter value in [0, m] to one of k equal-width 1-based buckets.
// The top value m falls in bucket k.
int64_t BucketOf(int64_t x, int64_t m, int64_t k);

}  // namespace ldpcount

#endif  // LDPCOUNT_MECHANISMS_H_
