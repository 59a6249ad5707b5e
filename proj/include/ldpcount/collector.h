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


// Collector-side aggregation and estimation.
//
// Aggregates are commutative monoids under Merge, so responses can be
// folded in shards and combined afterwards. Estimates are never clipped to
// the valid range: clipping would bias them.

#ifndef LDPCOUNT_COLLECTOR_H_
#define LDPCOUNT_COLLECTOR_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpcount/mechanisms.h"

namespace ldpcount {

inline constexpr double kDefaultDelta = 0.05;

struct MeanAggregate {
  int64_t n = 0;
  int64_t sum_bits = 0;

  void Add(MeanResponse response) {
    ++n;
    sum_bits += response.bit ? 1 : 0;
  }

  friend bool operator==(const MeanAggregate&, const MeanAggregate&) = default;
};

class HistAggregate {
 public:
  explicit HistAggregate(const HistConfig& config)
      : config_(config), received_(config.k, 0), ones_(config.k, 0) {}

  // Records one client's response. The response must carry d entries with
  // distinct in-range buckets.
  absl::Status Add(const HistResponse& response);

  const HistConfig& config() const { return config_; }
  int64_t n() const { return n_; }
  // Per-bucket counts, indexed by bucket - 1.
  const std::vector<int64_t>& received() const { return received_; }
  const std::vector<int64_t>& ones() const { return ones_; }

  friend bool operator==(const HistAggregate& a, const HistAggregate& b) {
    return a.config_ == b.config_ && a.n_ == b.n_ &&
           a.received_ == b.received_ && a.ones_ == b.ones_;
  }

 private:
  friend absl::StatusOr<HistAggregate> Merge(const HistAggregate&,
                                             const HistAggregate&);
  friend absl::StatusOr<HistAggregate> LoadHistAggregate(std::string_view);

  HistConfig config_;
  int64_t n_ = 0;
  std::vector<int64_t> received_;
  std::vector<int64_t> ones_;
  // Per-bucket stamp of the last Add that touched it; detects duplicate
  // buckets within one response without a per-call allocation.
  std::vector<int64_t> last_seen_;
  int64_t add_calls_ = 0;
};

struct Estimate {
  double point = 0;
  // Confidence parameter: |point - truth| <= bound with probability
  // at least 1 - delta.
  double delta = kDefaultDelta;
  double bound = 0;
};

MeanAggregate Merge(const MeanAggregate& a, const MeanAggregate& b);
// InvalidArgument when the configurations differ.
absl::StatusOr<HistAggregate> Merge(const HistAggregate& a,
                                    const HistAggregate& b);

// m / sqrt(2n) * (e^eps + 1)/(e^eps - 1) * sqrt(ln(2/delta)).
double MeanErrorBound(int64_t n, int64_t m, double epsilon, double delta);

// sqrt(5k/(nd)) * (e^(eps/2) + 1)/(e^(eps/2) - 1) * sqrt(ln(6k/delta)),
// a bound on the maximum error over all buckets.
double HistErrorBound(int64_t n, const HistConfig& config, double epsilon,
                      double delta);

// point = (m/n) * (sum_bits (e^eps + 1) - n) / (e^eps - 1). When responses
// were perturbed, `epsilon` must be the effective budget.
absl::StatusOr<Estimate> MeanEstimate(const MeanAggregate& aggregate,
                                      int64_t m, double epsilon,
                                      double delta = kDefaultDelta);

// Per-bucket frequency estimates, normalized by the expected k/(nd) rather
// than by the observed per-bucket counts. Entry v - 1 is bucket v.
absl::StatusOr<std::vector<Estimate>> HistEstimate(
    const HistAggregate& aggregate, double epsilon,
    double delta = kDefaultDelta);

// Versioned little-endian encodings, same conventions as client state:
//   u8 version, u8 kind (2 mean, 3 histogram), then
//   mean:      u64 n, u64 sum_bits
//   histogram: u64 k, u64 d, u64 n, k x (u64 received, u64 ones)
std::string SaveAggregate(const MeanAggregate& aggregate);
std::string SaveAggregate(const HistAggregate& aggregate);
absl::StatusOr<MeanAggregate> LoadMeanAggregate(std::string_view bytes);
absl::StatusOr<HistAggregate> LoadHistAggregate(std::string_view bytes);

}  // namespace ldpcount

#endif  // LDPCOUNT_COLLECTOR_H_
