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


// Simulated user populations: synthetic generators and trace replay.

#ifndef LDPCOUNT_POPULATION_H_
#define LDPCOUNT_POPULATION_H_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpcount/random.h"

namespace ldpcount {

struct PopulationSpec {
  enum class Kind {
    kConstant,         // every x_i(t) = value
    kUniform,          // x_i ~ U(lo, hi), drawn once per user
    kTruncatedNormal,  // x_i ~ N(mean, stddev^2) conditioned on [lo, hi]
    kTrace,            // read from trace_path
    kAgeInDays,        // x_i(t) = min(start_i + t, m), start_i ~ U{lo..hi}
  };

  Kind kind = Kind::kConstant;
  double value = 0;
  double lo = 0;
  double hi = 0;
  double mean = 0;
  double stddev = 0;
  std::string trace_path;
  // Ignored for traces, which carry their own shape.
  int64_t n = 1;
  int64_t rounds = 1;

  absl::Status Validate() const;
};

// Parses the textual form used on the command line:
//   constant:<v>
//   uniform:<lo>:<hi>
//   truncated_normal:<mean>:<stddev>[:<lo>:<hi>]   (default bounds [0, m])
//   age_in_days:<lo>:<hi>
//   trace:<path>
// n and rounds are left at their defaults. Bounds that are omitted are
// filled from m.
absl::StatusOr<PopulationSpec> ParsePopulationSpec(std::string_view text,
                                                   int64_t m);

// Per-user counter sequences, stored row-major as n x rounds.
class Population {
 public:
  Population(int64_t n, int64_t rounds)
      : n_(n), rounds_(rounds), values_(n * rounds, 0) {}

  int64_t n() const { return n_; }
  int64_t rounds() const { return rounds_; }

  std::span<const int64_t> user(int64_t i) const {
    return {values_.data() + i * rounds_, static_cast<size_t>(rounds_)};
  }
  std::span<int64_t> mutable_user(int64_t i) {
    return {values_.data() + i * rounds_, static_cast<size_t>(rounds_)};
  }
  int64_t at(int64_t i, int64_t t) const { return values_[i * rounds_ + t]; }

 private:
  int64_t n_;
  int64_t rounds_;
  std::vector<int64_t> values_;
};

// Synthetic values are clipped to [0, m] and rounded to integers. Users
// draw from independent substreams of `seed`, so the result does not
// depend on generation order.
absl::StatusOr<Population> GeneratePopulation(const PopulationSpec& spec,
                                              int64_t m, uint64_t seed);

// Trace format: header "user_id,t,value_seconds", then one row per
// (user, round) with 1-based t and an integer value in [0, m]. Every user
// must report every round 1..T exactly once. Users are numbered in order
// of first appearance. Errors name the offending line.
absl::StatusOr<Population> ReadTrace(std::istream& in, int64_t m);
absl::StatusOr<Population> ReadTraceFile(const std::string& path, int64_t m);

}  // namespace ldpcount

#endif  // LDPCOUNT_POPULATION_H_
