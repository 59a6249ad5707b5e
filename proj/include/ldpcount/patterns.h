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


// Behavior patterns: a user's sequence of rounded counter values, taken up
// to relabeling of the values. Users sharing a pattern of width w are
// indistinguishable to within a factor e^(w * epsilon) from their memoized
// response streams.

#ifndef LDPCOUNT_PATTERNS_H_
#define LDPCOUNT_PATTERNS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace ldpcount {

// Canonical representative: each value is replaced by the order of its
// first occurrence, so [5, 9, 5] and [9, 5, 9] both become [1, 2, 1].
struct BehaviorPattern {
  std::vector<int32_t> labels;
  int32_t width = 0;

  friend auto operator<=>(const BehaviorPattern&,
                          const BehaviorPattern&) = default;
};

struct PatternSupport {
  BehaviorPattern pattern;
  int64_t support = 0;
};

struct SupportDistribution {
  int64_t n = 0;
  // Sorted by decreasing support; ties broken by canonical sequence.
  std::vector<PatternSupport> patterns;
  // cumulative_user_fraction[i] is the fraction of users whose pattern has
  // support >= patterns[i].support.
  std::vector<double> cumulative_user_fraction;
};

// InvalidArgument on an empty sequence.
absl::StatusOr<BehaviorPattern> PatternOf(std::span<const int64_t> rounded);

// InvalidArgument if sequences differ in length or any is empty.
absl::StatusOr<SupportDistribution> ComputeSupportDistribution(
    const std::vector<std::vector<int64_t>>& rounded_sequences);

// w * epsilon, the log of the indistinguishability bound within a pattern
// of width w.
double PatternLdpExponent(int64_t width, double epsilon);

// Columns pattern_rank,support,cumulative_user_fraction; `config_line` is
// emitted first as a "# config: ..." comment when non-empty.
void WriteSupportCsv(const SupportDistribution& distribution,
                     std::string_view config_line, std::ostream& out);

}  // namespace ldpcount

#endif  // LDPCOUNT_PATTERNS_H_
