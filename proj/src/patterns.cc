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


#include "ldpcount/patterns.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace ldpcount {

absl::StatusOr<BehaviorPattern> PatternOf(std::span<const int64_t> rounded) {
  if (rounded.empty()) {
    return absl::InvalidArgumentError("behavior pattern of an empty sequence");
  }
  BehaviorPattern pattern;
  pattern.labels.reserve(rounded.size());
  std::unordered_map<int64_t, int32_t> label_of;
  for (const int64_t value : rounded) {
    auto [it, inserted] = label_of.try_emplace(value, pattern.width + 1);
    if (inserted) ++pattern.width;
    pattern.labels.push_back(it->second);
  }
  return pattern;
}

absl::StatusOr<SupportDistribution> ComputeSupportDistribution(
    const std::vector<std::vector<int64_t>>& rounded_sequences) {
  SupportDistribution result;
  result.n = static_cast<int64_t>(rounded_sequences.size());
  if (rounded_sequences.empty()) return result;

  const size_t length = rounded_sequences.front().size();
  std::map<BehaviorPattern, int64_t> counts;
  for (size_t i = 0; i < rounded_sequences.size(); ++i) {
    if (rounded_sequences[i].size() != length) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sequence ", i, " has length ", rounded_sequences[i].size(),
          ", expected ", length));
    }
    auto pattern = PatternOf(rounded_sequences[i]);
    if (!pattern.ok()) return pattern.status();
    ++counts[*std::move(pattern)];
  }

  result.patterns.reserve(counts.size());
  for (auto& [pattern, support] : counts) {
    result.patterns.push_back({.pattern = pattern, .support = support});
  }
  // std::stable_sort keeps the map's canonical order among equal supports.
  std::stable_sort(result.patterns.begin(), result.patterns.end(),
                   [](const PatternSupport& a, const PatternSupport& b) {
                     return a.support > b.support;
                   });

  result.cumulative_user_fraction.resize(result.patterns.size());
  int64_t running = 0;
  size_t i = 0;
  while (i < result.patterns.size()) {
    // All patterns tied at this support count towards the threshold.
    size_t j = i;
    while (j < result.patterns.size() &&
           result.patterns[j].support == result.patterns[i].support) {
      running += result.patterns[j].support;
      ++j;
    }
    const double fraction =
        static_cast<double>(running) / static_cast<double>(result.n);
    std::fill(result.cumulative_user_fraction.begin() + i,
              result.cumulative_user_fraction.begin() + j, fraction);
    i = j;
  }
  return result;
}

double PatternLdpExponent(int64_t width, double epsilon) {
  return static_cast<double>(width) * epsilon;
}

void WriteSupportCsv(const SupportDistribution& distribution,
                     std::string_view config_line, std::ostream& out) {
  if (!config_line.empty()) out << "# config: " << config_line << "\n";
  out << "pattern_rank,support,cumulative_user_fraction\n";
  for (size_t i = 0; i < distribution.patterns.size(); ++i) {
    out << (i + 1) << "," << distribution.patterns[i].support << ","
        << absl::StrFormat("%.6f", distribution.cumulative_user_fraction[i])
        << "\n";
  }
}

}  // namespace ldpcount
