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


#include "ldpcount/population.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "ldpcount/status_macros.h"

namespace ldpcount {

namespace {

// Streams under the population seed; users take [kUserStreamBase, ...).
constexpr uint64_t kUserStreamBase = 1;

int64_t ClipToRange(double value, int64_t m) {
  const double clipped = std::clamp(value, 0.0, static_cast<double>(m));
  return static_cast<int64_t>(std::llround(clipped));
}

absl::StatusOr<std::vector<double>> ParseNumbers(
    const std::vector<absl::string_view>& parts, absl::string_view text) {
  std::vector<double> numbers;
  for (size_t i = 1; i < parts.size(); ++i) {
    double v;
    if (!absl::SimpleAtod(parts[i], &v) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "population '", text, "': '", parts[i], "' is not a number"));
    }
    numbers.push_back(v);
  }
  return numbers;
}

double TruncatedNormal(double mean, double stddev, double lo, double hi,
                       Rng& rng) {
  if (stddev == 0) return std::clamp(mean, lo, hi);
  // Rejection is exact; the guard only matters for windows far in a tail.
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double v = mean + stddev * rng.StandardNormal();
    if (v >= lo && v <= hi) return v;
  }
  return std::clamp(mean, lo, hi);
}

}  // namespace

absl::Status PopulationSpec::Validate() const {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("rounds (T) must be >= 1, got ", rounds));
  }
  switch (kind) {
    case Kind::kUniform:
    case Kind::kAgeInDays:
      if (!(lo <= hi)) {
        return absl::InvalidArgumentError("population bounds need lo <= hi");
      }
      break;
    case Kind::kTruncatedNormal:
      if (!(lo <= hi)) {
        return absl::InvalidArgumentError("population bounds need lo <= hi");
      }
      if (!(stddev >= 0)) {
        return absl::InvalidArgumentError("stddev must be >= 0");
      }
      break;
    case Kind::kTrace:
      if (trace_path.empty()) {
        return absl::InvalidArgumentError("trace population needs a path");
      }
      break;
    case Kind::kConstant:
      break;
  }
  return absl::OkStatus();
}

absl::StatusOr<PopulationSpec> ParsePopulationSpec(std::string_view input,
                                                   int64_t m) {
  absl::string_view text(input.data(), input.size());
  PopulationSpec spec;
  if (absl::ConsumePrefix(&text, "trace:")) {
    spec.kind = PopulationSpec::Kind::kTrace;
    spec.trace_path = std::string(text);
    if (spec.trace_path.empty()) {
      return absl::InvalidArgumentError("trace population needs a path");
    }
    return spec;
  }
  const std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  LDP_ASSIGN_OR_RETURN(const std::vector<double> args,
                       ParseNumbers(parts, text));
  const absl::string_view kind = parts.front();
  const double top = static_cast<double>(m);
  if (kind == "constant" && args.size() == 1) {
    spec.kind = PopulationSpec::Kind::kConstant;
    spec.value = args[0];
  } else if (kind == "uniform" && (args.empty() || args.size() == 2)) {
    spec.kind = PopulationSpec::Kind::kUniform;
    spec.lo = args.empty() ? 0 : args[0];
    spec.hi = args.empty() ? top : args[1];
  } else if (kind == "truncated_normal" &&
             (args.size() == 2 || args.size() == 4)) {
    spec.kind = PopulationSpec::Kind::kTruncatedNormal;
    spec.mean = args[0];
    spec.stddev = args[1];
    spec.lo = args.size() == 4 ? args[2] : 0;
    spec.hi = args.size() == 4 ? args[3] : top;
  } else if (kind == "age_in_days" && args.size() == 2) {
    spec.kind = PopulationSpec::Kind::kAgeInDays;
    spec.lo = args[0];
    spec.hi = args[1];
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unrecognized population '", text,
        "'; expected constant:<v>, uniform:<lo>:<hi>, "
        "truncated_normal:<mean>:<std>[:<lo>:<hi>], age_in_days:<lo>:<hi> "
        "or trace:<path>"));
  }
  LDP_RETURN_IF_ERROR(spec.Validate());
  return spec;
}

absl::StatusOr<Population> GeneratePopulation(const PopulationSpec& spec,
                                              int64_t m, uint64_t seed) {
  if (spec.kind == PopulationSpec::Kind::kTrace) {
    return ReadTraceFile(spec.trace_path, m);
  }
  LDP_RETURN_IF_ERROR(spec.Validate());
  Population population(spec.n, spec.rounds);
  for (int64_t i = 0; i < spec.n; ++i) {
    Rng rng = Rng::ForStream(seed, kUserStreamBase + i);
    std::span<int64_t> xs = population.mutable_user(i);
    switch (spec.kind) {
      case PopulationSpec::Kind::kConstant:
        std::fill(xs.begin(), xs.end(), ClipToRange(spec.value, m));
        break;
      case PopulationSpec::Kind::kUniform: {
        const double v = spec.lo + (spec.hi - spec.lo) * rng.UniformDouble();
        std::fill(xs.begin(), xs.end(), ClipToRange(v, m));
        break;
      }
      case PopulationSpec::Kind::kTruncatedNormal: {
        const double v =
            TruncatedNormal(spec.mean, spec.stddev, spec.lo, spec.hi, rng);
        std::fill(xs.begin(), xs.end(), ClipToRange(v, m));
        break;
      }
      case PopulationSpec::Kind::kAgeInDays: {
        const auto lo = static_cast<int64_t>(std::ceil(spec.lo));
        const auto hi = static_cast<int64_t>(std::floor(spec.hi));
        if (hi < lo) {
          return absl::InvalidArgumentError(
              "age_in_days bounds contain no integer");
        }
        const int64_t start =
            lo + static_cast<int64_t>(
                     rng.UniformInt(static_cast<uint64_t>(hi - lo + 1)));
        for (int64_t t = 0; t < spec.rounds; ++t) {
          xs[t] = ClipToRange(static_cast<double>(start + t + 1), m);
        }
        break;
      }
      case PopulationSpec::Kind::kTrace:
        break;
    }
  }
  return population;
}

absl::StatusOr<Population> ReadTrace(std::istream& in, int64_t m) {
  auto fail = [](int64_t line, absl::string_view why) {
    return absl::InvalidArgumentError(
        absl::StrCat("trace line ", line, ": ", why));
  };

  std::string line;
  int64_t line_number = 1;
  if (!std::getline(in, line)) return fail(1, "missing header");
  absl::string_view header = line;
  absl::ConsumeSuffix(&header, "\r");
  if (header != "user_id,t,value_seconds") {
    return fail(1, "header must be 'user_id,t,value_seconds'");
  }

  struct Row {
    int64_t user;
    int64_t t;
    int64_t value;
    int64_t line;
  };
  std::unordered_map<std::string, int64_t> user_index;
  std::vector<Row> rows;
  int64_t max_t = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view text = line;
    absl::ConsumeSuffix(&text, "\r");
    if (text.empty()) continue;
    const std::vector<absl::string_view> fields = absl::StrSplit(text, ',');
    if (fields.size() != 3) {
      return fail(line_number, "expected 3 comma-separated fields");
    }
    if (fields[0].empty()) return fail(line_number, "empty user_id");
    int64_t t;
    int64_t value;
    if (!absl::SimpleAtoi(fields[1], &t) || t < 1) {
      return fail(line_number, "t must be an integer >= 1");
    }
    if (!absl::SimpleAtoi(fields[2], &value) || value < 0 || value > m) {
      return fail(line_number,
                  absl::StrCat("value_seconds must be an integer in [0, ", m,
                               "]"));
    }
    auto [it, inserted] = user_index.try_emplace(
        std::string(fields[0]), static_cast<int64_t>(user_index.size()));
    rows.push_back({it->second, t, value, line_number});
    max_t = std::max(max_t, t);
  }
  if (rows.empty()) return fail(line_number, "trace has no data rows");

  const auto n = static_cast<int64_t>(user_index.size());
  if (static_cast<int64_t>(rows.size()) != n * max_t) {
    return fail(line_number,
                absl::StrCat("expected every one of ", n,
                             " users to report rounds 1..", max_t));
  }
  Population population(n, max_t);
  std::vector<bool> filled(n * max_t, false);
  for (const Row& row : rows) {
    const int64_t slot = row.user * max_t + (row.t - 1);
    if (filled[slot]) {
      return fail(row.line, "duplicate (user_id, t) row");
    }
    filled[slot] = true;
    population.mutable_user(row.user)[row.t - 1] = row.value;
  }
  return population;
}

absl::StatusOr<Population> ReadTraceFile(const std::string& path, int64_t m) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open trace '", path, "'"));
  }
  return ReadTrace(in, m);
}

}  // namespace ldpcount
