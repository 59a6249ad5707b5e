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


#include "ldpcount/collector.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "ldpcount/status_macros.h"
#include "wire.h"

namespace ldpcount {

namespace {

constexpr uint8_t kAggregateFormatVersion = 1;
constexpr uint8_t kKindMeanAggregate = 2;
constexpr uint8_t kKindHistAggregate = 3;

absl::Status CheckEstimatorInputs(int64_t n, double epsilon, double delta) {
  if (n < 1) {
    return absl::FailedPreconditionError(
        "cannot estimate from an empty aggregate (n = 0)");
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be a finite value > 0, got ", epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return absl::OkStatus();
}

absl::Status CheckHeader(wire::Reader& in, uint8_t expected_kind) {
  const auto version = in.U8();
  const auto kind = in.U8();
  if (!version || !kind) {
    return absl::DataLossError("aggregate stream is truncated");
  }
  if (*version != kAggregateFormatVersion) {
    return absl::FailedPreconditionError(
        absl::StrCat("unsupported aggregate version ", int{*version}));
  }
  if (*kind != expected_kind) {
    return absl::DataLossError(
        absl::StrCat("unexpected aggregate kind ", int{*kind}));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status HistAggregate::Add(const HistResponse& response) {
  if (static_cast<int64_t>(response.entries.size()) != config_.d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "response has ", response.entries.size(), " entries, expected ",
        config_.d));
  }
  if (last_seen_.empty()) last_seen_.assign(config_.k, 0);
  const int64_t stamp = ++add_calls_;
  for (const HistEntry& entry : response.entries) {
    if (entry.bucket < 1 || entry.bucket > config_.k) {
      return absl::InvalidArgumentError(
          absl::StrCat("bucket ", entry.bucket, " outside [1, ", config_.k,
                       "]"));
    }
    if (last_seen_[entry.bucket - 1] == stamp) {
      return absl::InvalidArgumentError(
          absl::StrCat("bucket ", entry.bucket, " repeated in one response"));
    }
    last_seen_[entry.bucket - 1] = stamp;
  }
  // Only commit once the whole response is known to be valid.
  for (const HistEntry& entry : response.entries) {
    ++received_[entry.bucket - 1];
    if (entry.bit) ++ones_[entry.bucket - 1];
  }
  ++n_;
  return absl::OkStatus();
}

MeanAggregate Merge(const MeanAggregate& a, const MeanAggregate& b) {
  return {.n = a.n + b.n, .sum_bits = a.sum_bits + b.sum_bits};
}

absl::StatusOr<HistAggregate> Merge(const HistAggregate& a,
                                    const HistAggregate& b) {
  if (!(a.config_ == b.config_)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot merge histogram aggregates with different configs: (k=",
        a.config_.k, ", d=", a.config_.d, ") vs (k=", b.config_.k,
        ", d=", b.config_.d, ")"));
  }
  HistAggregate merged(a.config_);
  merged.n_ = a.n_ + b.n_;
  for (int64_t i = 0; i < a.config_.k; ++i) {
    merged.received_[i] = a.received_[i] + b.received_[i];
    merged.ones_[i] = a.ones_[i] + b.ones_[i];
  }
  return merged;
}

double MeanErrorBound(int64_t n, int64_t m, double epsilon, double delta) {
  const double e = std::exp(epsilon);
  return static_cast<double>(m) / std::sqrt(2.0 * static_cast<double>(n)) *
         ((e + 1.0) / (e - 1.0)) * std::sqrt(std::log(2.0 / delta));
}

double HistErrorBound(int64_t n, const HistConfig& config, double epsilon,
                      double delta) {
  const double half = std::exp(epsilon / 2.0);
  const double k = static_cast<double>(config.k);
  return std::sqrt(5.0 * k / (static_cast<double>(n) * config.d)) *
         ((half + 1.0) / (half - 1.0)) * std::sqrt(std::log(6.0 * k / delta));
}

absl::StatusOr<Estimate> MeanEstimate(const MeanAggregate& aggregate,
                                      int64_t m, double epsilon,
                                      double delta) {
  LDP_RETURN_IF_ERROR(CheckEstimatorInputs(aggregate.n, epsilon, delta));
  if (aggregate.sum_bits < 0 || aggregate.sum_bits > aggregate.n) {
    return absl::InvalidArgumentError("aggregate violates 0 <= sum_bits <= n");
  }
  const double e = std::exp(epsilon);
  const double n = static_cast<double>(aggregate.n);
  const double sum = static_cast<double>(aggregate.sum_bits);
  return Estimate{
      .point = static_cast<double>(m) / n * (sum * (e + 1.0) - n) / (e - 1.0),
      .delta = delta,
      .bound = MeanErrorBound(aggregate.n, m, epsilon, delta)};
}

absl::StatusOr<std::vector<Estimate>> HistEstimate(
    const HistAggregate& aggregate, double epsilon, double delta) {
  LDP_RETURN_IF_ERROR(CheckEstimatorInputs(aggregate.n(), epsilon, delta));
  const HistConfig& config = aggregate.config();
  const double half = std::exp(epsilon / 2.0);
  const double scale = static_cast<double>(config.k) /
                       (static_cast<double>(aggregate.n()) * config.d);
  const double bound = HistErrorBound(aggregate.n(), config, epsilon, delta);
  std::vector<Estimate> estimates(config.k);
  for (int64_t i = 0; i < config.k; ++i) {
    // Sum over received bits b of (b (c + 1) - 1) / (c - 1).
    const double ones = static_cast<double>(aggregate.ones()[i]);
    const double received = static_cast<double>(aggregate.received()[i]);
    estimates[i] = {
        .point = scale * (ones * (half + 1.0) - received) / (half - 1.0),
        .delta = delta,
        .bound = bound};
  }
  return estimates;
}

std::string SaveAggregate(const MeanAggregate& aggregate) {
  wire::Writer out;
  out.U8(kAggregateFormatVersion);
  out.U8(kKindMeanAggregate);
  out.U64(static_cast<uint64_t>(aggregate.n));
  out.U64(static_cast<uint64_t>(aggregate.sum_bits));
  return std::move(out).Take();
}

std::string SaveAggregate(const HistAggregate& aggregate) {
  wire::Writer out;
  out.U8(kAggregateFormatVersion);
  out.U8(kKindHistAggregate);
  out.U64(static_cast<uint64_t>(aggregate.config().k));
  out.U64(static_cast<uint64_t>(aggregate.config().d));
  out.U64(static_cast<uint64_t>(aggregate.n()));
  for (int64_t i = 0; i < aggregate.config().k; ++i) {
    out.U64(static_cast<uint64_t>(aggregate.received()[i]));
    out.U64(static_cast<uint64_t>(aggregate.ones()[i]));
  }
  return std::move(out).Take();
}

absl::StatusOr<MeanAggregate> LoadMeanAggregate(std::string_view bytes) {
  wire::Reader in(bytes);
  LDP_RETURN_IF_ERROR(CheckHeader(in, kKindMeanAggregate));
  const auto n = in.U64();
  const auto sum_bits = in.U64();
  if (!n || !sum_bits || in.remaining() != 0) {
    return absl::DataLossError("mean aggregate stream is truncated or long");
  }
  if (*n > INT64_MAX || *sum_bits > *n) {
    return absl::DataLossError("mean aggregate violates 0 <= sum_bits <= n");
  }
  return MeanAggregate{.n = static_cast<int64_t>(*n),
                       .sum_bits = static_cast<int64_t>(*sum_bits)};
}

absl::StatusOr<HistAggregate> LoadHistAggregate(std::string_view bytes) {
  wire::Reader in(bytes);
  LDP_RETURN_IF_ERROR(CheckHeader(in, kKindHistAggregate));
  const auto k = in.U64();
  const auto d = in.U64();
  const auto n = in.U64();
  if (!k || !d || !n) {
    return absl::DataLossError("histogram aggregate header is truncated");
  }
  if (*k > INT64_MAX || *d > INT64_MAX || *n > INT64_MAX) {
    return absl::DataLossError("histogram aggregate header out of range");
  }
  auto config = HistConfig::Create(static_cast<int64_t>(*k),
                                   static_cast<int64_t>(*d));
  if (!config.ok()) return absl::DataLossError(config.status().message());
  if (in.remaining() / 16 != *k || in.remaining() % 16 != 0) {
    return absl::DataLossError("histogram aggregate body has wrong length");
  }
  HistAggregate aggregate(*config);
  aggregate.n_ = static_cast<int64_t>(*n);
  uint64_t total_received = 0;
  for (uint64_t i = 0; i < *k; ++i) {
    const uint64_t received = *in.U64();
    const uint64_t ones = *in.U64();
    if (ones > received || received > *n) {
      return absl::DataLossError(
          "histogram aggregate violates ones <= received <= n");
    }
    aggregate.received_[i] = static_cast<int64_t>(received);
    aggregate.ones_[i] = static_cast<int64_t>(ones);
    total_received += received;
  }
  if (total_received != *n * *d) {
    return absl::DataLossError(
        "histogram aggregate violates sum of received = n * d");
  }
  return aggregate;
}

}  // namespace ldpcount
