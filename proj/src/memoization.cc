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


#include "ldpcount/memoization.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "ldpcount/status_macros.h"
#include "wire.h"

namespace ldpcount {

namespace {

constexpr uint8_t kKindMean = 0;
constexpr uint8_t kKindHist = 1;

absl::Status Truncated(const char* what) {
  return absl::DataLossError(
      absl::StrCat("client state stream is truncated or corrupt at ", what));
}

uint64_t PackedBytes(uint64_t bits) { return bits / 8 + (bits % 8 ? 1 : 0); }

}  // namespace

int64_t AlphaRound(int64_t x, int64_t alpha, const MeanConfig& config) {
  const int64_t lower = (x / config.s) * config.s;
  if (lower == x) return x;
  return x + alpha < lower + config.s ? lower : lower + config.s;
}

absl::StatusOr<MeanClientState> InitMeanState(const MeanConfig& config,
                                              const PrivacyParams& privacy,
                                              Rng& rng) {
  LDP_RETURN_IF_ERROR(config.Validate());
  LDP_RETURN_IF_ERROR(privacy.Validate());
  MeanClientState state{.config = config, .privacy = privacy};
  state.alpha = static_cast<int64_t>(rng.UniformInt(config.s));
  const uint64_t memo_seed = rng();
  state.grid_bits.resize(config.GridSize());
  for (int64_t l = 0; l < config.GridSize(); ++l) {
    Rng row = MemoRowRng(memo_seed, l);
    LDP_ASSIGN_OR_RETURN(const MeanResponse response,
                         OneBitMeanRespond(l * config.s, config, privacy, row));
    state.grid_bits[l] = response.bit;
  }
  return state;
}

absl::StatusOr<MeanResponse> MeanRespondMemoized(
    int64_t x, const MeanClientState& state) {
  if (x < 0 || x > state.config.m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "counter value must lie in [0, ", state.config.m, "], got ", x));
  }
  const int64_t rounded = AlphaRound(x, state.alpha, state.config);
  return MeanResponse{.bit = state.grid_bits[rounded / state.config.s]};
}

absl::StatusOr<HistClientState> InitHistState(const HistConfig& config,
                                              const PrivacyParams& privacy,
                                              UserId user_id,
                                              uint64_t public_seed, Rng& rng) {
  LDP_RETURN_IF_ERROR(config.Validate());
  LDP_RETURN_IF_ERROR(privacy.Validate());
  HistClientState state{.config = config, .privacy = privacy};
  state.buckets = DBitFlipBuckets(user_id, public_seed, config);
  const uint64_t memo_seed = rng();
  state.table.reserve(config.k * config.d);
  for (int64_t v = 1; v <= config.k; ++v) {
    Rng row = MemoRowRng(memo_seed, v);
    LDP_ASSIGN_OR_RETURN(
        const HistResponse response,
        DBitFlipRespond(v, state.buckets, config, privacy, row));
    for (const HistEntry& entry : response.entries) {
      state.table.push_back(entry.bit);
    }
  }
  return state;
}

absl::StatusOr<HistResponse> HistRespondMemoized(
    int64_t v, const HistClientState& state) {
  if (v < 1 || v > state.config.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bucket value must lie in [1, ", state.config.k, "], got ", v));
  }
  HistResponse response;
  response.entries.reserve(state.config.d);
  const size_t offset = static_cast<size_t>((v - 1) * state.config.d);
  for (int64_t p = 0; p < state.config.d; ++p) {
    response.entries.push_back(
        {.bucket = state.buckets[p], .bit = state.table[offset + p]});
  }
  return response;
}

std::string SaveState(const MeanClientState& state) {
  wire::Writer out;
  out.U8(kStateFormatVersion);
  out.U8(kKindMean);
  out.F64(state.privacy.epsilon);
  out.F64(state.privacy.gamma);
  out.U64(static_cast<uint64_t>(state.config.m));
  out.U64(static_cast<uint64_t>(state.config.s));
  out.U64(static_cast<uint64_t>(state.alpha));
  out.Bits(state.grid_bits);
  return std::move(out).Take();
}

std::string SaveState(const HistClientState& state) {
  wire::Writer out;
  out.U8(kStateFormatVersion);
  out.U8(kKindHist);
  out.F64(state.privacy.epsilon);
  out.F64(state.privacy.gamma);
  out.U64(static_cast<uint64_t>(state.config.k));
  out.U64(static_cast<uint64_t>(state.config.d));
  for (const int64_t bucket : state.buckets) {
    out.U64(static_cast<uint64_t>(bucket));
  }
  out.Bits(state.table);
  return std::move(out).Take();
}

absl::StatusOr<ClientState> LoadState(std::string_view bytes) {
  wire::Reader in(bytes);
  const auto version = in.U8();
  if (!version) return Truncated("version");
  if (*version != kStateFormatVersion) {
    return absl::FailedPreconditionError(
        absl::StrCat("unsupported client state version ", int{*version},
                     " (supported: ", int{kStateFormatVersion}, ")"));
  }
  const auto kind = in.U8();
  const auto epsilon = in.F64();
  const auto gamma = in.F64();
  if (!kind || !epsilon || !gamma) return Truncated("header");
  auto privacy = PrivacyParams::Create(*epsilon, *gamma);
  if (!privacy.ok()) return absl::DataLossError(privacy.status().message());

  const auto first = in.U64();
  const auto second = in.U64();
  if (!first || !second) return Truncated("config");
  // Values above INT64_MAX cannot come from a valid state.
  if (*first > INT64_MAX || *second > INT64_MAX) return Truncated("config");

  if (*kind == kKindMean) {
    auto config = MeanConfig::Create(static_cast<int64_t>(*first),
                                     static_cast<int64_t>(*second));
    if (!config.ok()) return absl::DataLossError(config.status().message());
    const auto alpha = in.U64();
    if (!alpha) return Truncated("alpha");
    if (*alpha >= static_cast<uint64_t>(config->s)) {
      return absl::DataLossError("alpha outside [0, s)");
    }
    const auto grid = static_cast<uint64_t>(config->GridSize());
    if (in.remaining() != PackedBytes(grid)) return Truncated("grid bits");
    auto bits = in.Bits(grid);
    if (!bits) return Truncated("grid bits");
    return MeanClientState{.config = *config,
                           .privacy = *privacy,
                           .alpha = static_cast<int64_t>(*alpha),
                           .grid_bits = *std::move(bits)};
  }

  if (*kind == kKindHist) {
    auto config = HistConfig::Create(static_cast<int64_t>(*first),
                                     static_cast<int64_t>(*second));
    if (!config.ok()) return absl::DataLossError(config.status().message());
    const uint64_t k = static_cast<uint64_t>(config->k);
    const uint64_t d = static_cast<uint64_t>(config->d);
    if (in.remaining() / 8 < d) return Truncated("bucket list");
    std::vector<int64_t> buckets;
    std::set<int64_t> seen;
    for (uint64_t p = 0; p < d; ++p) {
      const auto bucket = in.U64();
      if (!bucket) return Truncated("bucket list");
      if (*bucket < 1 || *bucket > k ||
          !seen.insert(static_cast<int64_t>(*bucket)).second) {
        return absl::DataLossError("bucket list is not d distinct indices");
      }
      buckets.push_back(static_cast<int64_t>(*bucket));
    }
    if (k > UINT64_MAX / d || in.remaining() != PackedBytes(k * d)) {
      return Truncated("table bits");
    }
    auto table = in.Bits(k * d);
    if (!table) return Truncated("table bits");
    return HistClientState{.config = *config,
                           .privacy = *privacy,
                           .buckets = std::move(buckets),
                           .table = *std::move(table)};
  }

  return absl::DataLossError(
      absl::StrCat("unknown client state kind ", int{*kind}));
}

}  // namespace ldpcount
