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


// Client-side permanent memoization.
//
// Mean collection: each client fixes a private offset alpha in [0, s) and
// memoizes one randomized bit for every point of the grid {0, s, ..., m}.
// A counter value x is rounded to a neighbouring grid point using alpha
// ("alpha-point rounding") and the client answers with that point's bit,
// so small changes of x that do not cross a rounding threshold are never
// revealed.
//
// Histogram collection: each client memoizes one dBitFlip response per
// bucket and always answers with the response for its current bucket.
//
// Tables are write-once. Row i of a client's table is drawn from the
// substream MemoRowRng(memo_seed, i), where memo_seed is drawn from the
// rng handed to the Init* function; code that only needs a few rows (the
// simulator) can recompute them without building the whole table.

#ifndef LDPCOUNT_MEMOIZATION_H_
#define LDPCOUNT_MEMOIZATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpcount/mechanisms.h"
#include "ldpcount/random.h"

namespace ldpcount {

struct MeanClientState {
  MeanConfig config;
  PrivacyParams privacy;
  int64_t alpha = 0;
  // grid_bits[l] is the memoized bit for grid value l * s; m/s + 1 entries.
  std::vector<bool> grid_bits;

  friend bool operator==(const MeanClientState&,
                         const MeanClientState&) = default;
};

struct HistClientState {
  HistConfig config;
  PrivacyParams privacy;
  // Public-coin bucket list, d distinct 1-based indices.
  std::vector<int64_t> buckets;
  // Row-major k x d bit table: the response bits memoized for bucket v
  // occupy [(v - 1) * d, v * d).
  std::vector<bool> table;

  friend bool operator==(const HistClientState&,
                         const HistClientState&) = default;
};

using ClientState = std::variant<MeanClientState, HistClientState>;

inline Rng MemoRowRng(uint64_t memo_seed, int64_t row) {
  return Rng::ForStream(memo_seed, static_cast<uint64_t>(row));
}

// Rounds x to the grid: L = s * floor(x / s); returns L when x + alpha < L + s
// and L + s otherwise. Grid values (including m) map to themselves.
// Requires 0 <= x <= m and 0 <= alpha < s.
int64_t AlphaRound(int64_t x, int64_t alpha, const MeanConfig& config);

// Draws alpha, then memo_seed, from rng and fills the grid table.
absl::StatusOr<MeanClientState> InitMeanState(const MeanConfig& config,
                                              const PrivacyParams& privacy,
                                              Rng& rng);

absl::StatusOr<MeanResponse> MeanRespondMemoized(int64_t x,
                                                 const MeanClientState& state);

// Derives the bucket list from public coins, draws memo_seed from rng and
// runs dBitFlip once per bucket value.
absl::StatusOr<HistClientState> InitHistState(const HistConfig& config,
                                              const PrivacyParams& privacy,
                                              UserId user_id,
                                              uint64_t public_seed, Rng& rng);

absl::StatusOr<HistResponse> HistRespondMemoized(int64_t v,
                                                 const HistClientState& state);

// Versioned little-endian encoding:
//   u8 version, u8 kind (0 mean, 1 histogram), f64 epsilon, f64 gamma,
//   mean:      u64 m, u64 s, u64 alpha, packed grid bits
//   histogram: u64 k, u64 d, d x u64 bucket, packed k*d table bits
// Bits are packed LSB-first, 8 per byte, unused high bits zero.
inline constexpr uint8_t kStateFormatVersion = 1;

std::string SaveState(const MeanClientState& state);
std::string SaveState(const HistClientState& state);

// DataLoss for truncated or malformed input, FailedPrecondition for an
// unsupported version byte.
absl::StatusOr<ClientState> LoadState(std::string_view bytes);

}  // namespace ldpcount

#endif  // LDPCOUNT_MEMOIZATION_H_
