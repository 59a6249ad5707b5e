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


// Little-endian byte encoding shared by the persisted state and aggregate
// formats. Internal to the library.

#ifndef LDPCOUNT_SRC_WIRE_H_
#define LDPCOUNT_SRC_WIRE_H_

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldpcount::wire {

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(static_cast<char>(v)); }

  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
  }

  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

  void Bits(const std::vector<bool>& bits) {
    uint8_t current = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) current |= static_cast<uint8_t>(1u << (i % 8));
      if (i % 8 == 7) {
        U8(current);
        current = 0;
      }
    }
    if (bits.size() % 8 != 0) U8(current);
  }

  std::string Take() && { return std::move(out_); }

 private:
  std::string out_;
};

// Every accessor returns nullopt once the input is exhausted.
class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::optional<uint8_t> U8() {
    if (in_.empty()) return std::nullopt;
    const auto v = static_cast<uint8_t>(in_.front());
    in_.remove_prefix(1);
    return v;
  }

  std::optional<uint64_t> U64() {
    if (in_.size() < 8) return std::nullopt;
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(in_[i])) << (8 * i);
    }
    in_.remove_prefix(8);
    return v;
  }

  std::optional<double> F64() {
    const auto bits = U64();
    if (!bits) return std::nullopt;
    return std::bit_cast<double>(*bits);
  }

  // Reads `count` packed bits. Fails if the stream is short or if padding
  // bits in the final byte are set.
  std::optional<std::vector<bool>> Bits(uint64_t count) {
    const uint64_t bytes = count / 8 + (count % 8 != 0 ? 1 : 0);
    if (in_.size() < bytes) return std::nullopt;
    std::vector<bool> bits(count);
    for (uint64_t i = 0; i < count; ++i) {
      bits[i] = (static_cast<uint8_t>(in_[i / 8]) >> (i % 8)) & 1u;
    }
    if (count % 8 != 0) {
      const auto last = static_cast<uint8_t>(in_[bytes - 1]);
      if ((last >> (count % 8)) != 0) return std::nullopt;
    }
    in_.remove_prefix(bytes);
    return bits;
  }

  size_t remaining() const { return in_.size(); }

 private:
  std::string_view in_;
};

}  // namespace ldpcount::wire

#endif  // LDPCOUNT_SRC_WIRE_H_
