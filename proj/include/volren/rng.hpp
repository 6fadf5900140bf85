// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace volren {

/// Philox4x64-10 counter-based block cipher (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3", SC'11). Output is a pure function of
/// (counter, key), so any draw of any stream can be produced independently.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr int kRounds = 10;

  static Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < kRounds; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static Counter single_round(const Counter& ctr, const Key& key) {
    const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * ctr[0];
    const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
};

// Top 53 bits of a word mapped onto [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Random stream addressed by (seed, stream). Word k of the stream is lane
/// k % 4 of Philox4x64-10 with counter {k / 4, 0, 0, 0} and key {seed, stream}.
/// at() is stateless; next() walks the words in order and caches one block.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

  std::uint64_t bits_at(std::uint64_t index) const {
    return Philox4x64::generate({index / 4, 0, 0, 0}, key_)[index % 4];
  }

  double at(std::uint64_t index) const { return to_unit_interval(bits_at(index)); }

  std::uint64_t next_bits() {
    const std::uint64_t lane = position_ % 4;
    if (lane == 0 || !block_valid_) {
      block_ = Philox4x64::generate({position_ / 4, 0, 0, 0}, key_);
      block_valid_ = true;
    }
    ++position_;
    return block_[lane];
  }

  double next() { return to_unit_interval(next_bits()); }

 private:
  Philox4x64::Key key_;
  Philox4x64::Counter block_{};
  std::uint64_t position_ = 0;
  bool block_valid_ = false;
};

}  // namespace volren
