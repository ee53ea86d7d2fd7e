// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace gaplab {

/// SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Order-dependent combination of two 64-bit values.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// Ten-round Philox4x32 bijection of `ctr` under `key`.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Stream domains keep the draws of different consumers disjoint even when
// they share (seed, stream).
enum class Domain : std::uint32_t {
  walk = 1,
  base = 2,
  scenery = 3,
  sample = 4,
  restart = 5,
  aux = 6,
};

/**
 * Philox4x32-10 counter-based generator.
 *
 * The key is derived from (seed, stream); the counter holds (sub, step, domain).
 * `seek(step)` repositions to the first draw of a step, so the value drawn at
 * step k of path p depends only on (seed, p, k) and never on scheduling.
 */
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, Domain domain = Domain::aux);

  void seek(std::uint64_t step);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Walker alias table for sampling a finite distribution in O(1).
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);

  std::size_t sample(CounterRng& rng) const;
  std::size_t sample(double u) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace gaplab
