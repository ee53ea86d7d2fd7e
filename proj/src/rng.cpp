// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaplab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ 0x243F6A8885A308D3ULL;
  std::uint64_t h = splitmix64(s);
  s = h ^ b;
  return splitmix64(s);
}

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53;
constexpr std::uint32_t kM1 = 0xCD9E8D57;
constexpr std::uint32_t kW0 = 0x9E3779B9;
constexpr std::uint32_t kW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, Domain domain) {
  std::uint64_t s = mix64(seed, stream);
  std::uint64_t k = splitmix64(s);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  ctr_ = {0, 0, 0, static_cast<std::uint32_t>(domain)};
}

void CounterRng::seek(std::uint64_t step) {
  ctr_[0] = 0;
  ctr_[1] = static_cast<std::uint32_t>(step);
  ctr_[2] = static_cast<std::uint32_t>(step >> 32);
  idx_ = 4;
  has_spare_ = false;
}

void CounterRng::refill() {
  buf_ = philox4x32_10(ctr_, key_);
  ++ctr_[0];
  idx_ = 0;
}

std::uint32_t CounterRng::next_u32() {
  if (idx_ >= 4) refill();
  return buf_[idx_++];
}

std::uint64_t CounterRng::next_u64() {
  std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller keeps the draw count fixed, unlike rejection methods.
  double u1 = uniform_open();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  // Lemire's multiply-shift with rejection.
  while (true) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("AliasTable: bad weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("AliasTable: zero total weight");
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    small.pop_back();
    std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
  for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
}

std::size_t AliasTable::sample(double u) const {
  double x = u * static_cast<double>(prob_.size());
  auto i = static_cast<std::size_t>(x);
  if (i >= prob_.size()) i = prob_.size() - 1;
  return (x - static_cast<double>(i) < prob_[i]) ? i : alias_[i];
}

std::size_t AliasTable::sample(CounterRng& rng) const { return sample(rng.uniform()); }

}  // namespace gaplab
