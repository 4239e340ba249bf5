// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace attrib {

// Seeded random source with platform-independent output.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so index and real draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [0, 1) with 53 random bits.
  double uniform_real();

  // k distinct values of [0, n) in sampling order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed of an independent stream, e.g. one per benchmark trial.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace attrib
