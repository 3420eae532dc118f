/**
 * Copyright 2026 The LumaForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef LUMAFORGE_RNG_HPP_
#define LUMAFORGE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace lumaforge {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Folds values into a single stream key. Order matters.
constexpr std::uint64_t derive_key(std::uint64_t key) { return key; }

template <typename... Rest>
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t next, Rest... rest) {
  return derive_key(mix64(key ^ mix64(next + 0x632BE59BD9B4E019ull)), rest...);
}

/// Counter-based generator: value i of stream k is a pure function of (k, i),
/// so results do not depend on thread scheduling or the platform RNG.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t i) {
    return mix64(key ^ mix64(i));
  }

  /// Uniform in (0, 1].
  static double unit_at(std::uint64_t key, std::uint64_t i) {
    return static_cast<double>((at(key, i) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal sample i of the stream (Box-Muller on counters 2i, 2i+1).
  static double normal_at(std::uint64_t key, std::uint64_t i) {
    const double u1 = unit_at(key, 2 * i);
    const double u2 = unit_at(key, 2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next_u64() { return at(key_, counter_++); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace lumaforge

#endif  // LUMAFORGE_RNG_HPP_
