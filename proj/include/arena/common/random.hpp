#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace arena {

/// All seeded randomness in the harness runs on mt19937_64, whose output
/// sequence is fixed by the standard. The helpers below convert raw 64-bit
/// draws to reals and bounded integers without going through the
/// implementation-defined std:: distributions, so a seed reproduces the same
/// data on every toolchain.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double unit_interval(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), unbiased (rejection on the tail).
inline std::size_t bounded_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

/// Index drawn from a categorical distribution by inverse CDF.
inline std::size_t categorical_index(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = unit_interval(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

template <typename T>
void seeded_shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = bounded_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// FNV-1a over bytes; used to derive stable sub-seeds from string keys.
inline std::uint64_t stable_hash(std::string_view bytes,
                                 std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace arena
