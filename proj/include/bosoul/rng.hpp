#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bosoul {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent child seed from a master seed and a stream index.
/// Used wherever work is split into streams that must not depend on
/// scheduling (simulation rounds, repetitions, candidate evaluations).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                           std::uint64_t index = 0) noexcept {
  return derive_seed(derive_seed(master, hash_tag(tag)), index);
}

// The standard distributions are implementation-defined; these are not, so
// seeded runs reproduce bit-for-bit across standard libraries.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) noexcept { return uniform01(rng) < p; }

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) noexcept {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace bosoul
