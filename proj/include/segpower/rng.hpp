#pragma once

#include <cstdint>

namespace segpower {

// SplitMix64. Used for digital-shift vectors,
// pseudorandom unit-cube points and the naive data-level oracle, so every
// stream in the project is a pure function of a 64-bit seed.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform double on the open interval (0, 1): 53 random bits, offset by half an ulp.
  constexpr double next_open01() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Seed of the substream for (seed, index); independent of evaluation order.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64::mix(seed ^ SplitMix64::mix(index + 0x632be59bd9b4e019ULL));
}

}  // namespace segpower
