#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace segpower::qrng {

// Randomized points are clamped to this closed range so that every inverse
// CDF downstream returns a finite value.
inline constexpr double kUnitLow = 0x1.0p-64;
inline constexpr double kUnitHigh = 1.0 - 0x1.0p-53;

// Largest dimension covered by the bundled Joe-Kuo direction numbers.
std::size_t max_dimension() noexcept;

// m points of a fixed dimension, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dimension, std::vector<double> values);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : values_.size() / dimension_; }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return {values_.data() + i * dimension_, dimension_};
  }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<double> values_;
};

// A digitally shifted Sobol' sequence together with the inputs that produced it.
struct SobolStream {
  std::size_t dimension = 0;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  PointSet points;
};

// First m points of the unrandomized Sobol' sequence in Gray-code order,
// starting with the origin. Coordinates are exact dyadic rationals.
PointSet sobol_raw(std::size_t dimension, std::size_t m);

// Per-dimension shift vector drawn from SplitMix64(seed).
std::vector<std::uint64_t> shift_vector(std::size_t dimension, std::uint64_t seed);

// XORs each coordinate's 64-bit binary expansion with a shift, then clamps
// to [kUnitLow, kUnitHigh].
PointSet digital_shift(const PointSet& points, std::span<const std::uint64_t> shift);
PointSet digital_shift(const PointSet& points, std::uint64_t seed);

SobolStream randomized_sobol(std::size_t dimension, std::size_t m, std::uint64_t seed);

// Independent uniform points from SplitMix64(seed), clamped like the shifted
// Sobol' points. Used as the pseudorandom baseline.
PointSet pseudorandom_points(std::size_t dimension, std::size_t m, std::uint64_t seed);

}  // namespace segpower::qrng
