#include "segpower/qrng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "segpower/error.hpp"
#include "segpower/rng.hpp"

namespace segpower::qrng {
namespace {

struct JoeKuoRow {
  std::uint32_t degree;
  std::uint32_t interior;  // coefficients a_1..a_{s-1} of the primitive polynomial
  std::uint32_t offset;    // first initial m value in kJoeKuoM
};

#include "joe_kuo_table.inc"

constexpr int kBits = 64;

// 64-bit direction numbers v_k = m_k / 2^(k+1) for one dimension (0-based).
std::vector<std::uint64_t> direction_numbers(std::size_t dim) {
  std::vector<std::uint64_t> v(kBits);
  if (dim == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = std::uint64_t{1} << (kBits - 1 - k);
    return v;
  }
  const JoeKuoRow& row = kJoeKuoRows[dim - 1];
  const int s = static_cast<int>(row.degree);
  for (int k = 0; k < std::min(s, kBits); ++k)
    v[k] = std::uint64_t{kJoeKuoM[row.offset + k]} << (kBits - 1 - k);
  for (int k = s; k < kBits; ++k) {
    std::uint64_t value = v[k - s] ^ (v[k - s] >> s);
    for (int j = 1; j < s; ++j)
      if ((row.interior >> (s - 1 - j)) & 1u) value ^= v[k - j];
    v[k] = value;
  }
  return v;
}

double clamp_unit(double x) { return std::clamp(x, kUnitLow, kUnitHigh); }

}  // namespace

std::size_t max_dimension() noexcept { return kJoeKuoDimensions; }

PointSet::PointSet(std::size_t dimension, std::vector<double> values)
    : dimension_(dimension), values_(std::move(values)) {
  if (dimension_ == 0 || values_.size() % dimension_ != 0)
    throw InvalidArgument("PointSet: value count is not a multiple of the dimension");
}

PointSet sobol_raw(std::size_t dimension, std::size_t m) {
  if (dimension == 0 || m == 0)
    throw InvalidArgument("sobol_raw: dimension and m must be positive");
  if (dimension > kJoeKuoDimensions)
    throw InvalidArgument("sobol_raw: dimension " + std::to_string(dimension) +
                          " exceeds the direction-number table (" +
                          std::to_string(kJoeKuoDimensions) + ")");

  std::vector<std::vector<std::uint64_t>> v;
  v.reserve(dimension);
  for (std::size_t d = 0; d < dimension; ++d) v.push_back(direction_numbers(d));

  std::vector<double> values(dimension * m);
  std::vector<std::uint64_t> x(dimension, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      // Gray-code update: flip the direction number of the lowest zero bit of i-1.
      const int c = std::countr_one(static_cast<std::uint64_t>(i - 1));
      for (std::size_t d = 0; d < dimension; ++d) x[d] ^= v[d][c];
    }
    for (std::size_t d = 0; d < dimension; ++d)
      values[i * dimension + d] = std::ldexp(static_cast<double>(x[d]), -kBits);
  }
  return PointSet(dimension, std::move(values));
}

std::vector<std::uint64_t> shift_vector(std::size_t dimension, std::uint64_t seed) {
  SplitMix64 gen(seed);
  std::vector<std::uint64_t> shift(dimension);
  for (auto& s : shift) s = gen.next();
  return shift;
}

PointSet digital_shift(const PointSet& points, std::span<const std::uint64_t> shift) {
  const std::size_t dim = points.dimension();
  if (shift.size() != dim)
    throw InvalidArgument("digital_shift: shift length must equal the point dimension");
  std::vector<double> out(points.values().size());
  const auto& in = points.values();
  for (std::size_t k = 0; k < in.size(); ++k) {
    // Raw coordinates are dyadic with at most 53 significant bits, so the
    // round trip through 2^64 is exact.
    const auto bits = static_cast<std::uint64_t>(std::ldexp(in[k], kBits));
    const std::uint64_t shifted = bits ^ shift[k % dim];
    out[k] = clamp_unit(std::ldexp(static_cast<double>(shifted), -kBits));
  }
  return PointSet(dim, std::move(out));
}

PointSet digital_shift(const PointSet& points, std::uint64_t seed) {
  const auto shift = shift_vector(points.dimension(), seed);
  return digital_shift(points, shift);
}

SobolStream randomized_sobol(std::size_t dimension, std::size_t m, std::uint64_t seed) {
  return {dimension, m, seed, digital_shift(sobol_raw(dimension, m), seed)};
}

PointSet pseudorandom_points(std::size_t dimension, std::size_t m, std::uint64_t seed) {
  if (dimension == 0 || m == 0)
    throw InvalidArgument("pseudorandom_points: dimension and m must be positive");
  SplitMix64 gen(seed);
  std::vector<double> values(dimension * m);
  for (auto& v : values) v = clamp_unit(gen.next_open01());
  return PointSet(dimension, std::move(values));
}

}  // namespace segpower::qrng
