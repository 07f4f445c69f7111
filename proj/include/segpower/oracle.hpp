#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "segpower/tost.hpp"

namespace segpower {

struct OracleRun {
  DesignSpec spec;
  int n1 = 0;
  int n2 = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  double power = 0.0;
};

// Welford running mean and n-1 variance.
struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
};
SampleMoments sample_moments(std::span<const double> xs);

// Naive simulation: replicate r draws n1 values from N(mu_diff, sigma1^2) and
// n2 from N(0, sigma2^2) using SplitMix64(substream_seed(seed, r)) and
// inv_norm, then runs both one-sided Welch t-tests on the raw data.
OracleRun naive_power(const DesignSpec& spec, int n1, int n2, std::size_t m, std::uint64_t seed,
                      unsigned threads = 0);

}  // namespace segpower
