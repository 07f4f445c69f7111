#include "segpower/oracle.hpp"

#include <cmath>
#include <vector>

#include "segpower/error.hpp"
#include "segpower/parallel.hpp"
#include "segpower/rng.hpp"
#include "segpower/special.hpp"

namespace segpower {

SampleMoments sample_moments(std::span<const double> xs) {
  if (xs.size() < 2) throw InvalidArgument("sample_moments: need at least two values");
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  return {mean, m2 / static_cast<double>(k - 1)};
}

OracleRun naive_power(const DesignSpec& spec, int n1, int n2, std::size_t m, std::uint64_t seed,
                      unsigned threads) {
  spec.validate();
  if (n1 < 2 || n2 < 2) throw InvalidArgument("naive_power: n1 and n2 must be at least 2");
  if (m == 0) throw InvalidArgument("naive_power: m must be positive");

  std::vector<unsigned char> rejected(m, 0);
  parallel_chunks(m, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y1(static_cast<std::size_t>(n1)), y2(static_cast<std::size_t>(n2));
    for (std::size_t r = begin; r < end; ++r) {
      SplitMix64 gen(substream_seed(seed, r));
      for (double& y : y1) y = spec.mu_diff + spec.sigma1 * special::inv_norm(gen.next_open01());
      for (double& y : y2) y = spec.sigma2 * special::inv_norm(gen.next_open01());
      const SampleMoments a = sample_moments(y1);
      const SampleMoments b = sample_moments(y2);
      const double d = a.mean - b.mean;
      const double se = std::sqrt(a.variance / n1 + b.variance / n2);
      const double t_lower = (d - spec.delta_lower) / se;
      const double t_upper = (spec.delta_upper - d) / se;
      const double nu = welch_df(a.variance, b.variance, n1, n2);
      const double crit = special::t_quantile(1.0 - spec.alpha, nu);
      rejected[r] = (t_lower >= crit && t_upper >= crit) ? 1 : 0;
    }
  });
  std::size_t count = 0;
  for (unsigned char v : rejected) count += v;
  return {spec, n1, n2, m, seed, static_cast<double>(count) / static_cast<double>(m)};
}

}  // namespace segpower
