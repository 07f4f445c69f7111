#include "segpower/crossover.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "segpower/error.hpp"
#include "segpower/special.hpp"

namespace segpower {

std::vector<std::string> CrossoverSpec::problems() const {
  std::vector<std::string> problems;
  if (!std::isfinite(F)) problems.push_back("F must be finite");
  if (!(sigma_d1 > 0.0) || !std::isfinite(sigma_d1)) problems.push_back("sigma_d1 must be positive");
  if (!(sigma_d2 > 0.0) || !std::isfinite(sigma_d2)) problems.push_back("sigma_d2 must be positive");
  if (!(delta_lower < delta_upper)) problems.push_back("delta_lower must be below delta_upper");
  if (!(alpha > 0.0 && alpha <= 0.5)) problems.push_back("alpha must lie in (0, 0.5]");
  if (!(q > 0.0) || !std::isfinite(q)) problems.push_back("q must be positive");
  return problems;
}

void CrossoverSpec::validate() const {
  const auto problems = this->problems();
  if (problems.empty()) return;
  std::string message = "invalid crossover design:";
  for (const auto& p : problems) message += "\n  - " + p;
  throw InvalidArgument(message);
}

DesignSpec to_two_group(const CrossoverSpec& c) {
  c.validate();
  return DesignSpec{c.F, c.sigma_d1 / 2.0, c.sigma_d2 / 2.0, c.delta_lower, c.delta_upper, c.alpha, c.q};
}

CrossoverRecommendation crossover_sample_size(const CrossoverSpec& cspec, double target_power,
                                              std::size_t m, std::uint64_t seed,
                                              const CurveOptions& options) {
  CrossoverRecommendation rec;
  rec.curve = power_curve(to_two_group(cspec), target_power, m, seed, options);
  rec.n_per_sequence = rec.curve.rec_n1;
  rec.n_sequence2 = rec.curve.rec_n2;
  return rec;
}

int chow_sample_size(double F, double sigma_d, double delta_upper, double alpha, double beta) {
  if (!(sigma_d > 0.0)) throw InvalidArgument("chow_sample_size: sigma_D must be positive");
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
    throw InvalidArgument("chow_sample_size: alpha and beta must lie in (0, 1)");
  const double gap = delta_upper - std::fabs(F);
  if (!(gap > 0.0)) throw Infeasible("chow_sample_size: |F| must be below delta_U");
  const double scale = sigma_d * sigma_d / (2.0 * gap * gap);
  constexpr int kMaxN = 1000000;
  for (int n = 2; n <= kMaxN; ++n) {
    const double df = 2.0 * n - 2.0;
    const double t = special::t_quantile(1.0 - alpha, df) + special::t_quantile(1.0 - beta / 2.0, df);
    if (n >= t * t * scale) return n;
  }
  throw Infeasible("chow_sample_size: no n up to 10^6 satisfies the inequality");
}

}  // namespace segpower
