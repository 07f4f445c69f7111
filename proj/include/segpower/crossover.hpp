#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "segpower/curve.hpp"
#include "segpower/tost.hpp"

namespace segpower {

// 2x2 crossover inputs. F is the direct drug effect F_T - F_R on the log
// scale; sigma_d1 and sigma_d2 are SDs of the within-subject period
// differences in the two sequences.
struct CrossoverSpec {
  double F = 0.0;
  double sigma_d1 = 1.0;
  double sigma_d2 = 1.0;
  double delta_lower = -1.0;
  double delta_upper = 1.0;
  double alpha = 0.05;
  double q = 1.0;

  std::vector<std::string> problems() const;
  void validate() const;
};

// Half period differences behave like a two-group comparison with mean F and
// SDs sigma_d / 2.
DesignSpec to_two_group(const CrossoverSpec& cspec);

struct CrossoverRecommendation {
  int n_per_sequence = 0;  // sequence 1
  int n_sequence2 = 0;
  PowerCurve curve;
};

CrossoverRecommendation crossover_sample_size(const CrossoverSpec& cspec, double target_power,
                                              std::size_t m, std::uint64_t seed,
                                              const CurveOptions& options = {});

// Smallest n >= 2 with n >= (t_{alpha,2n-2} + t_{beta/2,2n-2})^2 sigma_D^2 / (2 (delta_U - |F|)^2),
// t_{a,df} being the upper-a quantile. Throws Infeasible when |F| >= delta_U
// or no n up to 10^6 qualifies.
int chow_sample_size(double F, double sigma_d, double delta_upper, double alpha, double beta);

}  // namespace segpower
