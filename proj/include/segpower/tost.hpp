#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segpower/qrng.hpp"

namespace segpower {

// Two-group bioequivalence design. Group 1 is the test formulation, group 2
// the reference; mu_diff is the anticipated mu1 - mu2. For power curves the
// group sizes are n1 = n and n2 = q * n.
struct DesignSpec {
  double mu_diff = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double delta_lower = -1.0;
  double delta_upper = 1.0;
  double alpha = 0.05;
  double q = 1.0;

  // Human-readable list of violated constraints (empty when valid).
  std::vector<std::string> problems() const;
  std::vector<std::string> curve_problems() const;

  // Throws InvalidArgument listing every violated constraint.
  void validate() const;
  // validate() plus delta_lower < mu_diff < delta_upper.
  void validate_for_curve() const;
};

// Sufficient statistics of one simulated sample plus the derived Welch quantities.
struct SummaryStats {
  double d_bar = 0.0;
  double s1_sq = 0.0;
  double s2_sq = 0.0;
  double se = 0.0;
  double nu = 0.0;
};

using UnitPoint = std::array<double, 3>;

inline UnitPoint to_unit_point(std::span<const double> u) { return {u[0], u[1], u[2]}; }

// Welch-Satterthwaite degrees of freedom. Group sizes may be real-valued.
double welch_df(double s1_sq, double s2_sq, double n1, double n2);

// Maps a point of the unit cube to (d_bar, s1^2, s2^2) by CDF inversion:
// u1, u2 drive the two scaled chi-square variances and u3 the normal mean difference.
SummaryStats stats_from_point(const UnitPoint& u, const DesignSpec& spec, double n1, double n2);

// Both one-sided Welch tests reject: t_{1-alpha}(nu) * se < min(d_bar - delta_L, delta_U - d_bar).
bool rejects(const SummaryStats& stats, const DesignSpec& spec);

enum class PointSource { sobol, pseudorandom };

struct PowerOptions {
  PointSource source = PointSource::sobol;
  unsigned threads = 0;  // 0: all hardware threads
};

struct PowerEstimate {
  double power = 0.0;
  std::size_t rejections = 0;
  std::size_t m = 0;
};

// Unit-cube points used by empirical_power for (m, seed, source).
qrng::PointSet power_points(std::size_t m, std::uint64_t seed, PointSource source);

// Fraction of the m mapped points that fall in the TOST rejection region at
// integer group sizes (n1, n2). The result does not depend on the thread count.
PowerEstimate empirical_power(const DesignSpec& spec, int n1, int n2, std::size_t m,
                              std::uint64_t seed, const PowerOptions& options = {});

PowerEstimate empirical_power(const DesignSpec& spec, int n1, int n2,
                              const qrng::PointSet& points, unsigned threads = 0);

}  // namespace segpower
