#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "segpower/qrng.hpp"
#include "segpower/tost.hpp"

namespace segpower {

inline constexpr double kCensored = std::numeric_limits<double>::infinity();

// se(n), Lambda(n) and g(n) = se(n) - Lambda(n) for one unit-cube point at
// real-valued n1 = n, n2 = q * n.
struct CurveEvaluation {
  SummaryStats stats;
  double lambda = 0.0;
  double g = 0.0;
};

// Smallest admissible n for curves: both n and q * n must be at least 2.
double curve_min_n(const DesignSpec& spec);

// Same quantities at explicit group sizes (both > 1).
CurveEvaluation evaluate_sizes(const UnitPoint& u, const DesignSpec& spec, double n1, double n2);
CurveEvaluation evaluate_curve(const UnitPoint& u, const DesignSpec& spec, double n);
double se_of_n(const UnitPoint& u, const DesignSpec& spec, double n);
double lambda_of_n(const UnitPoint& u, const DesignSpec& spec, double n);
double g_of_n(const UnitPoint& u, const DesignSpec& spec, double n);

// Bracket grid n_min * {1, 1.5, 2, 3, 4, 6, ...}, truncated at and ending with B.
std::vector<double> bracket_grid(double n_min, double bound);

struct CurvePoint {
  std::size_t point_index = 0;
  double crossing_n = kCensored;
  bool reinitialized = false;
  int evaluations = 0;  // g evaluations spent by smallest_crossing

  bool censored() const noexcept { return crossing_n == kCensored; }
};

struct CurveOptions {
  double bound = 65536.0;  // B
  double tol = 1e-6;
  unsigned threads = 0;
  int max_rounds = 3;  // safeguard rounds before giving up with a warning
};

// Smallest n in [n_min, B] with g(n) <= 0, or kCensored.
CurvePoint smallest_crossing(const UnitPoint& u, const DesignSpec& spec, double bound,
                             double tol, std::size_t point_index = 0);

// First n > from where g turns nonpositive, given g(from) > 0 (kCensored if none up to B).
double next_crossing_above(const UnitPoint& u, const DesignSpec& spec, double from, double bound,
                           double tol, int* evaluations = nullptr);
// Largest n <= from where g turns nonpositive; needs g(from) <= 0.
double last_crossing_below(const UnitPoint& u, const DesignSpec& spec, double from, double tol,
                           int* evaluations = nullptr);

struct PowerCurve {
  std::vector<CurvePoint> solutions;
  double n_star_initial = 0.0;
  double n_star_final = 0.0;
  int rec_n1 = 0;
  int rec_n2 = 0;
  double target_power = 0.0;
  double bound = 0.0;
  std::size_t reinitialized = 0;  // points whose crossing was re-solved
  int safeguard_rounds = 0;
  std::vector<std::string> warnings;

  // Fraction of all points (censored ones included) with crossing <= n.
  double ecdf(double n) const;
  // Distinct finite crossings with the ECDF value reached at each.
  std::vector<std::pair<double, double>> ecdf_steps() const;
  std::size_t censored_count() const;
};

// Type-1 inverse-ECDF quantile of the crossings; censored crossings count as +inf.
double crossing_quantile(const std::vector<CurvePoint>& solutions, double target_power);

PowerCurve power_curve(const DesignSpec& spec, double target_power, const qrng::PointSet& points,
                       const CurveOptions& options = {});
PowerCurve power_curve(const DesignSpec& spec, double target_power, std::size_t m,
                       std::uint64_t seed, const CurveOptions& options = {},
                       PointSource source = PointSource::sobol);

}  // namespace segpower
