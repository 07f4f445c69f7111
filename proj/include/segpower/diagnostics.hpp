#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segpower/tost.hpp"

namespace segpower {

struct IntersectionReport {
  std::size_t point_index = 0;
  // Sorted; a point already inside the rejection region at the grid start
  // contributes the grid start itself.
  std::vector<double> crossings;
  std::optional<int> departure_n;  // smallest n inside at n - 1 but outside at n
  std::optional<int> duration;     // re-entry n minus departure_n

  bool multiple() const noexcept { return crossings.size() >= 2; }
};

struct SePeakReport {
  std::size_t point_index = 0;
  int argmax_n = 2;
};

struct PointScan {
  IntersectionReport intersections;
  SePeakReport peak;
};

// Integer-grid second group size: q * n rounded half to even.
int rounded_n2(const DesignSpec& spec, int n);
// First grid n with n >= 2 and rounded_n2 >= 2.
int diagnostic_start(const DesignSpec& spec);

// One pass over the integer grid n = start..n_max at (n, rounded_n2(n)).
// Sign changes of g are refined on the continuous curve to `tol`.
PointScan scan_point(const UnitPoint& u, const DesignSpec& spec, int n_max, double tol = 1e-6,
                     std::size_t point_index = 0);
IntersectionReport scan_intersections(const UnitPoint& u, const DesignSpec& spec, int n_max,
                                      double tol = 1e-6, std::size_t point_index = 0);
SePeakReport scan_se_peak(const UnitPoint& u, const DesignSpec& spec, int n_max,
                          std::size_t point_index = 0);

struct Scenario {
  std::string name;  // e.g. "mu-4_s2"
  int combo = 1;     // 1..7: (sigma1, sigma2, q) combination
  DesignSpec spec;
  int n_max = 100;
};

// The 35 built-in scenarios: mu_diff in {0, -4, -8, -12, -16} crossed with
// seven (sigma1, sigma2, q) combinations, limits +-19.2, alpha 0.05.
const std::vector<Scenario>& builtin_scenarios();
// Throws InvalidArgument for an unknown name.
const Scenario& find_scenario(const std::string& name);

struct ScenarioSummary {
  std::string name;
  int reps = 0;
  std::size_t m = 0;
  std::size_t points = 0;
  std::size_t multi_count = 0;
  double prevalence = 0.0;      // fraction of points with >= 2 crossings
  double departure_mean = 0.0;  // NaN when no point departs
  double duration_mean = 0.0;   // over points that re-enter by n_max; NaN if none
  std::size_t duration_count = 0;
  double argmax_mean = 0.0;
  double frac_argmax_gt5 = 0.0;
  double frac_argmax_gt10 = 0.0;
};

// reps independent randomized Sobol' streams of length m; stream r uses
// substream_seed(seed, r).
ScenarioSummary summarize_scenario(const DesignSpec& spec, int n_max, std::size_t m, int reps,
                                   std::uint64_t seed, unsigned threads = 0,
                                   const std::string& name = "");

}  // namespace segpower
