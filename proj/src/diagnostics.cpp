#include "segpower/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "segpower/curve.hpp"
#include "segpower/error.hpp"
#include "segpower/parallel.hpp"
#include "segpower/qrng.hpp"
#include "segpower/rng.hpp"
#include "segpower/root.hpp"

namespace segpower {

int rounded_n2(const DesignSpec& spec, int n) {
  // nearbyint honours the default round-to-nearest-even mode.
  return static_cast<int>(std::nearbyint(spec.q * n));
}

int diagnostic_start(const DesignSpec& spec) {
  int n = 2;
  while (rounded_n2(spec, n) < 2) ++n;
  return n;
}

PointScan scan_point(const UnitPoint& u, const DesignSpec& spec, int n_max, double tol,
                     std::size_t point_index) {
  spec.validate_for_curve();
  const int start = diagnostic_start(spec);
  if (n_max < start)
    throw InvalidArgument("scan: n_max must be at least " + std::to_string(start));

  PointScan scan;
  scan.intersections.point_index = point_index;
  scan.peak.point_index = point_index;
  auto& rep = scan.intersections;
  const double n_min = curve_min_n(spec);
  auto g = [&](double n) { return evaluate_curve(u, spec, n).g; };

  double best_se = -1.0;
  bool prev_in = false;
  for (int n = start; n <= n_max; ++n) {
    const CurveEvaluation ev = evaluate_sizes(u, spec, n, rounded_n2(spec, n));
    if (ev.stats.se > best_se) {
      best_se = ev.stats.se;
      scan.peak.argmax_n = n;
    }
    const bool in = ev.g <= 0.0;
    if (n == start) {
      if (in) rep.crossings.push_back(n);
    } else if (in != prev_in) {
      if (!in && !rep.departure_n) rep.departure_n = n;
      if (in && rep.departure_n && !rep.duration) rep.duration = n - *rep.departure_n;
      // Refine on the continuous curve when it agrees with the grid.
      const double lo = std::max<double>(n - 1, n_min);
      const double g_lo = g(lo);
      const double g_hi = g(n);
      double root = n;
      if (lo < n && (g_lo <= 0.0) == prev_in && (g_hi <= 0.0) == in) {
        root = in ? brent_root(g, lo, g_lo, n, g_hi, tol).x : brent_root(g, n, g_hi, lo, g_lo, tol).x;
      }
      rep.crossings.push_back(root);
    }
    prev_in = in;
  }
  return scan;
}

IntersectionReport scan_intersections(const UnitPoint& u, const DesignSpec& spec, int n_max,
                                      double tol, std::size_t point_index) {
  return scan_point(u, spec, n_max, tol, point_index).intersections;
}

SePeakReport scan_se_peak(const UnitPoint& u, const DesignSpec& spec, int n_max,
                          std::size_t point_index) {
  spec.validate_for_curve();
  const int start = diagnostic_start(spec);
  if (n_max < start)
    throw InvalidArgument("scan: n_max must be at least " + std::to_string(start));
  SePeakReport peak;
  peak.point_index = point_index;
  double best = -1.0;
  for (int n = start; n <= n_max; ++n) {
    const double se = stats_from_point(u, spec, n, rounded_n2(spec, n)).se;
    if (se > best) {
      best = se;
      peak.argmax_n = n;
    }
  }
  return peak;
}

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> scenarios = [] {
    struct Combo {
      double sigma1, sigma2, q;
    };
    const Combo combos[] = {{16.5, 16.5, 1.0},       {18.0, 15.0, 1.0}, {18.0, 15.0, 1.0 / 1.2},
                            {18.0, 15.0, 1.2},       {19.5, 13.0, 1.0}, {19.5, 13.0, 1.0 / 1.5},
                            {19.5, 13.0, 1.5}};
    const double mus[] = {0.0, -4.0, -8.0, -12.0, -16.0};
    const int n_maxes[] = {100, 100, 200, 500, 2500};
    std::vector<Scenario> out;
    for (int i = 0; i < 5; ++i) {
      for (int c = 0; c < 7; ++c) {
        Scenario s;
        s.combo = c + 1;
        s.name = "mu" + std::to_string(static_cast<int>(mus[i])) + "_s" + std::to_string(c + 1);
        s.spec = DesignSpec{mus[i], combos[c].sigma1, combos[c].sigma2, -19.2, 19.2, 0.05, combos[c].q};
        s.n_max = n_maxes[i];
        out.push_back(s);
      }
    }
    return out;
  }();
  return scenarios;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw InvalidArgument("unknown scenario '" + name + "' (expected e.g. mu0_s1 ... mu-16_s7)");
}

ScenarioSummary summarize_scenario(const DesignSpec& spec, int n_max, std::size_t m, int reps,
                                   std::uint64_t seed, unsigned threads, const std::string& name) {
  spec.validate_for_curve();
  if (m == 0 || reps < 1) throw InvalidArgument("summarize_scenario: m and reps must be positive");
  const std::size_t total = m * static_cast<std::size_t>(reps);
  std::vector<PointScan> scans(total);
  for (int r = 0; r < reps; ++r) {
    const auto points = qrng::randomized_sobol(3, m, substream_seed(seed, static_cast<std::uint64_t>(r))).points;
    const std::size_t offset = static_cast<std::size_t>(r) * m;
    parallel_chunks(m, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        scans[offset + i] = scan_point(to_unit_point(points[i]), spec, n_max, 1e-6, i);
    });
  }

  ScenarioSummary s;
  s.name = name;
  s.reps = reps;
  s.m = m;
  s.points = total;
  double departure_sum = 0.0, duration_sum = 0.0, argmax_sum = 0.0;
  std::size_t departures = 0, gt5 = 0, gt10 = 0;
  for (const auto& scan : scans) {
    const auto& rep = scan.intersections;
    if (rep.multiple()) ++s.multi_count;
    if (rep.departure_n) {
      departure_sum += *rep.departure_n;
      ++departures;
    }
    if (rep.duration) {
      duration_sum += *rep.duration;
      ++s.duration_count;
    }
    argmax_sum += scan.peak.argmax_n;
    if (scan.peak.argmax_n > 5) ++gt5;
    if (scan.peak.argmax_n > 10) ++gt10;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(total);
  s.prevalence = static_cast<double>(s.multi_count) / n;
  s.departure_mean = departures ? departure_sum / static_cast<double>(departures) : nan;
  s.duration_mean = s.duration_count ? duration_sum / static_cast<double>(s.duration_count) : nan;
  s.argmax_mean = argmax_sum / n;
  s.frac_argmax_gt5 = static_cast<double>(gt5) / n;
  s.frac_argmax_gt10 = static_cast<double>(gt10) / n;
  return s;
}

}  // namespace segpower
