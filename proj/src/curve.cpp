#include "segpower/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "segpower/error.hpp"
#include "segpower/parallel.hpp"
#include "segpower/root.hpp"
#include "segpower/special.hpp"

namespace segpower {
namespace {

// Rounding slack so that q * n_min computed in floating point still passes >= 2.
constexpr double kSizeSlack = 1e-12;

void check_n(const DesignSpec& spec, double n) {
  if (!(n >= 2.0 * (1.0 - kSizeSlack) && spec.q * n >= 2.0 * (1.0 - kSizeSlack)) ||
      !std::isfinite(n)) {
    std::ostringstream os;
    os << "curve: n = " << n << " needs n >= 2 and q*n >= 2 (q = " << spec.q << ")";
    throw DomainError(os.str());
  }
}

// Narrows a bracket with g(pos) > 0 >= g(nonpos) to unit width by bisecting
// on integer offsets from `pos`, then runs Brent. Unit brackets are what the
// integer-grid diagnostics refine, so both paths return bit-identical roots.
double refine_crossing(const UnitPoint& u, const DesignSpec& spec, double pos, double g_pos,
                       double nonpos, double g_nonpos, double tol, int& evaluations) {
  auto g = [&](double n) { return evaluate_curve(u, spec, n).g; };
  const double sign = nonpos > pos ? 1.0 : -1.0;
  while (std::fabs(nonpos - pos) > 1.0) {
    const double step = std::max(1.0, std::floor(std::fabs(nonpos - pos) / 2.0));
    const double mid = pos + sign * step;
    const double gm = g(mid);
    ++evaluations;
    if (gm > 0.0) {
      pos = mid;
      g_pos = gm;
    } else {
      nonpos = mid;
      g_nonpos = gm;
    }
  }
  const RootResult r = brent_root(g, pos, g_pos, nonpos, g_nonpos, tol);
  evaluations += r.evaluations;
  return r.x;
}

// Smallest crossing in (lo, hi] given g(lo) > 0, scanning `grid` (ascending, all > lo).
double scan_up(const UnitPoint& u, const DesignSpec& spec, double lo, double g_lo,
               const std::vector<double>& grid, double tol, int& evaluations) {
  auto g = [&](double n) { return evaluate_curve(u, spec, n).g; };
  double prev = lo;
  double g_prev = g_lo;
  for (double n : grid) {
    const double gn = g(n);
    ++evaluations;
    if (gn <= 0.0) return refine_crossing(u, spec, prev, g_prev, n, gn, tol, evaluations);
    prev = n;
    g_prev = gn;
  }
  return kCensored;
}

}  // namespace

double curve_min_n(const DesignSpec& spec) { return std::max(2.0, 2.0 / spec.q); }

CurveEvaluation evaluate_sizes(const UnitPoint& u, const DesignSpec& spec, double n1, double n2) {
  CurveEvaluation out;
  out.stats = stats_from_point(u, spec, n1, n2);
  const double margin =
      std::min(out.stats.d_bar - spec.delta_lower, spec.delta_upper - out.stats.d_bar);
  if (margin > 0.0) {
    const double crit = special::t_quantile(1.0 - spec.alpha, out.stats.nu);
    out.lambda = crit > 0.0 ? margin / crit : std::numeric_limits<double>::infinity();
  }
  out.g = out.stats.se - out.lambda;
  return out;
}

CurveEvaluation evaluate_curve(const UnitPoint& u, const DesignSpec& spec, double n) {
  check_n(spec, n);
  return evaluate_sizes(u, spec, std::max(n, 2.0), std::max(spec.q * n, 2.0));
}

double se_of_n(const UnitPoint& u, const DesignSpec& spec, double n) {
  return evaluate_curve(u, spec, n).stats.se;
}

double lambda_of_n(const UnitPoint& u, const DesignSpec& spec, double n) {
  return evaluate_curve(u, spec, n).lambda;
}

double g_of_n(const UnitPoint& u, const DesignSpec& spec, double n) {
  return evaluate_curve(u, spec, n).g;
}

std::vector<double> bracket_grid(double n_min, double bound) {
  std::vector<double> grid{n_min};
  if (!(bound > n_min)) return grid;
  for (double power = 1.0;; power *= 2.0) {
    for (double mult : {1.5 * power, 2.0 * power}) {
      const double n = n_min * mult;
      if (n >= bound) {
        grid.push_back(bound);
        return grid;
      }
      grid.push_back(n);
    }
  }
}

CurvePoint smallest_crossing(const UnitPoint& u, const DesignSpec& spec, double bound,
                             double tol, std::size_t point_index) {
  spec.validate_for_curve();
  const double n_min = curve_min_n(spec);
  if (!(bound >= n_min) || !std::isfinite(bound))
    throw InvalidArgument("smallest_crossing: bound B must be finite and at least " +
                          std::to_string(n_min));
  if (!(tol > 0.0)) throw InvalidArgument("smallest_crossing: tol must be positive");

  CurvePoint point;
  point.point_index = point_index;
  const std::vector<double> grid = bracket_grid(n_min, bound);
  const double g0 = evaluate_curve(u, spec, n_min).g;
  point.evaluations = 1;
  if (g0 <= 0.0) {
    point.crossing_n = n_min;
    return point;
  }
  point.crossing_n = scan_up(u, spec, n_min, g0, {grid.begin() + 1, grid.end()}, tol,
                             point.evaluations);
  return point;
}

double next_crossing_above(const UnitPoint& u, const DesignSpec& spec, double from, double bound,
                           double tol, int* evaluations) {
  int evals = 0;
  double result = kCensored;
  if (from < bound) {
    const double g_from = evaluate_curve(u, spec, from).g;
    ++evals;
    if (g_from <= 0.0) throw InvalidArgument("next_crossing_above: g(from) must be positive");
    std::vector<double> grid = bracket_grid(from, bound);
    grid.erase(grid.begin());
    result = scan_up(u, spec, from, g_from, grid, tol, evals);
  }
  if (evaluations) *evaluations += evals;
  return result;
}

double last_crossing_below(const UnitPoint& u, const DesignSpec& spec, double from, double tol,
                           int* evaluations) {
  const double n_min = curve_min_n(spec);
  auto g = [&](double n) { return evaluate_curve(u, spec, n).g; };
  int evals = 0;
  double prev = from;
  double g_prev = g(from);
  ++evals;
  double result = n_min;
  if (g_prev > 0.0) throw InvalidArgument("last_crossing_below: g(from) must be nonpositive");
  // Descending mirror of the bracket grid, ending at n_min.
  std::vector<double> down;
  for (double power = 1.0;; power *= 2.0) {
    bool done = false;
    for (double mult : {1.5 * power, 2.0 * power}) {
      const double n = from / mult;
      if (n <= n_min) {
        done = true;
        break;
      }
      down.push_back(n);
    }
    if (done) break;
  }
  if (from > n_min) down.push_back(n_min);
  for (double n : down) {
    const double gn = g(n);
    ++evals;
    if (gn > 0.0) {
      result = refine_crossing(u, spec, n, gn, prev, g_prev, tol, evals);
      break;
    }
    prev = n;
    g_prev = gn;
  }
  if (evaluations) *evaluations += evals;
  return result;
}

double PowerCurve::ecdf(double n) const {
  if (solutions.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& s : solutions)
    if (s.crossing_n <= n) ++count;
  return static_cast<double>(count) / static_cast<double>(solutions.size());
}

std::vector<std::pair<double, double>> PowerCurve::ecdf_steps() const {
  std::vector<double> finite;
  for (const auto& s : solutions)
    if (!s.censored()) finite.push_back(s.crossing_n);
  std::sort(finite.begin(), finite.end());
  std::vector<std::pair<double, double>> steps;
  const double m = static_cast<double>(solutions.size());
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (i + 1 < finite.size() && finite[i + 1] == finite[i]) continue;
    steps.emplace_back(finite[i], static_cast<double>(i + 1) / m);
  }
  return steps;
}

std::size_t PowerCurve::censored_count() const {
  return static_cast<std::size_t>(
      std::count_if(solutions.begin(), solutions.end(), [](const CurvePoint& p) { return p.censored(); }));
}

double crossing_quantile(const std::vector<CurvePoint>& solutions, double target_power) {
  if (solutions.empty()) throw InvalidArgument("crossing_quantile: no solutions");
  if (!(target_power > 0.0 && target_power < 1.0))
    throw InvalidArgument("crossing_quantile: target power must lie in (0, 1)");
  std::vector<double> sorted;
  sorted.reserve(solutions.size());
  for (const auto& s : solutions) sorted.push_back(s.crossing_n);
  const double m = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil(target_power * m * (1.0 - 1e-12)));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

PowerCurve power_curve(const DesignSpec& spec, double target_power, const qrng::PointSet& points,
                       const CurveOptions& options) {
  spec.validate_for_curve();
  if (!(target_power > 0.0 && target_power < 1.0))
    throw InvalidArgument("power_curve: target power must lie in (0, 1)");
  if (points.dimension() != 3 || points.size() == 0)
    throw InvalidArgument("power_curve: need a nonempty set of 3-dimensional points");
  if (options.max_rounds < 1) throw InvalidArgument("power_curve: max_rounds must be positive");

  const std::size_t m = points.size();
  PowerCurve curve;
  curve.target_power = target_power;
  curve.bound = options.bound;
  curve.solutions.resize(m);
  parallel_chunks(m, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      curve.solutions[r] =
          smallest_crossing(to_unit_point(points[r]), spec, options.bound, options.tol, r);
  });

  auto quantile_or_throw = [&] {
    const double n = crossing_quantile(curve.solutions, target_power);
    if (n == kCensored) {
      std::ostringstream os;
      os << "power curve: " << curve.censored_count() << " of " << m
         << " points never reach the rejection region below B = " << options.bound
         << "; increase B";
      throw BoundTooSmall(os.str(), options.bound);
    }
    return n;
  };

  double reference = quantile_or_throw();
  curve.n_star_initial = reference;
  std::vector<unsigned char> repaired(m, 0);
  for (;;) {
    ++curve.safeguard_rounds;
    parallel_chunks(m, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        CurvePoint& p = curve.solutions[r];
        const UnitPoint u = to_unit_point(points[r]);
        const double g_ref = evaluate_curve(u, spec, reference).g;
        if (p.crossing_n <= reference && g_ref > 0.0) {
          p.crossing_n = next_crossing_above(u, spec, reference, options.bound, options.tol);
          p.reinitialized = true;
          repaired[r] = 1;
        } else if (p.crossing_n > reference && g_ref <= 0.0) {
          p.crossing_n = last_crossing_below(u, spec, reference, options.tol);
          p.reinitialized = true;
          repaired[r] = 1;
        }
      }
    });
    const double updated = quantile_or_throw();
    if (updated == reference) break;
    if (curve.safeguard_rounds >= options.max_rounds) {
      std::ostringstream os;
      os << "safeguard did not settle after " << curve.safeguard_rounds
         << " rounds; last reference n = " << reference << ", quantile n = " << updated;
      curve.warnings.push_back(os.str());
      reference = updated;
      break;
    }
    reference = updated;
  }
  curve.n_star_final = reference;
  for (unsigned char r : repaired) curve.reinitialized += r;
  curve.rec_n1 = static_cast<int>(std::ceil(curve.n_star_final));
  curve.rec_n2 = static_cast<int>(std::ceil(spec.q * curve.n_star_final));
  return curve;
}

PowerCurve power_curve(const DesignSpec& spec, double target_power, std::size_t m,
                       std::uint64_t seed, const CurveOptions& options, PointSource source) {
  if (m == 0) throw InvalidArgument("power_curve: m must be positive");
  return power_curve(spec, target_power, power_points(m, seed, source), options);
}

}  // namespace segpower
