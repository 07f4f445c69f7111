#include "segpower/tost.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "segpower/error.hpp"
#include "segpower/parallel.hpp"
#include "segpower/special.hpp"

namespace segpower {
namespace {

void throw_if_any(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string message = "invalid design:";
  for (const auto& p : problems) message += "\n  - " + p;
  throw InvalidArgument(message);
}

std::vector<std::string> design_problems(const DesignSpec& s) {
  std::vector<std::string> problems;
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) problems.push_back(std::string(name) + " must be finite");
  };
  finite(s.mu_diff, "mu_diff");
  finite(s.delta_lower, "delta_lower");
  finite(s.delta_upper, "delta_upper");
  if (!(s.sigma1 > 0.0) || !std::isfinite(s.sigma1)) problems.push_back("sigma1 must be positive");
  if (!(s.sigma2 > 0.0) || !std::isfinite(s.sigma2)) problems.push_back("sigma2 must be positive");
  if (!(s.delta_lower < s.delta_upper)) problems.push_back("delta_lower must be below delta_upper");
  if (!(s.alpha > 0.0 && s.alpha <= 0.5)) problems.push_back("alpha must lie in (0, 0.5]");
  if (!(s.q > 0.0) || !std::isfinite(s.q)) problems.push_back("q must be positive");
  return problems;
}

// Decides rejection for fixed integer (n1, n2) with the same outcome as
// rejects(). Welch df is bounded by [min(n1, n2) - 1, n1 + n2 - 2] and the
// critical value decreases in df, so most points are settled by the two
// bounding critical values; only the remainder needs t_{1-alpha}(nu).
class RejectionRule {
 public:
  RejectionRule(const DesignSpec& spec, int n1, int n2)
      : spec_(spec),
        crit_max_(special::t_quantile(1.0 - spec.alpha, std::min(n1, n2) - 1.0)),
        crit_min_(special::t_quantile(1.0 - spec.alpha, n1 + n2 - 2.0)) {}

  bool operator()(const SummaryStats& s) const {
    const double margin = std::min(s.d_bar - spec_.delta_lower, spec_.delta_upper - s.d_bar);
    if (!(margin > 0.0)) return false;
    if (crit_max_ * s.se * (1.0 + kSlack) < margin) return true;
    if (crit_min_ * s.se * (1.0 - kSlack) >= margin) return false;
    return rejects(s, spec_);
  }

 private:
  static constexpr double kSlack = 1e-9;
  const DesignSpec& spec_;
  double crit_max_;
  double crit_min_;
};

}  // namespace

std::vector<std::string> DesignSpec::problems() const { return design_problems(*this); }

std::vector<std::string> DesignSpec::curve_problems() const {
  auto problems = design_problems(*this);
  if (!(delta_lower < mu_diff && mu_diff < delta_upper))
    problems.push_back("mu_diff must lie strictly between delta_lower and delta_upper");
  return problems;
}

void DesignSpec::validate() const { throw_if_any(problems()); }

void DesignSpec::validate_for_curve() const { throw_if_any(curve_problems()); }

double welch_df(double s1_sq, double s2_sq, double n1, double n2) {
  if (!(s1_sq >= 0.0 && s2_sq >= 0.0)) throw InvalidArgument("welch_df: variances must be nonnegative");
  if (!(n1 > 1.0 && n2 > 1.0)) throw InvalidArgument("welch_df: group sizes must exceed 1");
  if (s1_sq == 0.0 && s2_sq == 0.0)
    throw DegenerateSample("welch_df: both sample variances are zero");
  const double a = s1_sq / n1;
  const double b = s2_sq / n2;
  const double total = a + b;
  return total * total / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
}

SummaryStats stats_from_point(const UnitPoint& u, const DesignSpec& spec, double n1, double n2) {
  if (!(n1 > 1.0 && n2 > 1.0)) throw InvalidArgument("stats_from_point: group sizes must exceed 1");
  const double v1 = spec.sigma1 * spec.sigma1;
  const double v2 = spec.sigma2 * spec.sigma2;
  SummaryStats s;
  s.s1_sq = v1 * special::inv_chisq(u[0], n1 - 1.0) / (n1 - 1.0);
  s.s2_sq = v2 * special::inv_chisq(u[1], n2 - 1.0) / (n2 - 1.0);
  s.d_bar = spec.mu_diff + special::inv_norm(u[2]) * std::sqrt(v1 / n1 + v2 / n2);
  s.se = std::sqrt(s.s1_sq / n1 + s.s2_sq / n2);
  s.nu = welch_df(s.s1_sq, s.s2_sq, n1, n2);
  return s;
}

bool rejects(const SummaryStats& stats, const DesignSpec& spec) {
  const double margin =
      std::min(stats.d_bar - spec.delta_lower, spec.delta_upper - stats.d_bar);
  return special::t_quantile(1.0 - spec.alpha, stats.nu) * stats.se < margin;
}

qrng::PointSet power_points(std::size_t m, std::uint64_t seed, PointSource source) {
  if (source == PointSource::sobol) return qrng::randomized_sobol(3, m, seed).points;
  return qrng::pseudorandom_points(3, m, seed);
}

PowerEstimate empirical_power(const DesignSpec& spec, int n1, int n2, std::size_t m,
                              std::uint64_t seed, const PowerOptions& options) {
  if (m == 0) throw InvalidArgument("empirical_power: m must be positive");
  spec.validate();
  if (n1 < 2 || n2 < 2) throw InvalidArgument("empirical_power: n1 and n2 must be at least 2");
  return empirical_power(spec, n1, n2, power_points(m, seed, options.source), options.threads);
}

PowerEstimate empirical_power(const DesignSpec& spec, int n1, int n2,
                              const qrng::PointSet& points, unsigned threads) {
  spec.validate();
  if (n1 < 2 || n2 < 2) throw InvalidArgument("empirical_power: n1 and n2 must be at least 2");
  if (points.dimension() != 3 || points.size() == 0)
    throw InvalidArgument("empirical_power: need a nonempty set of 3-dimensional points");

  const RejectionRule rule(spec, n1, n2);
  const std::size_t m = points.size();
  std::vector<unsigned char> decision(m, 0);
  parallel_chunks(m, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      decision[r] = rule(stats_from_point(to_unit_point(points[r]), spec, n1, n2)) ? 1 : 0;
  });
  std::size_t total = 0;
  for (unsigned char d : decision) total += d;
  return {static_cast<double>(total) / static_cast<double>(m), total, m};
}

}  // namespace segpower
