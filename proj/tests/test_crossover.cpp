#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "segpower/crossover.hpp"
#include "segpower/error.hpp"
#include "segpower/special.hpp"

using namespace segpower;

namespace {

const CrossoverSpec kExample{0.05, 0.4, 0.4, -0.223, 0.223, 0.05, 1.0};

// Both sides of the closed-form inequality, evaluated with the oracle quantiles.
int chow_by_scan(double F, double sd, double du, double alpha, double beta) {
  for (int n = 2; n <= 200; ++n) {
    const long double df = 2.0L * n - 2.0L;
    const long double t = oracle::t_quantile(1.0L - alpha, df) + oracle::t_quantile(1.0L - beta / 2, df);
    const long double rhs = t * t * sd * sd / (2.0L * (du - std::fabs(F)) * (du - std::fabs(F)));
    if (n >= rhs) return n;
  }
  return -1;
}

}  // namespace

TEST_CASE("crossover maps onto a two-group design", "[crossover]") {
  const DesignSpec d = to_two_group(kExample);
  CHECK(d.mu_diff == 0.05);
  CHECK(d.sigma1 == 0.2);
  CHECK(d.sigma2 == 0.2);
  CHECK(d.delta_lower == -0.223);
  CHECK(d.delta_upper == 0.223);
  CHECK(d.alpha == 0.05);
  CHECK(d.q == 1.0);

  CrossoverSpec uneven = kExample;
  uneven.sigma_d1 = 0.5;
  uneven.sigma_d2 = 0.3;
  const DesignSpec u = to_two_group(uneven);
  CHECK(u.sigma1 == 0.25);
  CHECK(u.sigma2 == 0.15);

  CrossoverSpec bad = kExample;
  bad.sigma_d2 = 0;
  CHECK_THROWS_AS(to_two_group(bad), InvalidArgument);
}

TEST_CASE("crossover sample size for the reference example", "[crossover]") {
  const auto rec = crossover_sample_size(kExample, 0.8, 1024, 1);
  CHECK(rec.n_per_sequence == 18);
  CrossoverSpec asym = kExample;
  asym.delta_lower = -0.123;
  CHECK(crossover_sample_size(asym, 0.8, 1024, 1).n_per_sequence == 24);
}

TEST_CASE("crossover equals the two-group curve on the halved design", "[crossover]") {
  const auto rec = crossover_sample_size(kExample, 0.8, 512, 4);
  const auto direct = power_curve(to_two_group(kExample), 0.8, 512, 4);
  CHECK(rec.curve.n_star_final == direct.n_star_final);
  CHECK(rec.n_per_sequence == direct.rec_n1);
  CHECK(rec.n_sequence2 == direct.rec_n2);
}

TEST_CASE("censoring at a tiny bound is reported", "[crossover]") {
  CHECK_THROWS_AS(crossover_sample_size(kExample, 0.8, 256, 1, {3.0, 1e-6, 0, 3}), BoundTooSmall);
}

TEST_CASE("chow sample size", "[crossover]") {
  CHECK(chow_sample_size(0.05, 0.4, 0.223, 0.05, 0.2) == 24);
  CHECK(chow_sample_size(0, 0.4, 4.0, 0.05, 0.2) == 2);
  const int n = chow_sample_size(0.05, 0.4, 0.223, 0.05, 0.1);
  CHECK(n == chow_by_scan(0.05, 0.4, 0.223, 0.05, 0.1));
  CHECK(n > 24);
  CHECK_THROWS_AS(chow_sample_size(0.3, 0.4, 0.223, 0.05, 0.2), Infeasible);
  CHECK_THROWS_AS(chow_sample_size(0.223, 0.4, 0.223, 0.05, 0.2), Infeasible);
}

TEST_CASE("chow is conservative relative to the curve", "[crossover]") {
  const int chow = chow_sample_size(0.05, 0.4, 0.223, 0.05, 0.2);
  const int curve = crossover_sample_size(kExample, 0.8, 1024, 2).n_per_sequence;
  CHECK(chow >= curve);
}

TEST_CASE("chow monotonicity", "[crossover]") {
  int previous = 1 << 30;
  for (double du = 0.1; du <= 0.6; du += 0.02) {
    const int n = chow_sample_size(0.02, 0.4, du, 0.05, 0.2);
    CHECK(n <= previous);
    previous = n;
  }
  previous = 0;
  for (double sd = 0.1; sd <= 0.8; sd += 0.05) {
    const int n = chow_sample_size(0.02, sd, 0.223, 0.05, 0.2);
    CHECK(n >= previous);
    previous = n;
  }
}
