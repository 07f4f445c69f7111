#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "segpower/curve.hpp"
#include "segpower/error.hpp"
#include "segpower/root.hpp"
#include "segpower/special.hpp"

using namespace segpower;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const DesignSpec kMotivating{-4.0, 18.0, 15.0, -19.2, 19.2, 0.05, 1.0};
const UnitPoint kFixture{0.184, 0.231, 0.449};

}  // namespace

TEST_CASE("brent_root returns the nonpositive side of a tight bracket", "[curve][root]") {
  auto f = [](double x) { return 5.0 - x; };
  const auto r = brent_root(f, 1.0, f(1.0), 9.0, f(9.0), 1e-9);
  CHECK(r.fx <= 0.0);
  CHECK(r.x >= 5.0);
  CHECK(r.x - 5.0 <= 1e-9 + 1e-14);

  auto cubic = [](double x) { return (x - 2.5) * (x * x + 1.0) * -1.0; };
  const auto c = brent_root(cubic, 0.0, cubic(0.0), 10.0, cubic(10.0), 1e-7);
  CHECK(cubic(c.x) <= 0.0);
  CHECK_THAT(c.x, WithinAbs(2.5, 1e-7 + 1e-12));

  // Reversed orientation: f > 0 to the right.
  auto g = [](double x) { return x * x - 2.0; };
  const auto s = brent_root(g, 3.0, g(3.0), 0.0, g(0.0), 1e-10);
  CHECK(g(s.x) <= 0.0);
  CHECK_THAT(s.x, WithinAbs(std::sqrt(2.0), 1e-10 + 1e-14));
}

TEST_CASE("bracket grid", "[curve]") {
  const auto grid = bracket_grid(2.0, 65536.0);
  const std::vector<double> head{2, 3, 4, 6, 8, 12, 16, 24};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(grid[i] == head[i]);
  CHECK(grid.back() == 65536.0);
  CHECK(grid[grid.size() - 2] == 49152.0);
  CHECK(bracket_grid(2.0, 10.0) == std::vector<double>{2, 3, 4, 6, 8, 10});
  CHECK(bracket_grid(2.0, 2.0) == std::vector<double>{2});
}

TEST_CASE("se_of_n examples", "[curve]") {
  SECTION("median draws: quadrupling n roughly halves se") {
    const UnitPoint u{0.5, 0.5, 0.5};
    for (double n : {10.0, 25.0, 100.0}) {
      const double ratio = se_of_n(u, kMotivating, n) / se_of_n(u, kMotivating, 4 * n);
      CHECK_THAT(ratio, WithinRel(2.0, 0.05));
    }
  }
  SECTION("equal sigmas and draws collapse to a closed form") {
    DesignSpec spec = kMotivating;
    spec.sigma1 = spec.sigma2 = 12.0;
    const UnitPoint u{0.37, 0.37, 0.6};
    for (double n : {2.0, 3.5, 17.0}) {
      const double x = static_cast<double>(oracle::inv_chisq(0.37L, n - 1.0L));
      CHECK_THAT(se_of_n(u, spec, n), WithinRel(12.0 * std::sqrt(2.0 * x / ((n - 1) * n)), 1e-10));
    }
  }
  SECTION("fixture rises to a peak near n = 4 then decays") {
    std::vector<double> se;
    for (int n = 2; n <= 8; ++n) se.push_back(se_of_n(kFixture, kMotivating, n));
    CHECK(se[0] < se[1]);
    CHECK(se[1] < se[2]);
    CHECK(se[2] > se[3]);
    for (std::size_t i = 3; i + 1 < se.size(); ++i) CHECK(se[i] > se[i + 1]);
  }
  SECTION("domain") {
    CHECK_THROWS_AS(se_of_n(kFixture, kMotivating, 1.5), DomainError);
    DesignSpec half = kMotivating;
    half.q = 0.5;
    CHECK_THROWS_AS(se_of_n(kFixture, half, 3.0), DomainError);
    CHECK_NOTHROW(se_of_n(kFixture, half, 4.0));
    CHECK(curve_min_n(half) == 4.0);
  }
}

TEST_CASE("lambda_of_n examples", "[curve]") {
  SECTION("u3 = 0.5 keeps d_bar at mu_diff") {
    const UnitPoint u{0.2, 0.7, 0.5};
    for (double n : {2.0, 6.3, 40.0}) {
      const auto ev = evaluate_curve(u, kMotivating, n);
      CHECK_THAT(ev.lambda, WithinRel(15.2 / special::t_quantile(0.95, ev.stats.nu), 1e-14));
    }
  }
  SECTION("d_bar outside the limits gives zero") {
    const UnitPoint u{0.5, 0.5, 1e-12};
    CHECK(lambda_of_n(u, kMotivating, 2.0) == 0.0);
    CHECK(g_of_n(u, kMotivating, 2.0) == se_of_n(u, kMotivating, 2.0));
  }
  SECTION("large-n limit") {
    const UnitPoint u{0.5, 0.5, 0.5};
    const double limit = 15.2 / special::inv_norm(0.95);
    CHECK_THAT(limit, WithinAbs(9.2408, 1e-3));
    CHECK_THAT(lambda_of_n(u, kMotivating, 1e6), WithinAbs(limit, 1e-3));
  }
}

TEST_CASE("smallest_crossing examples", "[curve]") {
  SECTION("tiny variances at the centre cross at the minimum") {
    const auto p = smallest_crossing({1e-6, 1e-6, 0.5}, kMotivating, 65536, 1e-6);
    CHECK(p.crossing_n == 2.0);
    CHECK_FALSE(p.censored());
  }
  SECTION("fixture is inside at n = 2") {
    const auto p = smallest_crossing(kFixture, kMotivating, 65536, 1e-6);
    CHECK(p.crossing_n < 3.0);
  }
  SECTION("extreme u3 pushes the crossing out, matching a dense grid scan") {
    double previous = 0.0;
    for (double u3 : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
      const UnitPoint u{0.5, 0.5, u3};
      const auto p = smallest_crossing(u, kMotivating, 65536, 1e-6);
      auto g = [&](double n) { return g_of_n(u, kMotivating, n); };
      const double dense = oracle::first_nonpositive(g, 2.0, 500.0, 1e-3);
      INFO("u3 = " << u3);
      REQUIRE(std::isfinite(dense));
      CHECK(p.crossing_n <= dense + 1e-6);
      CHECK(p.crossing_n > dense - 1e-3 - 1e-6);
      CHECK(p.crossing_n >= previous);
      previous = p.crossing_n;
      // Root residual: nonpositive at the answer, positive just below it.
      CHECK(g(p.crossing_n) <= 0.0);
      CHECK(g(p.crossing_n - 2e-6) > 0.0);
    }
  }
  SECTION("censored when B is too small") {
    const auto p = smallest_crossing({0.5, 0.5, 0.9999}, kMotivating, 3.0, 1e-6);
    CHECK(p.censored());
  }
  SECTION("preconditions") {
    DesignSpec outside = kMotivating;
    outside.mu_diff = -30;
    CHECK_THROWS_AS(smallest_crossing(kFixture, outside, 100, 1e-6), InvalidArgument);
    CHECK_THROWS_AS(smallest_crossing(kFixture, kMotivating, 1.0, 1e-6), InvalidArgument);
    CHECK_THROWS_AS(smallest_crossing(kFixture, kMotivating, 100, 0.0), InvalidArgument);
  }
}

TEST_CASE("re-solving around a reference size", "[curve]") {
  // The fixture is inside at 2, outside at 3 and back inside by 3.5.
  const double above = next_crossing_above(kFixture, kMotivating, 2.6, 65536, 1e-6);
  CHECK(above > 3.0);
  CHECK(above < 4.0);
  CHECK(g_of_n(kFixture, kMotivating, above) <= 0.0);
  const double below = last_crossing_below(kFixture, kMotivating, 8.0, 1e-6);
  CHECK_THAT(below, WithinAbs(above, 2e-6));
  CHECK_THROWS_AS(last_crossing_below(kFixture, kMotivating, 2.6, 1e-6), InvalidArgument);
}

TEST_CASE("power_curve on the motivating design", "[curve]") {
  const PowerCurve c = power_curve(kMotivating, 0.8, 1024, 11);
  CHECK(c.rec_n1 >= 16);
  CHECK(c.rec_n1 <= 19);
  CHECK(c.rec_n2 == c.rec_n1);
  CHECK(c.rec_n1 == static_cast<int>(std::ceil(c.n_star_final)));
  CHECK(c.ecdf(c.n_star_final) >= 0.8);
  CHECK(c.censored_count() == 0);
  CHECK(c.warnings.empty());
  CHECK(c.solutions.size() == 1024);

  const auto steps = c.ecdf_steps();
  REQUIRE_FALSE(steps.empty());
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i].first > steps[i - 1].first);
    CHECK(steps[i].second > steps[i - 1].second);
  }
  CHECK(steps.back().second == 1.0);
  CHECK(steps.front().second > 0.0);
}

TEST_CASE("power_curve with identical points", "[curve]") {
  std::vector<double> values;
  for (int i = 0; i < 64; ++i) values.insert(values.end(), {0.4, 0.6, 0.55});
  const qrng::PointSet points(3, values);
  const PowerCurve c = power_curve(kMotivating, 0.8, points);
  const double single = smallest_crossing({0.4, 0.6, 0.55}, kMotivating, 65536, 1e-6).crossing_n;
  CHECK(c.n_star_initial == single);
  CHECK(c.n_star_final == single);
  CHECK(c.ecdf_steps().size() == 1);
  CHECK(c.ecdf(single) == 1.0);
  CHECK(c.ecdf(single - 1e-3) == 0.0);
}

TEST_CASE("power_curve errors", "[curve]") {
  CHECK_THROWS_AS(power_curve(kMotivating, 0.8, 256, 1, {4.0, 1e-6, 0, 3}), BoundTooSmall);
  try {
    power_curve(kMotivating, 0.8, 256, 1, {4.0, 1e-6, 0, 3});
  } catch (const BoundTooSmall& e) {
    CHECK(e.bound() == 4.0);
  }
  CHECK_THROWS_AS(power_curve(kMotivating, 1.0, 256, 1), InvalidArgument);
  CHECK_THROWS_AS(power_curve(kMotivating, 0.0, 256, 1), InvalidArgument);
  DesignSpec outside = kMotivating;
  outside.mu_diff = 19.2;
  CHECK_THROWS_AS(power_curve(outside, 0.8, 256, 1), InvalidArgument);
}

TEST_CASE("type-1 quantile", "[curve]") {
  std::vector<CurvePoint> s(5);
  const double xs[] = {7, 3, kCensored, 5, 4};
  for (int i = 0; i < 5; ++i) s[i].crossing_n = xs[i];
  CHECK(crossing_quantile(s, 0.2) == 3);
  CHECK(crossing_quantile(s, 0.21) == 4);
  CHECK(crossing_quantile(s, 0.6) == 5);
  CHECK(crossing_quantile(s, 0.8) == 7);
  CHECK(crossing_quantile(s, 0.81) == kCensored);
}

TEST_CASE("recommendation never drops as the target rises", "[curve]") {
  int previous = 0;
  for (double target : {0.3, 0.5, 0.7, 0.8, 0.9, 0.95}) {
    const PowerCurve c = power_curve(kMotivating, target, 1024, 21);
    CHECK(c.rec_n1 >= previous);
    previous = c.rec_n1;
  }
}

TEST_CASE("safeguard makes the ECDF exact at the reference size", "[curve]") {
  // Small targets land where multiple crossings are common.
  for (double target : {0.02, 0.05, 0.2, 0.8}) {
    for (const DesignSpec& spec : {kMotivating, DesignSpec{-16.0, 19.5, 13.0, -19.2, 19.2, 0.05, 1.0}}) {
      const auto points = qrng::randomized_sobol(3, 1024, 5).points;
      const PowerCurve c = power_curve(spec, target, points);
      if (!c.warnings.empty()) continue;
      std::size_t inside = 0, below = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (g_of_n(to_unit_point(points[i]), spec, c.n_star_final) <= 0.0) ++inside;
        if (c.solutions[i].crossing_n <= c.n_star_final) ++below;
      }
      INFO("target " << target << ", mu " << spec.mu_diff);
      CHECK(inside == below);
    }
  }
}

TEST_CASE("power_curve is independent of the thread count", "[curve]") {
  const PowerCurve a = power_curve(kMotivating, 0.8, 512, 3, {65536, 1e-6, 1, 3});
  const PowerCurve b = power_curve(kMotivating, 0.8, 512, 3, {65536, 1e-6, 5, 3});
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i)
    CHECK(a.solutions[i].crossing_n == b.solutions[i].crossing_n);
  CHECK(a.n_star_final == b.n_star_final);
}
