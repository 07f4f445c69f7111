#include <catch2/catch_amalgamated.hpp>

#include "property_checks.hpp"

using namespace segpower;

namespace {

const DesignSpec kMotivating{-4.0, 18.0, 15.0, -19.2, 19.2, 0.05, 1.0};

void report(const props::Tally& t) {
  INFO("checked " << t.checked << ", mismatches " << t.mismatches);
  CHECK(t.ok());
}

}  // namespace

TEST_CASE("rejects equals the explicit pair of one-sided tests", "[property]") {
  const auto t = props::rejection_equivalence(10000, 17);
  CHECK(t.checked > 9900);
  report(t);
}

TEST_CASE("decisions are invariant to scale and shift", "[property]") {
  SECTION("power-of-two scales are exact") {
    report(props::invariance(2.0, 0.0, true, 1024, 5));
    report(props::invariance(0.5, 0.0, true, 1024, 6));
  }
  SECTION("other scales away from the boundary") {
    report(props::invariance(3.0, 0.0, false, 1024, 7));
    report(props::invariance(0.1, 0.0, false, 1024, 8));
  }
  SECTION("common shift of mean and limits") {
    report(props::invariance(1.0, 7.25, false, 1024, 9));
    report(props::invariance(1.0, -40.0, false, 1024, 10));
  }
}

TEST_CASE("power-curve ECDF agrees with point-wise rejections", "[property]") {
  std::size_t unique = 0;
  const auto t = props::ecdf_matches_pointwise(kMotivating, 256, 11, 60.0, &unique);
  CHECK(unique > 240);
  report(t);

  DesignSpec shifted = kMotivating;
  shifted.mu_diff = -12.0;
  shifted.sigma1 = shifted.sigma2 = 16.5;
  report(props::ecdf_matches_pointwise(shifted, 256, 12, 100.0));
}

TEST_CASE("quantile kernels round-trip within 1e-9", "[property]") {
  report(props::special_round_trips());
}

TEST_CASE("decisions are monotone in alpha and in the limits", "[property]") {
  report(props::monotone_decisions(2048, 13));
}

TEST_CASE("results do not depend on the thread count", "[property]") {
  CHECK(props::thread_count_invariant(kMotivating, 21));
}

TEST_CASE("ECDF is a nondecreasing step function ending at the uncensored share", "[property]") {
  const PowerCurve c = power_curve(kMotivating, 0.8, 1024, 3);
  double prev = 0.0, prev_n = 0.0;
  for (const auto& [n, p] : c.ecdf_steps()) {
    CHECK(n > prev_n);
    CHECK(p > prev);
    CHECK(c.ecdf(n) == p);
    prev = p;
    prev_n = n;
  }
  CHECK(prev == 1.0 - static_cast<double>(c.censored_count()) / 1024.0);
  CHECK(c.ecdf(c.n_star_final) >= 0.8);
}
