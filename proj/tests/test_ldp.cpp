#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "projldp/ldp.hpp"
#include "projldp/sphere.hpp"
#include "support.hpp"

using namespace projldp;

TEST_CASE("rate function closed forms") {
  CHECK(rate_function(make_alpha(std::vector<double>{})) == 0.0);
  CHECK(std::isinf(rate_function(make_alpha(std::vector<double>{1.0}))));
  CHECK(std::isinf(rate_function(make_alpha(std::vector<double>{0.6, 0.8}))));
  CHECK(rate_function(make_alpha(std::vector<double>{0.6})) ==
        doctest::Approx(0.22314355131420976).epsilon(1e-14));
}

TEST_CASE("rate function is strictly increasing in the norm") {
  double prev = -1.0;
  for (double norm = 0.0; norm < 0.999; norm += 0.037) {
    const double rate = rate_function(make_alpha(std::vector<double>{norm}));
    CHECK(rate > prev);
    prev = rate;
  }
}

TEST_CASE("rate vanishes only at the empty sequence") {
  CHECK(rate_function(AlphaSequence{}) == 0.0);
  CHECK(rate_function(make_alpha(std::vector<double>{0.0, 0.0})) == 0.0);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.01, 0.5);
  for (int rep = 0; rep < 30; ++rep) {
    CHECK(rate_function(make_alpha(std::vector<double>{u(eng)})) > 0.0);
  }
}

TEST_CASE("sublevel sets are the closed balls of the matching radius") {
  // rate(a) <= c exactly when |a|^2 <= 1 - exp(-2c)
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  for (double c : {0.05, 0.2231435513141, 1.0}) {
    const double ball_sq = 1.0 - std::exp(-2.0 * c);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> v{u(eng), u(eng)};
      const AlphaSequence a = make_alpha(v);
      if (std::abs(a.norm_sq() - ball_sq) < 1e-12) continue;  // knife edge
      CHECK((rate_function(a) <= c) == (a.norm_sq() <= ball_sq));
    }
  }
}

TEST_CASE("window rate bounds") {
  const RateBounds b = window_rate_bounds(WindowSpec({0.6}, 0.1));
  CHECK(b.lower == doctest::Approx(0.14384103622589042).epsilon(1e-13));
  CHECK(b.upper == doctest::Approx(0.22314355131420976).epsilon(1e-13));
  CHECK(b.lower <= b.upper);

  const RateBounds typical = window_rate_bounds(WindowSpec({0.0}, 0.3));
  CHECK(typical.lower == 0.0);
  CHECK(typical.upper == 0.0);

  // no decay guaranteed when the radius swallows the center
  const RateBounds wide = window_rate_bounds(WindowSpec({0.2}, 0.5));
  CHECK(wide.lower == 0.0);
  CHECK(wide.upper > 0.0);

  // both bounds approach the prefix rate as the radius shrinks
  const double target = rate_function(make_alpha(std::vector<double>{0.6}));
  for (double r : {0.1, 0.01, 0.001}) {
    const RateBounds shrink = window_rate_bounds(WindowSpec({0.6}, r));
    CHECK(shrink.lower <= target);
    CHECK(shrink.upper == doctest::Approx(target));
  }
  const RateBounds tiny = window_rate_bounds(WindowSpec({0.6}, 1e-9));
  CHECK(tiny.lower == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("wilson interval") {
  const Wilson all = wilson_interval(1000, 1000);
  CHECK(all.high == 1.0);
  CHECK(all.low > 0.99);
  const Wilson none = wilson_interval(0, 1000);
  CHECK(none.low == 0.0);
  CHECK(none.high < 0.005);
  const Wilson half = wilson_interval(500, 1000);
  CHECK(half.low < 0.5);
  CHECK(half.high > 0.5);
  CHECK(half.high - half.low < 0.07);
}

TEST_CASE("estimate_window_probability on a sure window") {
  // the top order statistic of a 3-vector always lies in [1/sqrt(3), 1)
  const LdpEstimate est =
      estimate_window_probability(3, WindowSpec({0.5}, 0.5), 20000, {4, 0});
  CHECK(est.p_hat == 1.0);
  CHECK(est.ci_high == 1.0);
  CHECK(est.rate_hat == 0.0);
  CHECK(est.status == EstimateStatus::Ok);
}

TEST_CASE("estimate_window_probability against oracle and closed form") {
  // n = 3: coordinates >= 0.85 are mutually exclusive, so
  // P[max in (0.85, 0.95)] = 3[(1 - 0.85) - (1 - 0.95)] = 0.3
  const WindowSpec w({0.9}, 0.05);
  const std::size_t count = 200000;
  const LdpEstimate est = estimate_window_probability(3, w, count, {12, 0});
  CHECK(est.ci_low < 0.3);
  CHECK(est.ci_high > 0.3);

  testsupport::OracleSphere oracle(99);
  int hits = 0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) {
    std::vector<double> v = oracle.draw_order_stats(3);
    const double d = v[0] - 0.9;
    if (d * d < 0.05 * 0.05) ++hits;
  }
  const double freq = static_cast<double>(hits) / draws;
  const double se = std::sqrt(0.3 * 0.7 / draws);
  CHECK(std::abs(est.p_hat - freq) < 4.0 * 2.0 * se);
}

TEST_CASE("zero hits surface as a status, not a number") {
  const LdpEstimate est =
      estimate_window_probability(60, WindowSpec({0.9}, 0.01), 1000, {5, 0});
  CHECK(est.p_hat == 0.0);
  CHECK(est.status == EstimateStatus::ZeroHits);
  CHECK(std::isinf(est.rate_hat));
  CHECK(est.ci_low == 0.0);
  CHECK(est.ci_high > 0.0);  // zero observed hits still leave an upper bound
}

TEST_CASE("conditional estimator agrees with direct sampling") {
  const WindowSpec w({0.6}, 0.1);
  for (int n : {25, 50}) {
    const std::size_t count = 200000;
    const LdpEstimate direct =
        estimate_window_probability(n, w, count, {31, 0});
    const LdpEstimate cond =
        estimate_window_probability_conditional(n, w, count, {32, 0});
    CHECK(cond.method == EstimatorKind::Conditional);
    const double se_direct = (direct.ci_high - direct.ci_low) / 4.0;
    const double se_cond = (cond.ci_high - cond.ci_low) / 4.0;
    CHECK(std::abs(direct.p_hat - cond.p_hat) <
          4.0 * (se_direct + se_cond) + 1e-12);
  }
}

TEST_CASE("conditional estimator matches the n = 3 closed form") {
  const WindowSpec w({0.9}, 0.05);
  const LdpEstimate est =
      estimate_window_probability_conditional(3, w, 200000, {33, 0});
  CHECK(est.ci_low < 0.3);
  CHECK(est.ci_high > 0.3);
  CHECK(est.p_hat == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("bonferroni bounds closed form and shrinkage") {
  // n = 3, x = 0.9: pair term vanishes (0.81 + 0.81 > 1), upper = 3 * 0.1
  const TailBounds b3 = bonferroni_tail_bounds(3, 0.9);
  CHECK(b3.upper == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(b3.lower == doctest::Approx(0.3).epsilon(1e-9));

  const TailBounds near_one = bonferroni_tail_bounds(20, 0.999);
  CHECK(near_one.upper < 1e-20);
  CHECK(near_one.lower >= 0.0);
  CHECK(near_one.lower <= near_one.upper);

  for (double x : {0.2, 0.4, 0.6}) {
    const TailBounds b = bonferroni_tail_bounds(12, x);
    CHECK(b.lower <= b.upper);
    CHECK(b.lower >= 0.0);
    CHECK(b.upper <= 1.0);
  }
}

TEST_CASE("bonferroni bounds contain the oracle max frequency") {
  testsupport::OracleSphere oracle(404);
  for (const auto& [n, x1] : std::vector<std::pair<int, double>>{
           {10, 0.4}, {10, 0.6}, {40, 0.4}}) {
    const TailBounds b = bonferroni_tail_bounds(n, x1);
    const int draws = 200000;
    int hits = 0;
    for (int k = 0; k < draws; ++k) {
      if (oracle.draw_order_stats(n)[0] >= x1) ++hits;
    }
    const Wilson ci =
        wilson_interval(static_cast<std::uint64_t>(hits), draws);
    // the Wilson interval of the frequency must overlap [lower, upper]
    CHECK(std::max(ci.low, b.lower) <= std::min(ci.high, b.upper) + 1e-12);
  }
}

TEST_CASE("empirical rate curve replays deterministically") {
  const WindowSpec w({0.5}, 0.3);
  const std::vector<int> ns{10, 20, 40};
  const auto a = empirical_rate_curve(ns, w, 20000, {77, 0});
  const auto b = empirical_rate_curve(ns, w, 20000, {77, 0});
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p_hat == b[i].p_hat);
    CHECK(a[i].rate_hat == b[i].rate_hat);
    CHECK(a[i].n == ns[i]);
  }
  const auto c = empirical_rate_curve(ns, w, 20000, {78, 0});
  CHECK(a[0].p_hat != c[0].p_hat);

  CHECK_THROWS_AS(
      empirical_rate_curve(std::vector<int>{20, 10}, w, 20000, {1, 0}),
      std::invalid_argument);
}

TEST_CASE("typical windows estimate a vanishing rate") {
  const WindowSpec w({0.0}, 0.5);
  const auto rows = empirical_rate_curve(std::vector<int>{25, 50, 100}, w,
                                         50000, {88, 0});
  CHECK(rows[0].rate_hat > rows[1].rate_hat);
  CHECK(rows[1].rate_hat > rows[2].rate_hat);
  CHECK(rows[2].rate_hat < 0.01);
}

TEST_CASE("auto estimator escalates to conditional when direct is hopeless") {
  const WindowSpec w({0.6}, 0.1);
  const auto rows = empirical_rate_curve(std::vector<int>{25, 100}, w, 20000,
                                         {91, 0}, EstimatorKind::Auto);
  CHECK(rows[0].method == EstimatorKind::Direct);
  CHECK(rows[1].method == EstimatorKind::Conditional);
  CHECK(rows[1].status == EstimateStatus::Ok);
  CHECK(rows[1].rate_hat > rows[0].rate_hat);
}

TEST_CASE("rate confidence interval brackets the point estimate") {
  const LdpEstimate est =
      estimate_window_probability(12, WindowSpec({0.5}, 0.2), 50000, {14, 0});
  CHECK(est.rate_ci_low() <= est.rate_hat);
  CHECK(est.rate_ci_high() >= est.rate_hat);
}
