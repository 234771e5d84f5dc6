#include "fdlkf/eval.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fdlkf;

TEST_CASE("improvement reproduces the reference percentages") {
  CHECK(std::abs(improvement(1.7967, 1.3156) - 36.6) <= 0.1);
  CHECK(std::abs(improvement(1.4317, 1.0091) - 41.9) <= 0.1);
  CHECK(std::abs(improvement(4.0636, 2.850) - 42.6) <= 0.1);
  CHECK_THROWS(improvement(1.0, 0.0));
}

TEST_CASE("rmse wraps yaw residuals") {
  const std::vector<EulerAngles> est{{0, 0, 359.0 * kDegToRad}};
  const std::vector<EulerAngles> truth{{0, 0, 1.0 * kDegToRad}};
  CHECK(rmse(est, truth).yaw == doctest::Approx(2.0));
  CHECK_THROWS(rmse(est, std::vector<EulerAngles>{}));
  CHECK_THROWS(rmse(std::vector<EulerAngles>{}, std::vector<EulerAngles>{}));
}

TEST_CASE("rmse matches the brute-force oracle") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial * 7;
    std::vector<EulerAngles> est(n), truth(n);
    std::vector<double> er(n), tr(n), ep(n), tp(n), ey(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) {
      est[i] = {er[i] = u(rng), ep[i] = u(rng), ey[i] = u(rng)};
      truth[i] = {tr[i] = u(rng), tp[i] = u(rng), ty[i] = u(rng)};
    }
    const auto r = rmse(est, truth);
    CHECK(std::abs(r.roll - oracle::brute_force_rmse_deg(er, tr)) < 1e-12);
    CHECK(std::abs(r.pitch - oracle::brute_force_rmse_deg(ep, tp)) < 1e-12);
    CHECK(std::abs(r.yaw - oracle::brute_force_rmse_deg(ey, ty)) < 1e-12);
  }
}

TEST_CASE("rmse invariant to whole turns of yaw") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<EulerAngles> est(100), shifted(100), truth(100);
  for (std::size_t i = 0; i < 100; ++i) {
    est[i] = {0, 0, u(rng)};
    shifted[i] = {0, 0, est[i].yaw + kTwoPi};
    truth[i] = {0, 0, u(rng)};
  }
  CHECK(rmse(est, truth).yaw == doctest::Approx(rmse(shifted, truth).yaw).epsilon(1e-12));
}

TEST_CASE("nearest-neighbour alignment") {
  const std::vector<TimedAngles> truth{{0.0, {}}, {0.1, {}}, {0.2, {}}, {0.3, {}}};
  const std::vector<TimedAngles> est{{0.01, {}}, {0.14, {}}, {0.26, {}}, {0.5, {}}};
  CHECK(half_sample_period(truth) == doctest::Approx(0.05));
  const auto pairs = align_nearest(est, truth, 0.05);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(pairs[1] == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(pairs[2] == std::pair<std::size_t, std::size_t>{2, 3});
}

TEST_CASE("evaluate and reports") {
  std::vector<TimedAngles> truth, base, cand;
  for (int i = 0; i < 10; ++i) {
    truth.push_back({i * 0.1, {0, 0, 0}});
    base.push_back({i * 0.1, {2 * kDegToRad, 2 * kDegToRad, 4 * kDegToRad}});
    cand.push_back({i * 0.1, {1 * kDegToRad, 1 * kDegToRad, 2 * kDegToRad}});
  }
  const auto b = evaluate("CF", "x", base, truth);
  const auto c = evaluate("DLKF", "y", cand, truth);
  CHECK(c.rmse.roll == doctest::Approx(1.0));
  const std::string cmp = format_comparison(b, c);
  CHECK(cmp.find("improvement_roll_pct=100") != std::string::npos);
  CHECK(format_report(c).find("rmse_yaw_deg=2") != std::string::npos);
  CHECK_THROWS(evaluate("none", "", cand, std::vector<TimedAngles>{{100.0, {}}}));
}

TEST_CASE("config_digest is stable") {
  CHECK(config_digest("") == "cbf29ce484222325");
  CHECK(config_digest("a") == "af63dc4c8601ec8c");
  CHECK(config_digest("abc") != config_digest("abd"));
}
