#include "fdlkf/fasteuler.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fdlkf;

namespace {

Vector3 specific_force(double roll, double pitch, double g = 9.81) {
  return -oracle::cbn(roll, pitch, 0.0).transpose() * Vector3(0, 0, g);
}

}  // namespace

TEST_CASE("accel_roll_pitch examples") {
  const FastEulerConfig cfg;
  auto rp = accel_roll_pitch({0, 0, -9.81}, cfg);
  REQUIRE(rp);
  CHECK(rp->roll == 0.0);
  CHECK(rp->pitch == 0.0);

  rp = accel_roll_pitch({0, -4.905, -8.4957}, cfg);
  REQUIRE(rp);
  CHECK(rp->roll == doctest::Approx(kPi / 6).epsilon(1e-4));
  CHECK(rp->pitch == 0.0);

  CHECK_FALSE(accel_roll_pitch({3, 0, -3}, cfg));

  rp = accel_roll_pitch({4.905, 0, -8.4957}, cfg);
  REQUIRE(rp);
  CHECK(rp->pitch == doctest::Approx(kPi / 6).epsilon(1e-4));
  CHECK(rp->roll == 0.0);

  CHECK_FALSE(accel_roll_pitch(Vector3::Zero(), cfg));
  CHECK_FALSE(accel_roll_pitch({NAN, 0, -9.81}, cfg));
}

TEST_CASE("mag_yaw examples") {
  CHECK(*mag_yaw({1, 0, 0}, 0, 0) == 0.0);
  CHECK(*mag_yaw({0, -1, 0}, 0, 0) == doctest::Approx(kPi / 2));
  CHECK(*mag_yaw({0, 1, 0}, 0, 0) == doctest::Approx(3 * kPi / 2));
  CHECK_FALSE(mag_yaw(Vector3::Zero(), 0, 0));
  // magnitude does not matter
  CHECK(*mag_yaw({0, -300, 0}, 0, 0) == doctest::Approx(kPi / 2));
}

TEST_CASE("roll round trip at zero pitch") {
  const FastEulerConfig cfg;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-80.0 * kDegToRad, 80.0 * kDegToRad);
  for (int i = 0; i < 1000; ++i) {
    const double roll = u(rng);
    const auto rp = accel_roll_pitch(specific_force(roll, 0.0), cfg);
    REQUIRE(rp);
    CHECK(std::abs(rp->roll - roll) < 1e-9);
  }
}

TEST_CASE("pitch round trip at zero roll") {
  const FastEulerConfig cfg;
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-80.0 * kDegToRad, 80.0 * kDegToRad);
  for (int i = 0; i < 1000; ++i) {
    const double pitch = u(rng);
    const auto rp = accel_roll_pitch(specific_force(0.0, pitch), cfg);
    REQUIRE(rp);
    CHECK(std::abs(rp->pitch - pitch) < 1e-9);
  }
}

TEST_CASE("yaw round trip against brute-force search") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> tilt(-60.0 * kDegToRad, 60.0 * kDegToRad);
  std::uniform_real_distribution<double> heading(0.0, kTwoPi);
  std::uniform_real_distribution<double> dip(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const double roll = tilt(rng), pitch = tilt(rng), yaw = heading(rng);
    const Vector3 field(1.0, 0.0, dip(rng));
    const Vector3 mb = oracle::cbn(roll, pitch, yaw).transpose() * field;
    const double got = *mag_yaw(mb, roll, pitch);
    const double ref = oracle::brute_force_yaw(mb, roll, pitch);
    CHECK(std::abs(wrap_pi(got - yaw)) < 1e-6);
    CHECK(std::abs(wrap_pi(got - ref)) < 1e-6);
  }
}

TEST_CASE("gate monotonicity") {
  const FastEulerConfig cfg;
  std::mt19937_64 rng(24);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Vector3 dir = Vector3(n(rng), n(rng), n(rng)).normalized();
    const double m1 = 9.81 + 2.0 * n(rng);
    const double shrink = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double m2 = 9.81 + (m1 - 9.81) * shrink;
    if (accel_gate_passes(dir * m1, cfg)) CHECK(accel_gate_passes(dir * m2, cfg));
  }
}

TEST_CASE("fast_euler tilt source") {
  const FastEulerConfig cfg;
  const double roll = 0.3, pitch = 0.0, yaw = 1.0;
  const Vector3 mb = oracle::cbn(roll, pitch, yaw).transpose() * Vector3(0.5, 0, 0.866);

  auto m = fast_euler(specific_force(roll, pitch), mb, cfg);
  REQUIRE(m.roll);
  REQUIRE(m.yaw);
  CHECK(*m.yaw == doctest::Approx(yaw).epsilon(1e-9));

  // gated accel: no yaw without a fallback, yaw from the fallback otherwise
  m = fast_euler({3, 0, -3}, mb, cfg);
  CHECK_FALSE(m.roll);
  CHECK_FALSE(m.yaw);
  m = fast_euler({3, 0, -3}, mb, cfg, RollPitch{roll, pitch});
  REQUIRE(m.yaw);
  CHECK(*m.yaw == doctest::Approx(yaw).epsilon(1e-9));
}

TEST_CASE("config validation") {
  FastEulerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.accel_gate = -1.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.gravity = 0.0;
  CHECK_THROWS(cfg.validate());
}
