#include "fdlkf/sim.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fdlkf;

namespace {

SimulationSpec quiet(TrajectorySpec traj) {
  SimulationSpec spec;
  spec.trajectory = std::move(traj);
  spec.gyro.white_density = 0.0;
  spec.accel.white_density = 0.0;
  spec.mag.white_density = 0.0;
  return spec;
}

}  // namespace

TEST_CASE("benchmark layout") {
  const auto traj = scenarios::benchmark();
  CHECK(traj.duration() == doctest::Approx(120.0));
  const auto [a0, a1] = scenarios::benchmark_accel_window();
  const auto& seg = traj.segments[segment_at(traj, 0.5 * (a0 + a1))];
  CHECK(seg.linear_accel.x() == 3.0);
  CHECK(seg.rate.isZero(0.0));

  const auto truth = integrate_truth(traj, 250.0);
  REQUIRE(truth.size() == 30001);
  const auto mid = quat_to_euler(truth[static_cast<std::size_t>(50.0 * 250)]);
  CHECK(mid.yaw == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(mid.roll) < 1e-9);
  CHECK(std::abs(mid.pitch) < 1e-9);
  const auto peak = quat_to_euler(truth[static_cast<std::size_t>(12.0 * 250)]);
  CHECK(peak.roll == doctest::Approx(20.0 * kDegToRad).epsilon(1e-9));
}

TEST_CASE("segment_at uses half-open intervals ending at each boundary") {
  TrajectorySpec traj;
  traj.segments = {{1.0, {}, {}}, {2.0, {}, {}}};
  CHECK(segment_at(traj, 0.5) == 0);
  CHECK(segment_at(traj, 1.0) == 0);
  CHECK(segment_at(traj, 1.001) == 1);
  CHECK(segment_at(traj, 3.0) == 1);
}

TEST_CASE("noiseless sensors are exact") {
  auto spec = quiet(scenarios::benchmark());
  const auto recs = simulate(spec);
  const auto truth = integrate_truth(spec.trajectory, spec.rate);
  REQUIRE(recs.size() == truth.size());
  for (std::size_t k = 0; k < recs.size(); k += 97) {
    const Dcm cnb = quat_to_dcm(truth[k]).transpose();
    const Vector3 lin = spec.trajectory.segments[segment_at(spec.trajectory, recs[k].t)].linear_accel;
    const Vector3 f = -cnb * Vector3(0, 0, 9.81) + (recs[k].t > 0.0 ? lin : Vector3::Zero());
    CHECK((recs[k].accel - f).norm() < 1e-9);
    CHECK((recs[k].mag - cnb * spec.mag.field_ned).norm() < 1e-9);
  }
}

TEST_CASE("re-integrating truth rates reproduces truth") {
  const auto traj = scenarios::benchmark();
  const auto truth = integrate_truth(traj, 250.0);
  Quaternion q = truth.front();
  double worst = 0.0;
  for (std::size_t k = 1; k < truth.size(); ++k) {
    const Vector3 w = traj.segments[segment_at(traj, k / 250.0)].rate;
    q = quat_multiply(q, rotvec_to_quat(w / 250.0));
    const Quaternion d = quat_multiply(q.conjugate(), truth[k]);
    worst = std::max(worst, Vector3(d.x, d.y, d.z).norm());
    CHECK(std::abs(truth[k].norm() - 1.0) < 1e-12);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("constant bias appears on the gyro") {
  auto spec = quiet(scenarios::stationary(2.0));
  spec.gyro.constant_bias = Vector3(0.02, -0.01, 0.015);
  for (const auto& r : simulate(spec)) CHECK((r.gyro - spec.gyro.constant_bias).norm() < 1e-15);
}

TEST_CASE("mag sample and hold") {
  auto spec = scenarios::stationary_simulation(1.0, Vector3::Zero(), 5);
  const auto recs = simulate(spec);
  std::size_t changes = 0;
  for (std::size_t k = 1; k < recs.size(); ++k) changes += recs[k].mag != recs[k - 1].mag;
  CHECK(changes == 10);
  for (const auto& r : recs) CHECK(r.mag.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Markov drift has the stationary variance") {
  auto spec = quiet(scenarios::stationary(2000.0));
  spec.rate = 50.0;
  spec.gyro.tau_g = 0.5;
  spec.gyro.markov_density = 0.01;
  const auto recs = simulate(spec);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : recs) {
    sum += r.gyro.squaredNorm();
    n += 3;
  }
  const double var = sum / n;
  const double ref = oracle::ou_variance(0.01, 0.5);
  CHECK(std::abs(var - ref) / ref < 0.1);
}

TEST_CASE("determinism") {
  const auto spec = scenarios::benchmark_simulation(9);
  const auto a = simulate(spec);
  const auto b = simulate(spec);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    same = same && a[k].gyro == b[k].gyro && a[k].accel == b[k].accel && a[k].mag == b[k].mag;
  }
  CHECK(same);
  auto other = spec;
  other.seed = 10;
  CHECK(simulate(other)[5].gyro != a[5].gyro);
}

TEST_CASE("spec validation") {
  SimulationSpec spec;
  CHECK_THROWS(simulate(spec));
  spec.trajectory = scenarios::stationary(1.0);
  spec.rate = 0.0;
  CHECK_THROWS(simulate(spec));
  spec.rate = 250.0;
  spec.gyro.white_density = -1.0;
  CHECK_THROWS(simulate(spec));
}
