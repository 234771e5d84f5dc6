#include "fdlkf/eval.hpp"
#include "fdlkf/io.hpp"
#include "fdlkf/pipeline.hpp"

#include <doctest.h>

#include <sstream>

using namespace fdlkf;

namespace {

SimulationSpec noiseless(TrajectorySpec traj) {
  SimulationSpec spec;
  spec.trajectory = std::move(traj);
  spec.gyro.white_density = 0.0;
  spec.accel.white_density = 0.0;
  spec.mag.white_density = 0.0;
  spec.mag.rate = 10.0;
  return spec;
}

double max_attitude_error(std::span<const AttitudeEstimate> est, std::span<const SensorRecord> recs) {
  double worst = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) {
    const Quaternion d = quat_multiply(est[k].q.conjugate(), euler_to_quat(*recs[k].truth));
    worst = std::max(worst, 2.0 * Vector3(d.x, d.y, d.z).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("noiseless static input is reproduced exactly") {
  // The measurement-layer pitch expression is exact when roll or pitch is zero.
  const EulerAngles single_axis[] = {{}, {0.2, 0.0, 2.0}, {0.0, -0.3, 4.0}, {-0.5, 0.0, 5.5}};
  for (const auto& att : single_axis) {
    const auto recs = simulate(noiseless(scenarios::stationary(10.0, att)));
    for (auto alg : {Algorithm::Dlkf, Algorithm::Cf, Algorithm::GyroOnly}) {
      PipelineConfig cfg;
      cfg.algorithm = alg;
      const auto est = run_pipeline(recs, cfg);
      REQUIRE(est.size() == recs.size());
      CHECK(max_attitude_error(est, recs) < 1e-6);
    }
  }
  const auto recs = simulate(noiseless(scenarios::stationary(10.0, {0.1, -0.2, 2.0})));
  for (auto alg : {Algorithm::Cf, Algorithm::GyroOnly}) {
    PipelineConfig cfg;
    cfg.algorithm = alg;
    CHECK(max_attitude_error(run_pipeline(recs, cfg), recs) < 1e-6);
  }
}

TEST_CASE("noiseless bias is learned by the filter") {
  auto spec = noiseless(scenarios::stationary(30.0));
  spec.gyro.constant_bias = Vector3(0.02, -0.01, 0.015);
  const auto recs = simulate(spec);
  PipelineConfig cfg;
  cfg.align_bias = false;
  const auto est = run_pipeline(recs, cfg);
  const Vector3 err = est.back().bias - spec.gyro.constant_bias;
  for (int i = 0; i < 3; ++i) CHECK(std::abs(err(i)) < 0.05 * std::abs(spec.gyro.constant_bias(i)));
}

TEST_CASE("alignment") {
  auto spec = noiseless(scenarios::stationary(2.0, {0.1, 0.2, 3.0}));
  spec.gyro.constant_bias = Vector3(0.01, 0.0, 0.0);
  const auto recs = simulate(spec);
  const auto al = initial_alignment(recs, 1.0, {});
  const auto e = quat_to_euler(al.q);
  CHECK(e.roll == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(e.pitch == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(e.yaw == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(al.bias.x() == doctest::Approx(0.01));
  CHECK(al.samples == 251);

  auto bad = recs;
  for (auto& r : bad) r.accel = Vector3(3, 0, -3);
  CHECK_THROWS_AS(initial_alignment(bad, 1.0, {}), std::runtime_error);
}

TEST_CASE("mag epochs at 10 Hz and 50 Hz") {
  auto spec = scenarios::benchmark_simulation(2);
  spec.trajectory.segments.resize(17);
  for (double rate : {10.0, 50.0}) {
    spec.mag.rate = rate;
    const auto recs = simulate(spec);
    PipelineConfig cfg;
    cfg.mag_rate = rate;
    FusionEngine eng(cfg, initial_alignment(recs, cfg.alignment_duration, cfg.fast_euler), recs[0].t);
    for (std::size_t k = 1; k < recs.size(); ++k) {
      eng.step(recs[k]);
      REQUIRE(min_eigenvalue(eng.filter().P) >= -1e-10);
    }
    const double span = recs.back().t - recs.front().t;
    CHECK(eng.mag_updates() == doctest::Approx(span * rate).epsilon(0.01));
    CHECK(eng.accel_updates() > 0);
  }
}

TEST_CASE("missing mag samples skip the heading layer") {
  auto recs = simulate(noiseless(scenarios::stationary(3.0)));
  for (auto& r : recs) r.mag = Vector3::Constant(NAN);
  recs[0].mag = MagModel::default_field();
  PipelineConfig cfg;
  cfg.alignment_duration = 0.0;
  FusionEngine eng(cfg, initial_alignment(recs, 0.0, cfg.fast_euler), 0.0);
  for (std::size_t k = 1; k < recs.size(); ++k) eng.step(recs[k]);
  CHECK(eng.mag_updates() == 0);
}

TEST_CASE("determinism") {
  const auto recs = simulate(scenarios::benchmark_simulation(4));
  const PipelineConfig cfg;
  const auto a = run_pipeline(recs, cfg);
  const auto b = run_pipeline(recs, cfg);
  std::ostringstream sa, sb;
  write_estimates(sa, a);
  write_estimates(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("input errors carry the sample index") {
  auto recs = simulate(noiseless(scenarios::stationary(2.0)));
  recs[300].t = recs[299].t;
  try {
    run_pipeline(recs, PipelineConfig{});
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("sample 300") != std::string::npos);
  }
  CHECK(run_pipeline(std::vector<SensorRecord>{}, PipelineConfig{}).empty());
}

TEST_CASE("names") {
  CHECK(parse_algorithm("cf") == Algorithm::Cf);
  CHECK(parse_algorithm(to_string(Algorithm::GyroOnly)) == Algorithm::GyroOnly);
  CHECK(parse_coupling("dcm") == BiasCoupling::Dcm);
  CHECK_THROWS(parse_algorithm("ekf"));
}
