#include "fdlkf/sim.hpp"

#include <cmath>
#include <random>
#include <algorithm>
#include <stdexcept>

namespace fdlkf {

double TrajectorySpec::duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

void TrajectorySpec::validate() const {
  if (segments.empty()) throw std::invalid_argument("trajectory: no segments");
  for (const auto& s : segments) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw std::invalid_argument("trajectory: segment durations must be positive");
    }
    if (!is_finite(s.rate) || !is_finite(s.linear_accel)) {
      throw std::invalid_argument("trajectory: non-finite segment rate or acceleration");
    }
  }
}

void GyroModel::validate() const {
  if (!is_finite(constant_bias)) throw std::invalid_argument("gyro model: non-finite bias");
  if (!(tau_g > 0.0)) throw std::invalid_argument("gyro model: tau_g must be positive");
  if (!(markov_density >= 0.0) || !(white_density >= 0.0)) {
    throw std::invalid_argument("gyro model: noise densities must be non-negative");
  }
}

void AccelModel::validate() const {
  if (!(white_density >= 0.0)) throw std::invalid_argument("accel model: negative noise density");
  if (!(gravity > 0.0)) throw std::invalid_argument("accel model: gravity must be positive");
}

Vector3 MagModel::default_field() {
  return Vector3(std::cos(60.0 * kDegToRad), 0.0, std::sin(60.0 * kDegToRad)).normalized();
}

void MagModel::validate() const {
  if (!is_finite(field_ned) || std::hypot(field_ned.x(), field_ned.y()) <= 0.0) {
    throw std::invalid_argument("mag model: field needs a horizontal component");
  }
  if (!(white_density >= 0.0)) throw std::invalid_argument("mag model: negative noise density");
  if (!(rate >= 0.0)) throw std::invalid_argument("mag model: negative rate");
}

std::size_t segment_at(const TrajectorySpec& traj, double t) {
  double end = 0.0;
  for (std::size_t i = 0; i < traj.segments.size(); ++i) {
    end += traj.segments[i].duration;
    // Intervals are (start, end]; t = 0 belongs to the first segment.
    if (t <= end + 1e-12) return i;
  }
  return traj.segments.size() - 1;
}

std::vector<Quaternion> integrate_truth(const TrajectorySpec& traj, double rate) {
  traj.validate();
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("simulate: rate must be positive");

  const auto n = static_cast<std::size_t>(std::llround(traj.duration() * rate));
  std::vector<Quaternion> truth;
  truth.reserve(n + 1);

  Quaternion seg_start = euler_to_quat(traj.initial);
  double seg_t0 = 0.0;
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / rate;
    // Advance past finished segments, composing each one's full rotation.
    while (seg + 1 < traj.segments.size() && t > seg_t0 + traj.segments[seg].duration + 1e-12) {
      const auto& s = traj.segments[seg];
      seg_start = quat_multiply(seg_start, rotvec_to_quat(s.rate * s.duration));
      seg_t0 += s.duration;
      ++seg;
    }
    truth.push_back(quat_multiply(seg_start, rotvec_to_quat(traj.segments[seg].rate * (t - seg_t0))));
  }
  return truth;
}

std::vector<SensorRecord> simulate(const TrajectorySpec& traj, const GyroModel& gm,
                                   const AccelModel& am, const MagModel& mm, double rate,
                                   std::uint64_t seed) {
  gm.validate();
  am.validate();
  mm.validate();
  const std::vector<Quaternion> truth = integrate_truth(traj, rate);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const auto gaussian3 = [&](double sigma) {
    if (sigma == 0.0) return Vector3(Vector3::Zero());
    const double a = unit(rng), b = unit(rng), c = unit(rng);
    return Vector3(Vector3(a, b, c) * sigma);
  };

  const double dt = 1.0 / rate;
  const double gyro_sigma = gm.white_density * std::sqrt(rate);
  const double accel_sigma = am.white_density * std::sqrt(rate);
  const double mag_rate = mm.rate > 0.0 ? std::min(mm.rate, rate) : rate;
  const double mag_sigma = mm.white_density * std::sqrt(mag_rate);
  const double markov_step_sigma = gm.markov_density * std::sqrt(dt);
  const double decay = 1.0 - dt / gm.tau_g;

  // Start the drift from its stationary distribution.
  Vector3 drift = gaussian3(gm.markov_density * std::sqrt(gm.tau_g / 2.0));
  const Vector3 gravity_ned(0.0, 0.0, am.gravity);
  const Vector3 field = mm.field_ned.normalized();

  std::vector<SensorRecord> out;
  out.reserve(truth.size());
  Vector3 held_mag = Vector3::Zero();
  double next_mag_t = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const Segment& seg = traj.segments[segment_at(traj, t)];
    const Dcm cnb = quat_to_dcm(truth[k]).transpose();

    SensorRecord rec;
    rec.t = t;
    rec.gyro = seg.rate + gm.constant_bias + drift + gaussian3(gyro_sigma);
    rec.accel = -(cnb * gravity_ned) + seg.linear_accel + gaussian3(accel_sigma);
    if (t + 1e-9 >= next_mag_t) {
      const Vector3 m = cnb * field + gaussian3(mag_sigma);
      held_mag = m.normalized();
      next_mag_t += 1.0 / mag_rate;
    }
    rec.mag = held_mag;
    rec.truth = quat_to_euler(truth[k]);
    out.push_back(rec);

    drift = decay * drift + gaussian3(markov_step_sigma);
  }
  return out;
}

std::vector<SensorRecord> simulate(const SimulationSpec& spec) {
  return simulate(spec.trajectory, spec.gyro, spec.accel, spec.mag, spec.rate, spec.seed);
}

namespace scenarios {

TrajectorySpec stationary(double duration, EulerAngles attitude) {
  TrajectorySpec traj;
  traj.initial = attitude;
  traj.segments.push_back({duration, Vector3::Zero(), Vector3::Zero()});
  return traj;
}

TrajectorySpec benchmark() {
  const double r20 = 20.0 * kDegToRad;
  const auto hold = [](double d) { return Segment{d, Vector3::Zero(), Vector3::Zero()}; };
  const auto turn = [](double d, Vector3 rate) { return Segment{d, rate, Vector3::Zero()}; };

  TrajectorySpec traj;
  traj.segments = {
      hold(10.0),                                   // 0-10 hover
      turn(1.0, Vector3(r20, 0, 0)), hold(3.0),     // roll to +20
      turn(2.0, Vector3(-r20, 0, 0)), hold(3.0),    // through to -20
      turn(1.0, Vector3(r20, 0, 0)), hold(5.0),     // back to level, 10-25
      turn(1.0, Vector3(0, r20, 0)), hold(3.0),     // pitch to +20
      turn(2.0, Vector3(0, -r20, 0)), hold(3.0),    // through to -20
      turn(1.0, Vector3(0, r20, 0)), hold(5.0),     // back to level, 25-40
      turn(3.0, Vector3(0, 0, 30.0 * kDegToRad)),   // 90 deg yaw turn, 40-43
      hold(12.0),                                   // 43-55
      Segment{2.0, Vector3::Zero(), Vector3(3.0, 0.0, 0.0)},   // 55-57 forward accel
      hold(63.0),                                   // 57-120
  };
  return traj;
}

std::pair<double, double> benchmark_accel_window() { return {55.0, 57.0}; }

SimulationSpec stationary_simulation(double duration, const Vector3& gyro_bias,
                                     std::uint64_t seed) {
  SimulationSpec spec;
  spec.trajectory = stationary(duration);
  spec.gyro.constant_bias = gyro_bias;
  spec.mag.rate = 10.0;
  spec.rate = 250.0;
  spec.seed = seed;
  return spec;
}

SimulationSpec benchmark_simulation(std::uint64_t seed) {
  SimulationSpec spec = stationary_simulation(1.0, Vector3(0.02, -0.01, 0.015), seed);
  spec.trajectory = benchmark();
  spec.gyro.markov_density = 1e-4;
  return spec;
}

void apply_datasheet_noise(SimulationSpec& spec) {
  spec.gyro.white_density = 0.005 * kDegToRad;
  spec.accel.white_density = 400e-6 * 9.80665;
  spec.mag.white_density = 0.004 / std::sqrt(10.0);
}

}  // namespace scenarios

}  // namespace fdlkf
