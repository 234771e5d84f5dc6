#pragma once

#include "fdlkf/math.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fdlkf {

/// Constant body rate and body-frame linear acceleration held for `duration`.
struct Segment {
  double duration{0.0};                      // s
  Vector3 rate{Vector3::Zero()};             // rad/s
  Vector3 linear_accel{Vector3::Zero()};     // m/s^2
};

struct TrajectorySpec {
  EulerAngles initial;
  std::vector<Segment> segments;

  double duration() const;
  void validate() const;
};

/// Gyro error = constant bias + first-order Markov drift + white noise.
struct GyroModel {
  Vector3 constant_bias{Vector3::Zero()};  // rad/s
  double tau_g{100.0};                     // s
  double markov_density{0.0};              // driving noise, rad/s/sqrt(s)
  double white_density{0.005};             // rad/s/sqrt(Hz)

  void validate() const;
};

struct AccelModel {
  double white_density{0.02};  // m/s^2/sqrt(Hz)
  double gravity{9.81};

  void validate() const;
};

struct MagModel {
  Vector3 field_ned{default_field()};  // unit direction in NED
  double white_density{0.01};          // 1/sqrt(Hz), relative to a unit field
  double rate{0.0};                    // Hz; 0 means a fresh sample every IMU epoch

  static Vector3 default_field();
  void validate() const;
};

struct SensorRecord {
  double t{0.0};
  Vector3 gyro{Vector3::Zero()};
  Vector3 accel{Vector3::Zero()};
  Vector3 mag{Vector3::Zero()};
  std::optional<EulerAngles> truth;
};

/// Exact truth attitude at t_k = k / rate, k = 0..round(duration * rate).
std::vector<Quaternion> integrate_truth(const TrajectorySpec& traj, double rate);

/// Synthetic log with ground truth. Deterministic for a given seed.
std::vector<SensorRecord> simulate(const TrajectorySpec& traj, const GyroModel& gm,
                                   const AccelModel& am, const MagModel& mm, double rate,
                                   std::uint64_t seed);

/// Everything simulate() needs, bundled for files and canned scenarios.
struct SimulationSpec {
  TrajectorySpec trajectory;
  GyroModel gyro;
  AccelModel accel;
  MagModel mag;
  double rate{250.0};  // IMU rate, Hz
  std::uint64_t seed{1};
};

std::vector<SensorRecord> simulate(const SimulationSpec& spec);

/// Index of the segment driving the interval that ends at time t.
std::size_t segment_at(const TrajectorySpec& traj, double t);

namespace scenarios {

/// Level, north-facing, motionless for `duration` seconds.
TrajectorySpec stationary(double duration, EulerAngles attitude = {});

/// 120 s flight: 10 s hover, +/-20 deg roll doublet, +/-20 deg pitch doublet,
/// 90 deg yaw turn, a 2 s burst of 3 m/s^2 forward acceleration, then hover.
TrajectorySpec benchmark();

/// Start and end time of the forward-acceleration leg of benchmark().
std::pair<double, double> benchmark_accel_window();

/// Sensor models shared by the canned scenarios: MPU6050-class white noise,
/// constant gyro bias (0.02, -0.01, 0.015) rad/s plus a slow Markov drift,
/// 250 Hz IMU and 10 Hz magnetometer.
SimulationSpec benchmark_simulation(std::uint64_t seed);

/// Motionless level data with a constant gyro bias and default noise.
SimulationSpec stationary_simulation(double duration, const Vector3& gyro_bias,
                                     std::uint64_t seed);

/// Replace the default white-noise densities with MPU6050 / HMC5883L datasheet
/// figures: gyro 0.005 deg/s/sqrt(Hz), accel 400 ug/sqrt(Hz), mag 2 mG on a 0.5 G field.
void apply_datasheet_noise(SimulationSpec& spec);

}  // namespace scenarios

}  // namespace fdlkf
