#pragma once

#include "fdlkf/cf.hpp"
#include "fdlkf/dlkf.hpp"
#include "fdlkf/fasteuler.hpp"
#include "fdlkf/propagator.hpp"
#include "fdlkf/sim.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fdlkf {

enum class Algorithm { Dlkf, Cf, GyroOnly };

/// How residual gyro bias feeds the attitude-error rows of the transition
/// matrix. `Dcm` uses C_b^n (attitude error as a navigation-frame rotation);
/// `Euler` uses the Euler-rate matrix, matching the Euler-angle error state.
enum class BiasCoupling { Euler, Dcm };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(BiasCoupling c);
BiasCoupling parse_coupling(std::string_view name);

struct PipelineConfig {
  Algorithm algorithm{Algorithm::Dlkf};
  BiasCoupling coupling{BiasCoupling::Euler};
  NoiseConfig noise{NoiseConfig::defaults()};
  FastEulerConfig fast_euler;
  CfGains cf;
  double imu_rate{250.0};          // Hz, nominal; dt always comes from timestamps
  double mag_rate{10.0};           // Hz
  double alignment_duration{1.0};  // s of leading data averaged for the initial attitude
  bool align_bias{true};           // seed the bias accumulator with the window's mean gyro

  void validate() const;
};

struct AttitudeEstimate {
  double t{0.0};
  EulerAngles angles;
  Quaternion q;
  Vector3 bias{Vector3::Zero()};
};

struct Alignment {
  Quaternion q;
  Vector3 bias{Vector3::Zero()};
  std::size_t samples{0};
  std::size_t rejected{0};
};

/// Static coarse alignment over records with t - t0 <= window: averaged accel
/// gives roll/pitch, averaged mag direction gives yaw, mean gyro seeds the bias.
/// Throws std::runtime_error when the accel gate rejects more than half the window.
Alignment initial_alignment(std::span<const SensorRecord> records, double window,
                            const FastEulerConfig& cfg);

/// One estimator stream. Feed records in time order through step().
class FusionEngine {
 public:
  FusionEngine(PipelineConfig cfg, const Alignment& alignment, double t0);

  AttitudeEstimate step(const SensorRecord& rec);
  AttitudeEstimate current() const;

  const FilterState& filter() const { return filter_; }
  const PropagatorState& nominal() const { return nominal_; }
  const PipelineConfig& config() const { return cfg_; }

  std::size_t accel_updates() const { return accel_updates_; }
  std::size_t mag_updates() const { return mag_updates_; }

 private:
  void step_dlkf(const SensorRecord& rec, double dt);
  bool mag_due(double t);

  PipelineConfig cfg_;
  PropagatorState nominal_;
  FilterState filter_;
  CfState cf_;
  double next_mag_t_{0.0};
  std::size_t accel_updates_{0};
  std::size_t mag_updates_{0};
};

/// Full fusion loop, one estimate per record (the first is the aligned start).
/// Errors are rethrown as std::runtime_error tagged with the sample index.
std::vector<AttitudeEstimate> run_pipeline(std::span<const SensorRecord> records,
                                           const PipelineConfig& cfg);

}  // namespace fdlkf
