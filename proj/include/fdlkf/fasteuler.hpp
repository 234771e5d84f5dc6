#pragma once

#include "fdlkf/math.hpp"

#include <optional>

namespace fdlkf {

struct FastEulerConfig {
  double gravity{9.81};    // local gravity magnitude, m/s^2
  double accel_gate{0.5};  // max |‖a‖ - g| for an accel sample to be trusted, m/s^2

  void validate() const;
};

struct RollPitch {
  double roll{0.0};
  double pitch{0.0};
};

struct MeasuredAngles {
  std::optional<double> roll;
  std::optional<double> pitch;
  std::optional<double> yaw;
};

/// The two atan2 expressions with no gating; accel must be non-zero.
RollPitch roll_pitch_from_specific_force(const Vector3& accel);

bool accel_gate_passes(const Vector3& accel, const FastEulerConfig& cfg);

/// Roll and pitch from the specific-force direction. Empty when the
/// accelerometer reads zero or its norm is too far from gravity.
std::optional<RollPitch> accel_roll_pitch(const Vector3& accel, const FastEulerConfig& cfg);

/// Tilt-compensated magnetic heading in [0, 2pi). Only the field direction
/// is used. Empty for a zero (or non-finite) field vector.
std::optional<double> mag_yaw(const Vector3& mag, double roll, double pitch);

/// Accel roll/pitch followed by mag heading. Heading is tilt-compensated with
/// the accel angles; when those are gated out, `fallback` supplies roll/pitch
/// (typically the current filter estimate). Without either, yaw stays empty.
MeasuredAngles fast_euler(const Vector3& accel, const Vector3& mag, const FastEulerConfig& cfg,
                          std::optional<RollPitch> fallback = std::nullopt);

}  // namespace fdlkf
