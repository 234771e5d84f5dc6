#include "fdlkf/fasteuler.hpp"

#include <cmath>
#include <stdexcept>

namespace fdlkf {

void FastEulerConfig::validate() const {
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw std::invalid_argument("fasteuler: gravity must be positive");
  }
  if (!(accel_gate > 0.0) || !std::isfinite(accel_gate)) {
    throw std::invalid_argument("fasteuler: accel gate must be positive");
  }
}

bool accel_gate_passes(const Vector3& accel, const FastEulerConfig& cfg) {
  if (!is_finite(accel)) return false;
  const double n = accel.norm();
  return n > 0.0 && std::abs(n - cfg.gravity) <= cfg.accel_gate;
}

RollPitch roll_pitch_from_specific_force(const Vector3& accel) {
  RollPitch rp;
  rp.roll = std::atan2(-accel.y(), -accel.z());
  if (rp.roll <= -kPi) rp.roll = kPi;
  // Exact only at zero roll; kept in the atan2(ax, -az) form on purpose.
  rp.pitch = std::atan2(accel.x(), -accel.z());
  return rp;
}

std::optional<RollPitch> accel_roll_pitch(const Vector3& accel, const FastEulerConfig& cfg) {
  if (!accel_gate_passes(accel, cfg)) return std::nullopt;
  return roll_pitch_from_specific_force(accel);
}

std::optional<double> mag_yaw(const Vector3& mag, double roll, double pitch) {
  if (!is_finite(mag)) return std::nullopt;
  const double n = mag.norm();
  if (n == 0.0) return std::nullopt;
  const Vector3 m = mag / n;

  const double sr = std::sin(roll), cr = std::cos(roll);
  const double sp = std::sin(pitch), cp = std::cos(pitch);
  const double hx = m.x() * cp + m.y() * sp * sr + m.z() * sp * cr;
  const double hy = m.y() * cr - m.z() * sr;
  return wrap_yaw(std::atan2(-hy, hx));
}

MeasuredAngles fast_euler(const Vector3& accel, const Vector3& mag, const FastEulerConfig& cfg,
                          std::optional<RollPitch> fallback) {
  MeasuredAngles out;
  const auto rp = accel_roll_pitch(accel, cfg);
  if (rp) {
    out.roll = rp->roll;
    out.pitch = rp->pitch;
  }
  const auto tilt = rp ? rp : fallback;
  if (tilt) out.yaw = mag_yaw(mag, tilt->roll, tilt->pitch);
  return out;
}

}  // namespace fdlkf
