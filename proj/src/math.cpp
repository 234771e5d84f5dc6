#include "fdlkf/math.hpp"

#include <algorithm>
#include <cmath>

namespace fdlkf {

namespace {
constexpr double kSmallRotation = 1e-6;
constexpr double kGimbalTolerance = 1e-6;
}  // namespace

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  const double s = (w < 0.0 ? -1.0 : 1.0) / n;
  return {w * s, x * s, y * s, z * s};
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  const Quaternion r{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                     a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                     a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                     a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  return r.normalized();
}

Quaternion rotvec_to_quat(const Vector3& rotvec) {
  const double angle = rotvec.norm();
  // sin(angle/2)/angle, with the series form near zero
  const double k = angle < kSmallRotation ? 0.5 - angle * angle / 48.0
                                          : std::sin(0.5 * angle) / angle;
  const Quaternion q{std::cos(0.5 * angle), rotvec.x() * k, rotvec.y() * k, rotvec.z() * k};
  return q.normalized();
}

EulerConversion quat_to_euler_checked(const Quaternion& q_in) {
  const Quaternion q = q_in.normalized();
  const double sin_pitch = std::clamp(2.0 * (q.w * q.y - q.z * q.x), -1.0, 1.0);
  const double pitch = std::asin(sin_pitch);

  EulerConversion out;
  out.angles.pitch = pitch;
  if (kPi / 2.0 - std::abs(pitch) < kGimbalTolerance) {
    out.gimbal_lock = true;
    out.angles.roll = 0.0;
    // With roll pinned, yaw is read from C01 and C11 for either sign of pitch.
    const double c01 = 2.0 * (q.x * q.y - q.w * q.z);
    const double c11 = 1.0 - 2.0 * (q.x * q.x + q.z * q.z);
    out.angles.yaw = wrap_yaw(std::atan2(-c01, c11));
    return out;
  }

  double roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z), 1.0 - 2.0 * (q.x * q.x + q.y * q.y));
  if (roll <= -kPi) roll = kPi;
  out.angles.roll = roll;
  out.angles.yaw = wrap_yaw(
      std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z)));
  return out;
}

EulerAngles quat_to_euler(const Quaternion& q) { return quat_to_euler_checked(q).angles; }

Quaternion euler_to_quat(const EulerAngles& e) {
  const double cr = std::cos(0.5 * e.roll), sr = std::sin(0.5 * e.roll);
  const double cp = std::cos(0.5 * e.pitch), sp = std::sin(0.5 * e.pitch);
  const double cy = std::cos(0.5 * e.yaw), sy = std::sin(0.5 * e.yaw);
  const Quaternion q{cr * cp * cy + sr * sp * sy,
                     sr * cp * cy - cr * sp * sy,
                     cr * sp * cy + sr * cp * sy,
                     cr * cp * sy - sr * sp * cy};
  return q.normalized();
}

Dcm quat_to_dcm(const Quaternion& q_in) {
  const Quaternion q = q_in.normalized();
  const double ww = q.w * q.w, xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  Dcm c;
  c << ww + xx - yy - zz, 2.0 * (xy - wz), 2.0 * (xz + wy),
       2.0 * (xy + wz), ww - xx + yy - zz, 2.0 * (yz - wx),
       2.0 * (xz - wy), 2.0 * (yz + wx), ww - xx - yy + zz;
  return c;
}

Vector3 rotate(const Quaternion& q, const Vector3& v_body) { return quat_to_dcm(q) * v_body; }

double wrap_yaw(double psi) {
  double r = std::fmod(psi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2 pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_pi(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

bool is_finite(const Vector3& v) { return v.allFinite(); }

}  // namespace fdlkf
