#pragma once

#include <Eigen/Dense>

#include <numbers>

/**
 * @file math.hpp
 * @brief Frame conventions and rotation algebra shared by every estimator.
 *
 * Navigation frame is North-East-Down, body frame is Front-Right-Down.
 * Quaternions are Hamilton, scalar-first, and rotate body vectors into the
 * navigation frame: v_n = q * v_b * conj(q). Euler angles follow the
 * aerospace Z-Y-X (yaw-pitch-roll) sequence, so C_b^n = Rz(yaw) Ry(pitch) Rx(roll).
 */

namespace fdlkf {

using Vector3 = Eigen::Vector3d;
using Dcm = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Quaternion {
  double w{1.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  static Quaternion identity() { return {}; }

  double norm() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  /// Unit-norm copy with w >= 0.
  Quaternion normalized() const;

  bool operator==(const Quaternion&) const = default;
};

/// Roll in (-pi, pi], pitch in [-pi/2, pi/2], yaw in [0, 2pi).
struct EulerAngles {
  double roll{0.0};
  double pitch{0.0};
  double yaw{0.0};

  bool operator==(const EulerAngles&) const = default;
};

struct EulerConversion {
  EulerAngles angles;
  bool gimbal_lock{false};
};

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);

/// Unit quaternion of a rotation vector (rad). Small-angle series below 1e-6 rad.
Quaternion rotvec_to_quat(const Vector3& rotvec);

EulerAngles quat_to_euler(const Quaternion& q);

/// Same as quat_to_euler but also reports whether |pitch| is within 1e-6 of
/// pi/2, in which case roll is pinned to zero and yaw absorbs the remainder.
EulerConversion quat_to_euler_checked(const Quaternion& q);

Quaternion euler_to_quat(const EulerAngles& e);

/// C_b^n with v_n = C_b^n v_b.
Dcm quat_to_dcm(const Quaternion& q);

/// Rotate a body-frame vector into the navigation frame.
Vector3 rotate(const Quaternion& q, const Vector3& v_body);

/// psi + 2 pi k landing in [0, 2 pi).
double wrap_yaw(double psi);

/// Wrap an angle difference into (-pi, pi].
double wrap_pi(double angle);

bool is_finite(const Vector3& v);

}  // namespace fdlkf
