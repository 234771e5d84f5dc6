#pragma once

#include "fdlkf/math.hpp"

namespace fdlkf {

struct CfGains {
  double kp{1.0};   // 1/s
  double ki{0.05};  // 1/s^2

  void validate() const;
};

/// Mahony-style passive complementary filter.
struct CfState {
  Quaternion q;
  Vector3 integral_fb{Vector3::Zero()};  // rad/s
  CfGains gains;
};

/// The corrective rate e = v_meas x v_pred summed over gravity and field
/// directions. Zero-norm accel or mag leave their term out.
Vector3 cf_error(const Quaternion& q, const Vector3& accel, const Vector3& mag);

CfState cf_update(const CfState& state, const Vector3& gyro, const Vector3& accel,
                  const Vector3& mag, double dt);

}  // namespace fdlkf
