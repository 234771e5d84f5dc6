#include "fdlkf/cf.hpp"

#include <cmath>
#include <stdexcept>

namespace fdlkf {

void CfGains::validate() const {
  if (!(kp >= 0.0) || !std::isfinite(kp)) throw std::invalid_argument("cf: kp must be non-negative");
  if (!(ki >= 0.0) || !std::isfinite(ki)) throw std::invalid_argument("cf: ki must be non-negative");
}

Vector3 cf_error(const Quaternion& q, const Vector3& accel, const Vector3& mag) {
  const Dcm cnb = quat_to_dcm(q).transpose();
  Vector3 e = Vector3::Zero();

  // Specific force points up at rest, so "down" is -accel.
  const double an = accel.norm();
  if (an > 0.0 && std::isfinite(an)) {
    const Vector3 down_meas = -accel / an;
    const Vector3 down_pred = cnb.col(2);
    e += down_meas.cross(down_pred);
  }

  const double mn = mag.norm();
  if (mn > 0.0 && std::isfinite(mn)) {
    const Vector3 m = mag / mn;
    // Reference field rebuilt from the measurement so inclination never biases tilt.
    const Vector3 h = cnb.transpose() * m;
    const Vector3 ref(std::hypot(h.x(), h.y()), 0.0, h.z());
    e += m.cross(cnb * ref);
  }
  return e;
}

CfState cf_update(const CfState& state, const Vector3& gyro, const Vector3& accel,
                  const Vector3& mag, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("cf_update: dt must be positive and finite");
  }
  if (!is_finite(gyro)) throw std::invalid_argument("cf_update: non-finite gyro sample");

  CfState next = state;
  const Vector3 e = cf_error(state.q, accel, mag);
  if (state.gains.ki > 0.0) next.integral_fb += state.gains.ki * e * dt;
  const Vector3 rate = gyro + state.gains.kp * e + next.integral_fb;
  next.q = quat_multiply(state.q, rotvec_to_quat(rate * dt));
  return next;
}

}  // namespace fdlkf
