#include "fdlkf/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace fdlkf {

PropagatorState propagate(const PropagatorState& state, const Vector3& gyro, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("propagate: dt must be positive and finite");
  }
  if (!is_finite(gyro)) throw std::invalid_argument("propagate: non-finite gyro sample");

  PropagatorState next = state;
  const Vector3 increment = (gyro - state.bias) * dt;
  next.q = quat_multiply(state.q, rotvec_to_quat(increment));
  next.t = state.t + dt;
  return next;
}

}  // namespace fdlkf
