#pragma once

#include "fdlkf/math.hpp"

namespace fdlkf {

/// Nominal attitude carried outside the error-state filter.
struct PropagatorState {
  Quaternion q;                       // body -> navigation
  Vector3 bias{Vector3::Zero()};      // accumulated gyro bias estimate, rad/s
  double t{0.0};                      // s
};

/// One rotation-vector step with the angular rate held constant over dt:
/// q <- q * q((gyro - bias) dt). Throws std::invalid_argument on dt <= 0 or
/// non-finite rates.
PropagatorState propagate(const PropagatorState& state, const Vector3& gyro, double dt);

}  // namespace fdlkf
