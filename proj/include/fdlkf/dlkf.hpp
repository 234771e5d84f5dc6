#pragma once

#include "fdlkf/math.hpp"
#include "fdlkf/propagator.hpp"

#include <Eigen/Dense>

#include <utility>

namespace fdlkf {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

/// Error state [droll, dpitch, dyaw, bias_x, bias_y, bias_z] and its covariance.
/// Attitude errors are measured-minus-estimated Euler angles (rad); bias errors
/// are residual gyro bias (rad/s) not yet folded into the propagator.
struct FilterState {
  Vector6 x{Vector6::Zero()};
  Matrix6 P{Matrix6::Identity()};
};

/// Noise and model parameters, all in SI units (rad, rad/s, m/s^2).
struct NoiseConfig {
  Matrix6 Q;              // process noise added per time update
  Matrix2 Ra_nominal;     // accel roll/pitch measurement noise before adaptation
  double Rm{0.0};         // mag heading measurement noise
  double tau_g{100.0};    // first-order Markov correlation time of the gyro drift, s
  double lambda_a{5.0};   // adaptive weight on |‖a‖ - g|, (m/s^2)^-1
  double gamma2_max{100.0};
  double gravity{9.81};
  Matrix6 P0;             // initial covariance

  /// Default filter settings: P0 = I, Ra = diag(0.5, 5), Rm = 5,
  /// Q = diag(0.1, 0.1, 0.1, 0.01, 0.01, 0.01) * 1e-4. Angular noise terms are
  /// read as degree units and converted to radians.
  static NoiseConfig defaults();

  void validate() const;
};

/// Propagate the error state through x <- Phi x, P <- Phi P Phi^T + Q with
/// Phi = [[I, -Cbn dt], [0, (1 - dt/tau_g) I]]. `cbn` is the matrix that carries
/// residual body-rate bias into attitude-error rate.
FilterState time_update(const FilterState& fs, const Dcm& cbn, double dt, const NoiseConfig& cfg);

/// Maps body rates to Euler-angle rates at the given roll/pitch:
/// d(roll, pitch, yaw)/dt = E omega_b. Equals the identity when level.
Dcm euler_rate_matrix(double roll, double pitch);

/// The state-transition matrix used by time_update.
Matrix6 transition_matrix(const Dcm& cbn, double dt, double tau_g);

/// gamma^2 * Ra_nominal with gamma^2 = clamp(lambda_a |‖a‖ - g|, 1, gamma2_max).
Matrix2 adaptive_ra(const Vector3& accel, const NoiseConfig& cfg);

/// The clamped adaptive factor on its own.
double adaptive_gamma2(const Vector3& accel, const NoiseConfig& cfg);

/// First layer: accel-derived (droll, dpitch) measurement with H1 = [I2 | 0].
/// The roll innovation is wrapped to (-pi, pi]. Throws on a non-PD Ra.
FilterState accel_update(const FilterState& fs, const Vector2& z1, const Matrix2& ra);

/// Second layer: mag-derived dyaw measurement with H2 = [0 0 1 0 0 0].
/// Must be fed the first-layer output. The innovation is wrapped to (-pi, pi].
FilterState mag_update(const FilterState& fs, double z2, double rm);

/// Fold the error estimate into the nominal attitude and bias, then zero x.
/// The attitude is corrected additively in Euler angles; P is retained.
std::pair<PropagatorState, FilterState> apply_correction(const PropagatorState& prop,
                                                         const FilterState& fs);

/// Smallest eigenvalue of the symmetric part of P.
double min_eigenvalue(const Matrix6& p);

}  // namespace fdlkf
