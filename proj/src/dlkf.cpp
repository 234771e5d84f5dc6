#include "fdlkf/dlkf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdlkf {

namespace {

constexpr double kDeg2 = kDegToRad * kDegToRad;

bool is_positive_definite(const auto& m) {
  if (!m.allFinite()) return false;
  Eigen::LLT<std::remove_cvref_t<decltype(m)>> llt(m);
  return llt.info() == Eigen::Success;
}

void symmetrize(Matrix6& p) { p = 0.5 * (p + p.transpose()).eval(); }

void require_finite(const FilterState& fs, const char* where) {
  if (!fs.x.allFinite() || !fs.P.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": non-finite filter state");
  }
}

// Joseph-form update for an M-row measurement that selects state components.
template <int M>
FilterState kalman_update(const FilterState& fs, const Eigen::Matrix<double, M, 6>& h,
                          const Eigen::Matrix<double, M, 1>& innovation,
                          const Eigen::Matrix<double, M, M>& r, const char* where) {
  using MatM = Eigen::Matrix<double, M, M>;
  const MatM s = h * fs.P * h.transpose() + r;
  Eigen::LLT<MatM> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(where) + ": innovation covariance not positive definite");
  }
  const Eigen::Matrix<double, 6, M> k = llt.solve(h * fs.P).transpose();

  FilterState out;
  out.x = fs.x + k * innovation;
  const Matrix6 a = Matrix6::Identity() - k * h;
  out.P = a * fs.P * a.transpose() + k * r * k.transpose();
  symmetrize(out.P);
  return out;
}

}  // namespace

NoiseConfig NoiseConfig::defaults() {
  NoiseConfig cfg;
  Vector6 q;
  q << 0.1, 0.1, 0.1, 0.01, 0.01, 0.01;
  cfg.Q = (q * 1e-4 * kDeg2).asDiagonal();
  cfg.Ra_nominal = Vector2(0.5, 5.0).asDiagonal();
  cfg.Ra_nominal *= kDeg2;
  cfg.Rm = 5.0 * kDeg2;
  cfg.tau_g = 100.0;
  cfg.lambda_a = 5.0;
  cfg.gamma2_max = 100.0;
  cfg.gravity = 9.81;
  cfg.P0 = Matrix6::Identity();
  return cfg;
}

void NoiseConfig::validate() const {
  if (!is_positive_definite(Q)) throw std::invalid_argument("noise: Q must be positive definite");
  if (!is_positive_definite(Ra_nominal)) {
    throw std::invalid_argument("noise: Ra must be positive definite");
  }
  if (!(Rm > 0.0) || !std::isfinite(Rm)) throw std::invalid_argument("noise: Rm must be positive");
  if (!(tau_g > 0.0) || !std::isfinite(tau_g)) {
    throw std::invalid_argument("noise: tau_g must be positive");
  }
  if (!(lambda_a >= 0.0) || !std::isfinite(lambda_a)) {
    throw std::invalid_argument("noise: lambda_a must be non-negative");
  }
  if (!(gamma2_max >= 1.0) || !std::isfinite(gamma2_max)) {
    throw std::invalid_argument("noise: gamma2_max must be at least 1");
  }
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw std::invalid_argument("noise: gravity must be positive");
  }
  if (!is_positive_definite(P0)) throw std::invalid_argument("noise: P0 must be positive definite");
}

Dcm euler_rate_matrix(double roll, double pitch) {
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double cp = std::cos(pitch), tp = std::tan(pitch);
  Dcm e;
  e << 1.0, sr * tp, cr * tp,
       0.0, cr, -sr,
       0.0, sr / cp, cr / cp;
  return e;
}

Matrix6 transition_matrix(const Dcm& cbn, double dt, double tau_g) {
  Matrix6 phi = Matrix6::Zero();
  phi.topLeftCorner<3, 3>().setIdentity();
  phi.topRightCorner<3, 3>() = -cbn * dt;
  phi.bottomRightCorner<3, 3>() = (1.0 - dt / tau_g) * Eigen::Matrix3d::Identity();
  return phi;
}

FilterState time_update(const FilterState& fs, const Dcm& cbn, double dt, const NoiseConfig& cfg) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time_update: dt must be positive and finite");
  }
  if (!cbn.allFinite()) throw std::invalid_argument("time_update: non-finite Cbn");
  require_finite(fs, "time_update");

  const Matrix6 phi = transition_matrix(cbn, dt, cfg.tau_g);
  FilterState out;
  out.x = phi * fs.x;
  out.P = phi * fs.P * phi.transpose() + cfg.Q;
  symmetrize(out.P);
  return out;
}

double adaptive_gamma2(const Vector3& accel, const NoiseConfig& cfg) {
  const double raw = cfg.lambda_a * std::abs(accel.norm() - cfg.gravity);
  if (!std::isfinite(raw)) return cfg.gamma2_max;
  return std::clamp(raw, 1.0, cfg.gamma2_max);
}

Matrix2 adaptive_ra(const Vector3& accel, const NoiseConfig& cfg) {
  return adaptive_gamma2(accel, cfg) * cfg.Ra_nominal;
}

FilterState accel_update(const FilterState& fs, const Vector2& z1, const Matrix2& ra) {
  require_finite(fs, "accel_update");
  if (!z1.allFinite()) throw std::invalid_argument("accel_update: non-finite measurement");
  if (!is_positive_definite(ra)) {
    throw std::invalid_argument("accel_update: Ra must be positive definite");
  }
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  Vector2 innovation = z1 - h * fs.x;
  innovation(0) = wrap_pi(innovation(0));
  return kalman_update<2>(fs, h, innovation, ra, "accel_update");
}

FilterState mag_update(const FilterState& fs, double z2, double rm) {
  require_finite(fs, "mag_update");
  if (!std::isfinite(z2)) throw std::invalid_argument("mag_update: non-finite measurement");
  if (!(rm > 0.0) || !std::isfinite(rm)) throw std::invalid_argument("mag_update: Rm must be positive");
  Eigen::Matrix<double, 1, 6> h = Eigen::Matrix<double, 1, 6>::Zero();
  h(0, 2) = 1.0;
  const Eigen::Matrix<double, 1, 1> innovation(wrap_pi(z2 - fs.x(2)));
  const Eigen::Matrix<double, 1, 1> r(rm);
  return kalman_update<1>(fs, h, innovation, r, "mag_update");
}

std::pair<PropagatorState, FilterState> apply_correction(const PropagatorState& prop,
                                                         const FilterState& fs) {
  PropagatorState corrected = prop;
  const Vector3 dangle = fs.x.head<3>();
  if (!dangle.isZero(0.0)) {
    EulerAngles e = quat_to_euler(prop.q);
    e.roll += dangle.x();
    e.pitch += dangle.y();
    e.yaw += dangle.z();
    corrected.q = euler_to_quat(e);
  }
  corrected.bias = prop.bias + fs.x.tail<3>();

  FilterState reset = fs;
  reset.x.setZero();
  return {corrected, reset};
}

double min_eigenvalue(const Matrix6& p) {
  const Matrix6 sym = 0.5 * (p + p.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix6> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace fdlkf
