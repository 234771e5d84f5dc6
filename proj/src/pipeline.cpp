#include "fdlkf/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fdlkf {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Dlkf: return "dlkf";
    case Algorithm::Cf: return "cf";
    case Algorithm::GyroOnly: return "gyro-only";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dlkf") return Algorithm::Dlkf;
  if (name == "cf") return Algorithm::Cf;
  if (name == "gyro-only") return Algorithm::GyroOnly;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(BiasCoupling c) {
  return c == BiasCoupling::Euler ? "euler" : "dcm";
}

BiasCoupling parse_coupling(std::string_view name) {
  if (name == "euler") return BiasCoupling::Euler;
  if (name == "dcm") return BiasCoupling::Dcm;
  throw std::invalid_argument("unknown coupling '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  noise.validate();
  fast_euler.validate();
  cf.validate();
  if (!(imu_rate > 0.0) || !std::isfinite(imu_rate)) {
    throw std::invalid_argument("pipeline: imu_rate must be positive");
  }
  if (!(mag_rate > 0.0) || !std::isfinite(mag_rate)) {
    throw std::invalid_argument("pipeline: mag_rate must be positive");
  }
  if (mag_rate > imu_rate) throw std::invalid_argument("pipeline: mag_rate exceeds imu_rate");
  if (!(alignment_duration >= 0.0) || !std::isfinite(alignment_duration)) {
    throw std::invalid_argument("pipeline: alignment duration must be non-negative");
  }
}

Alignment initial_alignment(std::span<const SensorRecord> records, double window,
                            const FastEulerConfig& cfg) {
  if (records.empty()) throw std::runtime_error("alignment: no data");
  const double t0 = records.front().t;

  Alignment out;
  Vector3 accel_sum = Vector3::Zero();
  Vector3 mag_sum = Vector3::Zero();
  Vector3 gyro_sum = Vector3::Zero();
  std::size_t accepted = 0, gyro_n = 0;
  for (const auto& rec : records) {
    if (rec.t - t0 > window) break;
    ++out.samples;
    if (is_finite(rec.gyro)) {
      gyro_sum += rec.gyro;
      ++gyro_n;
    }
    if (accel_gate_passes(rec.accel, cfg)) {
      accel_sum += rec.accel;
      ++accepted;
    } else {
      ++out.rejected;
    }
    const double mn = rec.mag.norm();
    if (std::isfinite(mn) && mn > 0.0) mag_sum += rec.mag / mn;
  }
  if (accepted == 0 || 2 * out.rejected > out.samples) {
    throw std::runtime_error("alignment: accel gate rejected " + std::to_string(out.rejected) +
                             " of " + std::to_string(out.samples) +
                             " samples; vehicle not static during the window");
  }

  // Exact static tilt; the measurement-layer pitch expression is only exact at zero roll.
  const Vector3 f = accel_sum / static_cast<double>(accepted);
  const double roll = std::atan2(-f.y(), -f.z());
  const double pitch = std::atan2(f.x(), std::hypot(f.y(), f.z()));
  const double yaw = mag_yaw(mag_sum, roll, pitch).value_or(0.0);
  out.q = euler_to_quat({roll, pitch, yaw});
  if (gyro_n > 0) out.bias = gyro_sum / static_cast<double>(gyro_n);
  return out;
}

FusionEngine::FusionEngine(PipelineConfig cfg, const Alignment& alignment, double t0)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  nominal_.q = alignment.q;
  nominal_.t = t0;
  if (cfg_.align_bias) nominal_.bias = alignment.bias;
  filter_.x.setZero();
  filter_.P = cfg_.noise.P0;
  cf_.q = alignment.q;
  cf_.gains = cfg_.cf;
  if (cfg_.align_bias) cf_.integral_fb = -alignment.bias;
  next_mag_t_ = t0;
}

AttitudeEstimate FusionEngine::current() const {
  AttitudeEstimate e;
  e.t = nominal_.t;
  if (cfg_.algorithm == Algorithm::Cf) {
    e.q = cf_.q;
    e.bias = -cf_.integral_fb;
  } else {
    e.q = nominal_.q;
    e.bias = nominal_.bias;
  }
  e.angles = quat_to_euler(e.q);
  return e;
}

bool FusionEngine::mag_due(double t) {
  constexpr double kSlack = 1e-9;
  if (t + kSlack < next_mag_t_) return false;
  const double period = 1.0 / cfg_.mag_rate;
  // At most one update per epoch; skip any missed slots.
  while (next_mag_t_ <= t + kSlack) next_mag_t_ += period;
  return true;
}

void FusionEngine::step_dlkf(const SensorRecord& rec, double dt) {
  // Steps 1-2: bias-compensated gyro propagation, then Euler readout.
  nominal_ = propagate(nominal_, rec.gyro, dt);
  const EulerAngles est = quat_to_euler(nominal_.q);

  // Step 3: measured angles.
  const auto rp = accel_roll_pitch(rec.accel, cfg_.fast_euler);

  // Step 4: time update.
  const Dcm coupling = cfg_.coupling == BiasCoupling::Euler
                           ? euler_rate_matrix(est.roll, est.pitch)
                           : quat_to_dcm(nominal_.q);
  filter_ = time_update(filter_, coupling, dt, cfg_.noise);

  // Step 5: accelerometer layer.
  if (rp) {
    const Vector2 z1(wrap_pi(rp->roll - est.roll), rp->pitch - est.pitch);
    filter_ = accel_update(filter_, z1, adaptive_ra(rec.accel, cfg_.noise));
    ++accel_updates_;
  }

  // Step 6: magnetometer layer on the layer-1 output.
  if (mag_due(rec.t)) {
    const RollPitch tilt = rp ? *rp : RollPitch{est.roll + filter_.x(0), est.pitch + filter_.x(1)};
    if (const auto yaw = mag_yaw(rec.mag, tilt.roll, tilt.pitch)) {
      filter_ = mag_update(filter_, wrap_pi(*yaw - est.yaw), cfg_.noise.Rm);
      ++mag_updates_;
    }
  }

  // Step 7: feedback and reset.
  std::tie(nominal_, filter_) = apply_correction(nominal_, filter_);
}

AttitudeEstimate FusionEngine::step(const SensorRecord& rec) {
  const double dt = rec.t - nominal_.t;
  if (!(dt > 0.0)) throw std::invalid_argument("timestamps not strictly increasing");

  switch (cfg_.algorithm) {
    case Algorithm::Dlkf:
      step_dlkf(rec, dt);
      break;
    case Algorithm::Cf:
      cf_ = cf_update(cf_, rec.gyro, rec.accel, rec.mag, dt);
      break;
    case Algorithm::GyroOnly:
      nominal_ = propagate(nominal_, rec.gyro, dt);
      break;
  }
  // Pin the clock to the record so rounding never accumulates.
  nominal_.t = rec.t;
  return current();
}

std::vector<AttitudeEstimate> run_pipeline(std::span<const SensorRecord> records,
                                           const PipelineConfig& cfg) {
  std::vector<AttitudeEstimate> out;
  if (records.empty()) return out;
  cfg.validate();
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!(records[i].t > records[i - 1].t)) {
      throw std::runtime_error("sample " + std::to_string(i) + ": timestamps not strictly increasing");
    }
  }

  const Alignment alignment = initial_alignment(records, cfg.alignment_duration, cfg.fast_euler);
  FusionEngine engine(cfg, alignment, records.front().t);
  out.reserve(records.size());
  out.push_back(engine.current());
  for (std::size_t i = 1; i < records.size(); ++i) {
    try {
      out.push_back(engine.step(records[i]));
    } catch (const std::exception& e) {
      throw std::runtime_error("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fdlkf
