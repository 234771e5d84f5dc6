#pragma once

#include "fdlkf/eval.hpp"
#include "fdlkf/pipeline.hpp"
#include "fdlkf/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fdlkf {

// ---- sensor log CSV ---------------------------------------------------------
//
// Header, then one row per IMU epoch:
//   t,gx,gy,gz,ax,ay,az,mx,my,mz[,troll,tpitch,tyaw]
// SI units (s, rad/s, m/s^2, unit mag direction, rad), '.' decimal separator,
// LF line endings. Numbers are written in shortest round-trip form. Empty or
// "nan" mag cells mean no magnetometer sample on that row.

inline constexpr std::string_view kLogHeader = "t,gx,gy,gz,ax,ay,az,mx,my,mz";
inline constexpr std::string_view kLogTruthHeader = "t,gx,gy,gz,ax,ay,az,mx,my,mz,troll,tpitch,tyaw";
inline constexpr std::string_view kEstimateHeader = "t,roll,pitch,yaw,qw,qx,qy,qz,bx,by,bz";

void write_log(std::ostream& os, std::span<const SensorRecord> records, bool with_truth);
std::vector<SensorRecord> read_log(std::istream& is);

void write_estimates(std::ostream& os, std::span<const AttitudeEstimate> estimates);
std::vector<TimedAngles> read_estimates(std::istream& is);

/// Truth columns of a log; throws if the log carries none.
std::vector<TimedAngles> truth_series(std::span<const SensorRecord> records);
std::vector<TimedAngles> estimate_series(std::span<const AttitudeEstimate> estimates);

std::vector<SensorRecord> load_log(const std::filesystem::path& path);
void save_log(const std::filesystem::path& path, std::span<const SensorRecord> records,
              bool with_truth);

// ---- pipeline config ----------------------------------------------------------
//
// Flat `key = value` lines, '#' comments. Matrices take their diagonal (n
// values) or the full row-major matrix (n*n values). Unknown keys are errors.
//
//   algorithm = dlkf | cf | gyro-only
//   coupling = euler | dcm
//   imu_rate, mag_rate, alignment_s, align_bias (true/false)
//   noise.q (6|36), noise.ra (2|4), noise.rm, noise.tau_g, noise.lambda_a,
//   noise.gamma2_max, noise.gravity, noise.p0 (6|36)
//   fasteuler.gravity, fasteuler.accel_gate
//   cf.kp, cf.ki

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const PipelineConfig& cfg);

// ---- simulation spec ------------------------------------------------------------
//
//   rate, seed, initial = roll pitch yaw (rad)
//   segment = duration wx wy wz ax ay az     (repeatable, in order)
//   gyro.bias (3), gyro.tau_g, gyro.markov_density, gyro.white_density
//   accel.white_density, accel.gravity
//   mag.field (3), mag.white_density, mag.rate

SimulationSpec parse_simulation(std::string_view text);
SimulationSpec load_simulation(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace fdlkf
