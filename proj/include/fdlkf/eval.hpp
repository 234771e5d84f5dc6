#pragma once

#include "fdlkf/math.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdlkf {

/// Per-angle root-mean-square error in degrees.
struct RmseDeg {
  double roll{0.0};
  double pitch{0.0};
  double yaw{0.0};
};

/// Residuals are wrapped to (-180, 180] deg before squaring, so a 359 vs 1 deg
/// yaw pair counts as 2 deg. Throws on empty or mismatched inputs.
RmseDeg rmse(std::span<const EulerAngles> est, std::span<const EulerAngles> truth);

/// Percent improvement of `candidate` over `baseline`, relative to the candidate:
/// 100 (baseline - candidate) / candidate.
double improvement(double baseline_rmse, double candidate_rmse);

struct TimedAngles {
  double t{0.0};
  EulerAngles angles;
};

/// Pair each estimate with the nearest truth sample no more than `tolerance`
/// seconds away. Both inputs must be time-ordered. Unmatched estimates drop out.
std::vector<std::pair<std::size_t, std::size_t>> align_nearest(std::span<const TimedAngles> est,
                                                               std::span<const TimedAngles> truth,
                                                               double tolerance);

/// Half of the median sample spacing, the default alignment tolerance.
double half_sample_period(std::span<const TimedAngles> series);

struct RunResult {
  std::string algorithm;
  std::string config_hash;
  std::vector<TimedAngles> estimates;
  std::vector<TimedAngles> truth;
  RmseDeg rmse;
};

/// Align, then score. Throws when nothing aligns.
RunResult evaluate(std::string algorithm, std::string config_hash,
                   std::span<const TimedAngles> est, std::span<const TimedAngles> truth);

std::string format_report(const RunResult& run);

/// Side-by-side table with improvement of candidate over baseline per angle.
std::string format_comparison(const RunResult& baseline, const RunResult& candidate);

/// Stable 64-bit FNV-1a digest as 16 hex chars, used to tag runs by config.
std::string config_digest(std::string_view text);

}  // namespace fdlkf
