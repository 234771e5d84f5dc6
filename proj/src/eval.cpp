#include "fdlkf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fdlkf {

namespace {

double wrap_deg(double d) {
  double r = std::remainder(d, 360.0);
  if (r <= -180.0) r += 360.0;
  return r;
}

std::string fixed(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

RmseDeg rmse(std::span<const EulerAngles> est, std::span<const EulerAngles> truth) {
  if (est.empty()) throw std::invalid_argument("rmse: empty sequence");
  if (est.size() != truth.size()) throw std::invalid_argument("rmse: sequence lengths differ");

  double sr = 0.0, sp = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double dr = wrap_deg((est[i].roll - truth[i].roll) * kRadToDeg);
    const double dp = wrap_deg((est[i].pitch - truth[i].pitch) * kRadToDeg);
    const double dy = wrap_deg((est[i].yaw - truth[i].yaw) * kRadToDeg);
    sr += dr * dr;
    sp += dp * dp;
    sy += dy * dy;
  }
  const double n = static_cast<double>(est.size());
  return {std::sqrt(sr / n), std::sqrt(sp / n), std::sqrt(sy / n)};
}

double improvement(double baseline_rmse, double candidate_rmse) {
  if (!(candidate_rmse > 0.0) || !std::isfinite(candidate_rmse)) {
    throw std::invalid_argument("improvement: candidate RMSE must be positive");
  }
  return 100.0 * (baseline_rmse - candidate_rmse) / candidate_rmse;
}

std::vector<std::pair<std::size_t, std::size_t>> align_nearest(std::span<const TimedAngles> est,
                                                               std::span<const TimedAngles> truth,
                                                               double tolerance) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (truth.empty()) return pairs;
  std::size_t j = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double t = est[i].t;
    while (j + 1 < truth.size() && std::abs(truth[j + 1].t - t) <= std::abs(truth[j].t - t)) ++j;
    if (std::abs(truth[j].t - t) <= tolerance) pairs.emplace_back(i, j);
  }
  return pairs;
}

double half_sample_period(std::span<const TimedAngles> series) {
  if (series.size() < 2) return 0.0;
  std::vector<double> gaps;
  gaps.reserve(series.size() - 1);
  for (std::size_t i = 1; i < series.size(); ++i) gaps.push_back(series[i].t - series[i - 1].t);
  auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  return 0.5 * *mid;
}

RunResult evaluate(std::string algorithm, std::string config_hash,
                   std::span<const TimedAngles> est, std::span<const TimedAngles> truth) {
  const double tol = std::max(half_sample_period(truth), 1e-9);
  const auto pairs = align_nearest(est, truth, tol);
  if (pairs.empty()) throw std::invalid_argument("evaluate: no estimate aligns with truth");

  RunResult run;
  run.algorithm = std::move(algorithm);
  run.config_hash = std::move(config_hash);
  std::vector<EulerAngles> e, g;
  e.reserve(pairs.size());
  g.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    run.estimates.push_back(est[i]);
    run.truth.push_back(truth[j]);
    e.push_back(est[i].angles);
    g.push_back(truth[j].angles);
  }
  run.rmse = rmse(e, g);
  return run;
}

std::string format_report(const RunResult& run) {
  std::ostringstream os;
  os << "algorithm  samples  roll_deg  pitch_deg  yaw_deg\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-9s  %7zu  %8.4f  %9.4f  %7.4f\n", run.algorithm.c_str(),
                run.estimates.size(), run.rmse.roll, run.rmse.pitch, run.rmse.yaw);
  os << line << '\n';
  os << "algorithm=" << run.algorithm << '\n';
  os << "config_hash=" << run.config_hash << '\n';
  os << "samples=" << run.estimates.size() << '\n';
  os << "rmse_roll_deg=" << fixed(run.rmse.roll, 6) << '\n';
  os << "rmse_pitch_deg=" << fixed(run.rmse.pitch, 6) << '\n';
  os << "rmse_yaw_deg=" << fixed(run.rmse.yaw, 6) << '\n';
  return os.str();
}

std::string format_comparison(const RunResult& baseline, const RunResult& candidate) {
  const double ir = improvement(baseline.rmse.roll, candidate.rmse.roll);
  const double ip = improvement(baseline.rmse.pitch, candidate.rmse.pitch);
  const double iy = improvement(baseline.rmse.yaw, candidate.rmse.yaw);

  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s  %10s  %10s  %11s\n", "angle", baseline.algorithm.c_str(),
                candidate.algorithm.c_str(), "improvement");
  os << line;
  const auto row = [&](const char* name, double b, double c, double pct) {
    std::snprintf(line, sizeof line, "%-10s  %10.4f  %10.4f  %10.1f%%\n", name, b, c, pct);
    os << line;
  };
  row("Roll/deg", baseline.rmse.roll, candidate.rmse.roll, ir);
  row("Pitch/deg", baseline.rmse.pitch, candidate.rmse.pitch, ip);
  row("Yaw/deg", baseline.rmse.yaw, candidate.rmse.yaw, iy);
  os << '\n';
  os << "baseline=" << baseline.algorithm << '\n';
  os << "candidate=" << candidate.algorithm << '\n';
  os << "baseline_rmse_roll_deg=" << fixed(baseline.rmse.roll, 6) << '\n';
  os << "baseline_rmse_pitch_deg=" << fixed(baseline.rmse.pitch, 6) << '\n';
  os << "baseline_rmse_yaw_deg=" << fixed(baseline.rmse.yaw, 6) << '\n';
  os << "rmse_roll_deg=" << fixed(candidate.rmse.roll, 6) << '\n';
  os << "rmse_pitch_deg=" << fixed(candidate.rmse.pitch, 6) << '\n';
  os << "rmse_yaw_deg=" << fixed(candidate.rmse.yaw, 6) << '\n';
  os << "improvement_roll_pct=" << fixed(ir, 3) << '\n';
  os << "improvement_pitch_pct=" << fixed(ip, 3) << '\n';
  os << "improvement_yaw_pct=" << fixed(iy, 3) << '\n';
  return os.str();
}

std::string config_digest(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fdlkf
