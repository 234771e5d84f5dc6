#include "fdlkf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fdlkf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double parse_number(std::string_view cell, bool allow_missing = false) {
  cell = trim(cell);
  if (cell.empty() || cell == "nan" || cell == "NaN") {
    if (allow_missing) return kNaN;
    throw std::invalid_argument("missing numeric value");
  }
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw std::invalid_argument("not a number: '" + std::string(cell) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::vector<double> parse_numbers(std::string_view value) {
  std::vector<double> out;
  std::istringstream is{std::string(value)};
  std::string token;
  while (is >> token) out.push_back(parse_number(token));
  return out;
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

bool getline_lf(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// Visits `key = value` lines, skipping blanks and '#' comments.
void for_each_entry(std::string_view text,
                    const std::function<void(std::string_view, std::string_view)>& visit) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument(line_error(line_no, "expected key = value"));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      visit(key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(line_error(line_no, e.what()));
    }
  }
}

double scalar(std::string_view key, std::string_view value) {
  const auto v = parse_numbers(value);
  if (v.size() != 1) throw std::invalid_argument(std::string(key) + " expects one value");
  return v[0];
}

Vector3 vector3(std::string_view key, std::string_view value) {
  const auto v = parse_numbers(value);
  if (v.size() != 3) throw std::invalid_argument(std::string(key) + " expects three values");
  return {v[0], v[1], v[2]};
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument(std::string(key) + " expects true or false");
}

template <int N>
Eigen::Matrix<double, N, N> matrix(std::string_view key, std::string_view value) {
  const auto v = parse_numbers(value);
  Eigen::Matrix<double, N, N> m = Eigen::Matrix<double, N, N>::Zero();
  if (v.size() == static_cast<std::size_t>(N)) {
    for (int i = 0; i < N; ++i) m(i, i) = v[static_cast<std::size_t>(i)];
  } else if (v.size() == static_cast<std::size_t>(N * N)) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = v[static_cast<std::size_t>(i * N + j)];
  } else {
    throw std::invalid_argument(std::string(key) + " expects " + std::to_string(N) + " or " +
                                std::to_string(N * N) + " values");
  }
  return m;
}

template <int N>
std::string format_matrix(const Eigen::Matrix<double, N, N>& m) {
  std::string out;
  const bool diagonal = m.isApprox(Eigen::Matrix<double, N, N>(m.diagonal().asDiagonal()), 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (diagonal && i != j) continue;
      if (!out.empty()) out += ' ';
      append_number(out, m(i, j));
    }
  }
  return out;
}

}  // namespace

// ---- sensor log ----------------------------------------------------------------

void write_log(std::ostream& os, std::span<const SensorRecord> records, bool with_truth) {
  os << (with_truth ? kLogTruthHeader : kLogHeader) << '\n';
  std::string line;
  for (const auto& r : records) {
    line.clear();
    append_number(line, r.t);
    for (const Vector3* v : {&r.gyro, &r.accel, &r.mag}) {
      for (int i = 0; i < 3; ++i) {
        line += ',';
        append_number(line, (*v)(i));
      }
    }
    if (with_truth) {
      if (!r.truth) throw std::invalid_argument("write_log: record without truth");
      for (double a : {r.truth->roll, r.truth->pitch, r.truth->yaw}) {
        line += ',';
        append_number(line, a);
      }
    }
    line += '\n';
    os << line;
  }
}

std::vector<SensorRecord> read_log(std::istream& is) {
  std::string line;
  if (!getline_lf(is, line)) throw std::invalid_argument("log: empty input");
  bool with_truth = false;
  if (line == kLogTruthHeader) {
    with_truth = true;
  } else if (line != kLogHeader) {
    throw std::invalid_argument("log: unexpected header '" + line + "'");
  }
  const std::size_t columns = with_truth ? 13 : 10;

  std::vector<SensorRecord> records;
  std::size_t line_no = 1;
  while (getline_lf(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != columns) {
      throw std::invalid_argument(line_error(line_no, "expected " + std::to_string(columns) +
                                                          " columns, got " + std::to_string(cells.size())));
    }
    try {
      SensorRecord r;
      r.t = parse_number(cells[0]);
      r.gyro = {parse_number(cells[1]), parse_number(cells[2]), parse_number(cells[3])};
      r.accel = {parse_number(cells[4]), parse_number(cells[5]), parse_number(cells[6])};
      r.mag = {parse_number(cells[7], true), parse_number(cells[8], true), parse_number(cells[9], true)};
      if (with_truth) {
        r.truth = EulerAngles{parse_number(cells[10]), parse_number(cells[11]), parse_number(cells[12])};
      }
      records.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(line_error(line_no, e.what()));
    }
  }
  return records;
}

void write_estimates(std::ostream& os, std::span<const AttitudeEstimate> estimates) {
  os << kEstimateHeader << '\n';
  std::string line;
  for (const auto& e : estimates) {
    line.clear();
    append_number(line, e.t);
    for (double v : {e.angles.roll, e.angles.pitch, e.angles.yaw, e.q.w, e.q.x, e.q.y, e.q.z,
                     e.bias.x(), e.bias.y(), e.bias.z()}) {
      line += ',';
      append_number(line, v);
    }
    line += '\n';
    os << line;
  }
}

std::vector<TimedAngles> read_estimates(std::istream& is) {
  std::string line;
  if (!getline_lf(is, line)) throw std::invalid_argument("estimates: empty input");
  if (line != kEstimateHeader) throw std::invalid_argument("estimates: unexpected header '" + line + "'");
  std::vector<TimedAngles> out;
  std::size_t line_no = 1;
  while (getline_lf(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 11) throw std::invalid_argument(line_error(line_no, "expected 11 columns"));
    try {
      out.push_back({parse_number(cells[0]),
                     {parse_number(cells[1]), parse_number(cells[2]), parse_number(cells[3])}});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(line_error(line_no, e.what()));
    }
  }
  return out;
}

std::vector<TimedAngles> truth_series(std::span<const SensorRecord> records) {
  std::vector<TimedAngles> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.truth) throw std::invalid_argument("log has no truth columns");
    out.push_back({r.t, *r.truth});
  }
  return out;
}

std::vector<TimedAngles> estimate_series(std::span<const AttitudeEstimate> estimates) {
  std::vector<TimedAngles> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.push_back({e.t, e.angles});
  return out;
}

std::vector<SensorRecord> load_log(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_log(is);
}

void save_log(const std::filesystem::path& path, std::span<const SensorRecord> records,
              bool with_truth) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_log(os, records, with_truth);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// ---- pipeline config -------------------------------------------------------------

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  for_each_entry(text, [&cfg](std::string_view key, std::string_view value) {
    if (key == "algorithm") cfg.algorithm = parse_algorithm(value);
    else if (key == "coupling") cfg.coupling = parse_coupling(value);
    else if (key == "imu_rate") cfg.imu_rate = scalar(key, value);
    else if (key == "mag_rate") cfg.mag_rate = scalar(key, value);
    else if (key == "alignment_s") cfg.alignment_duration = scalar(key, value);
    else if (key == "align_bias") cfg.align_bias = boolean(key, value);
    else if (key == "noise.q") cfg.noise.Q = matrix<6>(key, value);
    else if (key == "noise.ra") cfg.noise.Ra_nominal = matrix<2>(key, value);
    else if (key == "noise.rm") cfg.noise.Rm = scalar(key, value);
    else if (key == "noise.tau_g") cfg.noise.tau_g = scalar(key, value);
    else if (key == "noise.lambda_a") cfg.noise.lambda_a = scalar(key, value);
    else if (key == "noise.gamma2_max") cfg.noise.gamma2_max = scalar(key, value);
    else if (key == "noise.gravity") cfg.noise.gravity = scalar(key, value);
    else if (key == "noise.p0") cfg.noise.P0 = matrix<6>(key, value);
    else if (key == "fasteuler.gravity") cfg.fast_euler.gravity = scalar(key, value);
    else if (key == "fasteuler.accel_gate") cfg.fast_euler.accel_gate = scalar(key, value);
    else if (key == "cf.kp") cfg.cf.kp = scalar(key, value);
    else if (key == "cf.ki") cfg.cf.ki = scalar(key, value);
    else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
  });
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

std::string format_config(const PipelineConfig& cfg) {
  std::string out;
  const auto put = [&out](std::string_view key, const std::string& value) {
    out.append(key).append(" = ").append(value).append("\n");
  };
  const auto num = [](double v) {
    std::string s;
    append_number(s, v);
    return s;
  };
  put("algorithm", std::string(to_string(cfg.algorithm)));
  put("coupling", std::string(to_string(cfg.coupling)));
  put("imu_rate", num(cfg.imu_rate));
  put("mag_rate", num(cfg.mag_rate));
  put("alignment_s", num(cfg.alignment_duration));
  put("align_bias", cfg.align_bias ? "true" : "false");
  put("noise.q", format_matrix<6>(cfg.noise.Q));
  put("noise.ra", format_matrix<2>(cfg.noise.Ra_nominal));
  put("noise.rm", num(cfg.noise.Rm));
  put("noise.tau_g", num(cfg.noise.tau_g));
  put("noise.lambda_a", num(cfg.noise.lambda_a));
  put("noise.gamma2_max", num(cfg.noise.gamma2_max));
  put("noise.gravity", num(cfg.noise.gravity));
  put("noise.p0", format_matrix<6>(cfg.noise.P0));
  put("fasteuler.gravity", num(cfg.fast_euler.gravity));
  put("fasteuler.accel_gate", num(cfg.fast_euler.accel_gate));
  put("cf.kp", num(cfg.cf.kp));
  put("cf.ki", num(cfg.cf.ki));
  return out;
}

// ---- simulation spec ----------------------------------------------------------------

SimulationSpec parse_simulation(std::string_view text) {
  SimulationSpec spec;
  for_each_entry(text, [&spec](std::string_view key, std::string_view value) {
    if (key == "rate") {
      spec.rate = scalar(key, value);
    } else if (key == "seed") {
      const double s = scalar(key, value);
      if (s < 0.0 || s != std::floor(s)) throw std::invalid_argument("seed must be a non-negative integer");
      spec.seed = static_cast<std::uint64_t>(s);
    } else if (key == "initial") {
      const Vector3 v = vector3(key, value);
      spec.trajectory.initial = {v.x(), v.y(), v.z()};
    } else if (key == "segment") {
      const auto v = parse_numbers(value);
      if (v.size() != 7) throw std::invalid_argument("segment expects duration wx wy wz ax ay az");
      spec.trajectory.segments.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
    } else if (key == "gyro.bias") spec.gyro.constant_bias = vector3(key, value);
    else if (key == "gyro.tau_g") spec.gyro.tau_g = scalar(key, value);
    else if (key == "gyro.markov_density") spec.gyro.markov_density = scalar(key, value);
    else if (key == "gyro.white_density") spec.gyro.white_density = scalar(key, value);
    else if (key == "accel.white_density") spec.accel.white_density = scalar(key, value);
    else if (key == "accel.gravity") spec.accel.gravity = scalar(key, value);
    else if (key == "mag.field") spec.mag.field_ned = vector3(key, value);
    else if (key == "mag.white_density") spec.mag.white_density = scalar(key, value);
    else if (key == "mag.rate") spec.mag.rate = scalar(key, value);
    else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
  });
  spec.trajectory.validate();
  if (!(spec.rate > 0.0)) throw std::invalid_argument("rate must be positive");
  return spec;
}

SimulationSpec load_simulation(const std::filesystem::path& path) {
  return parse_simulation(read_text_file(path));
}

}  // namespace fdlkf
