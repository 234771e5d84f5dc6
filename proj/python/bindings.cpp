#include "fdlkf/cf.hpp"
#include "fdlkf/dlkf.hpp"
#include "fdlkf/eval.hpp"
#include "fdlkf/fasteuler.hpp"
#include "fdlkf/io.hpp"
#include "fdlkf/pipeline.hpp"
#include "fdlkf/propagator.hpp"
#include "fdlkf/sim.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fdlkf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array make_array(std::size_t rows, std::size_t cols) {
  return Array({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
}

// Log as a dict of numpy arrays: t (N), gyro/accel/mag (N x 3), truth (N x 3, if present).
py::dict records_to_dict(std::span<const SensorRecord> recs) {
  const std::size_t n = recs.size();
  Array t({static_cast<py::ssize_t>(n)});
  auto gyro = make_array(n, 3), accel = make_array(n, 3), mag = make_array(n, 3);
  const bool has_truth = n > 0 && recs.front().truth.has_value();
  auto truth = make_array(has_truth ? n : 0, 3);
  auto tv = t.mutable_unchecked<1>();
  auto g = gyro.mutable_unchecked<2>(), a = accel.mutable_unchecked<2>(), m = mag.mutable_unchecked<2>();
  for (std::size_t k = 0; k < n; ++k) {
    tv(k) = recs[k].t;
    for (int i = 0; i < 3; ++i) {
      g(k, i) = recs[k].gyro(i);
      a(k, i) = recs[k].accel(i);
      m(k, i) = recs[k].mag(i);
    }
  }
  if (has_truth) {
    auto tr = truth.mutable_unchecked<2>();
    for (std::size_t k = 0; k < n; ++k) {
      tr(k, 0) = recs[k].truth->roll;
      tr(k, 1) = recs[k].truth->pitch;
      tr(k, 2) = recs[k].truth->yaw;
    }
  }
  py::dict d;
  d["t"] = t;
  d["gyro"] = gyro;
  d["accel"] = accel;
  d["mag"] = mag;
  if (has_truth) d["truth"] = truth;
  return d;
}

std::vector<SensorRecord> dict_to_records(const py::dict& d) {
  const Array t = d["t"].cast<Array>();
  const Array gyro = d["gyro"].cast<Array>(), accel = d["accel"].cast<Array>(), mag = d["mag"].cast<Array>();
  const std::size_t n = static_cast<std::size_t>(t.size());
  for (const Array* a : {&gyro, &accel, &mag}) {
    if (a->ndim() != 2 || a->shape(0) != static_cast<py::ssize_t>(n) || a->shape(1) != 3) {
      throw std::invalid_argument("gyro, accel and mag must be N x 3 arrays matching t");
    }
  }
  const auto tv = t.unchecked<1>();
  const auto g = gyro.unchecked<2>(), a = accel.unchecked<2>(), m = mag.unchecked<2>();
  std::vector<SensorRecord> recs(n);
  for (std::size_t k = 0; k < n; ++k) {
    recs[k].t = tv(k);
    recs[k].gyro = Vector3(g(k, 0), g(k, 1), g(k, 2));
    recs[k].accel = Vector3(a(k, 0), a(k, 1), a(k, 2));
    recs[k].mag = Vector3(m(k, 0), m(k, 1), m(k, 2));
  }
  return recs;
}

py::dict estimates_to_dict(std::span<const AttitudeEstimate> est) {
  const std::size_t n = est.size();
  Array t({static_cast<py::ssize_t>(n)});
  auto angles = make_array(n, 3), quat = make_array(n, 4), bias = make_array(n, 3);
  auto tv = t.mutable_unchecked<1>();
  auto an = angles.mutable_unchecked<2>(), q = quat.mutable_unchecked<2>(), b = bias.mutable_unchecked<2>();
  for (std::size_t k = 0; k < n; ++k) {
    tv(k) = est[k].t;
    an(k, 0) = est[k].angles.roll;
    an(k, 1) = est[k].angles.pitch;
    an(k, 2) = est[k].angles.yaw;
    q(k, 0) = est[k].q.w;
    q(k, 1) = est[k].q.x;
    q(k, 2) = est[k].q.y;
    q(k, 3) = est[k].q.z;
    for (int i = 0; i < 3; ++i) b(k, i) = est[k].bias(i);
  }
  py::dict d;
  d["t"] = t;
  d["angles"] = angles;
  d["q"] = quat;
  d["bias"] = bias;
  return d;
}

std::vector<EulerAngles> rows_to_angles(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw std::invalid_argument("angles must be an N x 3 array");
  const auto v = a.unchecked<2>();
  std::vector<EulerAngles> out(static_cast<std::size_t>(a.shape(0)));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {v(k, 0), v(k, 1), v(k, 2)};
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FastEuler double-layer Kalman filter AHRS core";

  py::class_<Quaternion>(m, "Quaternion")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("w"), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("w", &Quaternion::w)
      .def_readwrite("x", &Quaternion::x)
      .def_readwrite("y", &Quaternion::y)
      .def_readwrite("z", &Quaternion::z)
      .def("norm", &Quaternion::norm)
      .def("conjugate", &Quaternion::conjugate)
      .def("normalized", &Quaternion::normalized)
      .def("__mul__", &quat_multiply)
      .def("__eq__", [](const Quaternion& a, const Quaternion& b) { return a == b; })
      .def("__repr__", [](const Quaternion& q) {
        std::ostringstream os;
        os.precision(17);
        os << "Quaternion(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
        return os.str();
      });

  py::class_<EulerAngles>(m, "EulerAngles")
      .def(py::init<>())
      .def(py::init([](double r, double p, double y) { return EulerAngles{r, p, y}; }),
           py::arg("roll"), py::arg("pitch"), py::arg("yaw"))
      .def_readwrite("roll", &EulerAngles::roll)
      .def_readwrite("pitch", &EulerAngles::pitch)
      .def_readwrite("yaw", &EulerAngles::yaw)
      .def("__iter__", [](const EulerAngles& e) { return py::iter(py::make_tuple(e.roll, e.pitch, e.yaw)); })
      .def("__repr__", [](const EulerAngles& e) {
        std::ostringstream os;
        os << "EulerAngles(" << e.roll << ", " << e.pitch << ", " << e.yaw << ")";
        return os.str();
      });

  m.def("quat_multiply", &quat_multiply);
  m.def("rotvec_to_quat", &rotvec_to_quat, py::arg("rotvec"));
  m.def("quat_to_euler", &quat_to_euler);
  m.def("euler_to_quat", &euler_to_quat);
  m.def("quat_to_dcm", &quat_to_dcm);
  m.def("wrap_yaw", &wrap_yaw);
  m.def("wrap_pi", &wrap_pi);

  py::class_<FastEulerConfig>(m, "FastEulerConfig")
      .def(py::init<>())
      .def_readwrite("gravity", &FastEulerConfig::gravity)
      .def_readwrite("accel_gate", &FastEulerConfig::accel_gate);

  m.def(
      "accel_roll_pitch",
      [](const Vector3& accel, const FastEulerConfig& cfg) -> std::optional<std::pair<double, double>> {
        const auto rp = accel_roll_pitch(accel, cfg);
        if (!rp) return std::nullopt;
        return std::pair{rp->roll, rp->pitch};
      },
      py::arg("accel"), py::arg("cfg") = FastEulerConfig{});
  m.def("mag_yaw", &mag_yaw, py::arg("mag"), py::arg("roll"), py::arg("pitch"));

  py::class_<PropagatorState>(m, "PropagatorState")
      .def(py::init<>())
      .def_readwrite("q", &PropagatorState::q)
      .def_readwrite("bias", &PropagatorState::bias)
      .def_readwrite("t", &PropagatorState::t);
  m.def("propagate", &propagate, py::arg("state"), py::arg("gyro"), py::arg("dt"));

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init(&NoiseConfig::defaults))
      .def_readwrite("Q", &NoiseConfig::Q)
      .def_readwrite("Ra_nominal", &NoiseConfig::Ra_nominal)
      .def_readwrite("Rm", &NoiseConfig::Rm)
      .def_readwrite("tau_g", &NoiseConfig::tau_g)
      .def_readwrite("lambda_a", &NoiseConfig::lambda_a)
      .def_readwrite("gamma2_max", &NoiseConfig::gamma2_max)
      .def_readwrite("gravity", &NoiseConfig::gravity)
      .def_readwrite("P0", &NoiseConfig::P0)
      .def("validate", &NoiseConfig::validate);

  py::class_<FilterState>(m, "FilterState")
      .def(py::init<>())
      .def_readwrite("x", &FilterState::x)
      .def_readwrite("P", &FilterState::P);

  m.def("time_update", &time_update, py::arg("fs"), py::arg("cbn"), py::arg("dt"), py::arg("cfg"));
  m.def("euler_rate_matrix", &euler_rate_matrix, py::arg("roll"), py::arg("pitch"));
  m.def("adaptive_gamma2", &adaptive_gamma2, py::arg("accel"), py::arg("cfg"));
  m.def("adaptive_ra", &adaptive_ra, py::arg("accel"), py::arg("cfg"));
  m.def("accel_update", &accel_update, py::arg("fs"), py::arg("z1"), py::arg("ra"));
  m.def("mag_update", &mag_update, py::arg("fs"), py::arg("z2"), py::arg("rm"));
  m.def("apply_correction", &apply_correction, py::arg("prop"), py::arg("fs"));

  py::enum_<Algorithm>(m, "Algorithm")
      .value("DLKF", Algorithm::Dlkf)
      .value("CF", Algorithm::Cf)
      .value("GYRO_ONLY", Algorithm::GyroOnly);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("algorithm", &PipelineConfig::algorithm)
      .def_readwrite("noise", &PipelineConfig::noise)
      .def_readwrite("fast_euler", &PipelineConfig::fast_euler)
      .def_readwrite("imu_rate", &PipelineConfig::imu_rate)
      .def_readwrite("mag_rate", &PipelineConfig::mag_rate)
      .def_readwrite("alignment_duration", &PipelineConfig::alignment_duration)
      .def_readwrite("align_bias", &PipelineConfig::align_bias)
      .def_property(
          "cf_kp", [](const PipelineConfig& c) { return c.cf.kp; },
          [](PipelineConfig& c, double v) { c.cf.kp = v; })
      .def_property(
          "cf_ki", [](const PipelineConfig& c) { return c.cf.ki; },
          [](PipelineConfig& c, double v) { c.cf.ki = v; });

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("format_config", &format_config, py::arg("cfg"));

  m.def(
      "simulate_text",
      [](const std::string& spec_text) { return records_to_dict(simulate(parse_simulation(spec_text))); },
      py::arg("spec"), "Simulate from spec-file text; returns a dict of arrays.");
  m.def(
      "simulate_scenario",
      [](const std::string& name, std::uint64_t seed, double duration) {
        SimulationSpec spec;
        if (name == "benchmark") {
          spec = scenarios::benchmark_simulation(seed);
        } else if (name == "static") {
          spec = scenarios::stationary_simulation(duration, Vector3(0.02, -0.01, 0.015), seed);
        } else {
          throw std::invalid_argument("unknown scenario: " + name);
        }
        return records_to_dict(simulate(spec));
      },
      py::arg("name"), py::arg("seed") = 1, py::arg("duration") = 60.0);

  m.def(
      "run_pipeline",
      [](const py::dict& log, const PipelineConfig& cfg) {
        const auto recs = dict_to_records(log);
        std::vector<AttitudeEstimate> est;
        {
          py::gil_scoped_release release;
          est = run_pipeline(recs, cfg);
        }
        return estimates_to_dict(est);
      },
      py::arg("log"), py::arg("cfg") = PipelineConfig{});

  m.def(
      "rmse",
      [](const Array& est, const Array& truth) {
        const auto r = rmse(rows_to_angles(est), rows_to_angles(truth));
        return py::make_tuple(r.roll, r.pitch, r.yaw);
      },
      py::arg("est"), py::arg("truth"), "Per-angle RMSE in degrees from N x 3 radian arrays.");
  m.def("improvement", &improvement, py::arg("baseline_rmse"), py::arg("candidate_rmse"));
}
