import math

import numpy as np
import pytest

import fasteuler_dlkf as fd


def test_quaternion_ops():
    q = fd.euler_to_quat(fd.EulerAngles(0.0, 0.0, math.pi / 2))
    assert q.w == pytest.approx(math.sqrt(0.5))
    e = fd.quat_to_euler(q * q.conjugate())
    assert tuple(e) == pytest.approx((0.0, 0.0, 0.0))
    assert fd.wrap_yaw(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
    c = fd.quat_to_dcm(q)
    assert c @ np.array([1.0, 0.0, 0.0]) == pytest.approx([0.0, 1.0, 0.0])


def test_fasteuler():
    roll, pitch = fd.accel_roll_pitch(np.array([0.0, -4.905, -8.4957]))
    assert roll == pytest.approx(math.pi / 6, abs=1e-4)
    assert fd.accel_roll_pitch(np.array([3.0, 0.0, -3.0])) is None
    assert fd.mag_yaw(np.array([0.0, -1.0, 0.0]), 0.0, 0.0) == pytest.approx(math.pi / 2)


def test_filter_layers():
    fs = fd.FilterState()
    out = fd.accel_update(fs, np.array([1.0, 0.0]), np.diag([0.5, 5.0]))
    assert out.x[0] == pytest.approx(1 / 1.5)
    out = fd.mag_update(fs, 1.0, 5.0)
    assert out.x[2] == pytest.approx(1 / 6)
    cfg = fd.NoiseConfig()
    assert fd.adaptive_gamma2(np.array([0.0, 0.0, -9.81]), cfg) == 1.0


def test_improvement():
    assert fd.improvement(1.7967, 1.3156) == pytest.approx(36.6, abs=0.1)
    assert fd.improvement(1.4317, 1.0091) == pytest.approx(41.9, abs=0.1)
    assert fd.improvement(4.0636, 2.850) == pytest.approx(42.6, abs=0.1)


def test_simulate_and_run():
    log = fd.simulate_text(
        "rate = 250\nseed = 2\nmag.rate = 10\ngyro.bias = 0.02 -0.01 0.015\n"
        "segment = 5 0 0 0 0 0 0\nsegment = 2 0.2 0 0 0 0 0\nsegment = 3 0 0 0 0 0 0\n"
    )
    assert log["gyro"].shape == (2501, 3)
    est = fd.run_pipeline(log)
    assert est["angles"].shape == (2501, 3)
    assert np.allclose(np.linalg.norm(est["q"], axis=1), 1.0)

    cfg = fd.PipelineConfig()
    cfg.algorithm = fd.Algorithm.CF
    cf = fd.run_pipeline(log, cfg)
    r_dlkf = fd.rmse(est["angles"], log["truth"])
    r_cf = fd.rmse(cf["angles"], log["truth"])
    assert all(v < 5.0 for v in r_dlkf + r_cf)


def test_config_round_trip():
    cfg = fd.parse_config("algorithm = cf\nnoise.lambda_a = 2\n")
    assert cfg.algorithm == fd.Algorithm.CF
    assert cfg.noise.lambda_a == 2.0
    assert fd.parse_config(fd.format_config(cfg)).noise.lambda_a == 2.0
    with pytest.raises(ValueError):
        fd.parse_config("noise.bogus = 1\n")
