from dataclasses import replace

import pytest

from ehdring.calibrate import calibrate_friction, calibrate_pump, rolling_cap


def test_pump_mode_recovers_polynomials(tmp_path):
    p = tmp_path / "pressure.csv"
    q = tmp_path / "flow.csv"
    p.write_text("voltage_kv,value\n" + "".join(f"{v},{2.152 * v * v - 2.031 * v!r}\n" for v in range(1, 12)))
    q.write_text("voltage_kv,value\n" + "".join(f"{v},{0.0076 * v * v + 0.0167 * v!r}\n" for v in range(1, 12)))
    fp, fq = calibrate_pump([p, q])
    assert (fp.a, fp.b) == pytest.approx((2.152, -2.031), rel=1e-12)
    assert (fq.a, fq.b) == pytest.approx((0.0076, 0.0167), rel=1e-10)


def test_friction_zero_target_zero_drive(ref_cfg):
    cfg = replace(ref_cfg, signal=replace(ref_cfg.signal, duty=0.0))
    fit = calibrate_friction(cfg, 0.0)
    assert fit.converged
    assert fit.residual == 0.0
    assert fit.iterations == 0


def test_friction_gives_up_within_budget(ref_cfg):
    # 50 rad/s is far out of reach
    fit = calibrate_friction(ref_cfg, 50.0, max_iter=5)
    assert not fit.converged
    assert fit.iterations <= 5
    assert fit.residual < 0


def test_rolling_cap(ref_cfg):
    r = ref_cfg.robot
    assert rolling_cap(r) * r.r1 * (r.m1 + r.m2) * r.g == pytest.approx(r.m2 * r.g * r.r2, rel=1e-12)
