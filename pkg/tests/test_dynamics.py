import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehdring.checks import det_sweep, inverse_solution, random_states
from ehdring.drive import DriveSignal
from ehdring.dynamics import (
    SimOptions,
    State,
    SystemMatrices,
    derivatives,
    drive_force,
    dry_torque,
    energy_terms,
    solve_accel,
    system_matrices,
)
from ehdring.dynamics import _kernel_py
from ehdring.dynamics.backend import compiled
from ehdring.errors import SingularMassMatrixError
from ehdring.pump import PumpModel
from ehdring.statics import RobotParams, friction_torque

UNIT = PumpModel(pressure_scale=1.0, flow_scale=1.0)
angles = st.floats(-math.pi, math.pi)
rates = st.floats(-20.0, 20.0)


def test_drive_force_examples(robot):
    p = RobotParams(m1=4e-3, m2=2e-3, r1=0.03, r2=0.02, j1=3e-6, j2=1e-6, area=1e-5)
    assert drive_force(UNIT, p, 0.0) == 0.0
    assert drive_force(UNIT, p, 10.0) == pytest.approx(1.9489e-3, rel=1e-12)
    p2 = RobotParams(m1=4e-3, m2=2e-3, r1=0.03, r2=0.02, j1=3e-6, j2=1e-6, area=3e-5)
    assert drive_force(UNIT, p2, 10.0) == pytest.approx(3 * drive_force(UNIT, p, 10.0), rel=1e-15)


def test_matrices_at_rest(robot, pump):
    p = robot
    mats = system_matrices(State(), p, pump, 0.0)
    assert mats.c == (0.0, 0.0)
    assert mats.m[0][1] == pytest.approx(-p.j2 + p.m2 * p.r1 * p.r2, rel=1e-15)
    assert mats.m[1][1] == p.m2 * p.r2 ** 2


def test_matrices_quarter_turn(robot, pump):
    p = robot
    mats = system_matrices(State(theta2=math.pi / 2), p, pump, 0.0)
    ref = p.j1 + p.m1 * p.r1 ** 2 + p.m2 * p.r1 ** 2 + p.j2
    assert mats.m[0][0] == pytest.approx(ref, rel=1e-15)


def test_forcing_includes_pump_torque(robot, pump):
    p = robot
    s = State(theta1=0.2, theta2=0.5)
    v = 4.5
    mats = system_matrices(s, p, pump, v)
    grav = p.m2 * p.g * p.r2 * math.sin(0.3)
    force = (2.152 * v * v - 2.031 * v) * pump.pressure_scale * p.area
    assert mats.c[0] == pytest.approx(grav, rel=1e-14)
    assert mats.c[1] == pytest.approx(force * p.r2 - grav, rel=1e-14)


@given(angles, angles, rates, rates)
def test_damping_structure(t1, t2, w1, w2):
    p = RobotParams(m1=4e-3, m2=2e-3, r1=0.03, r2=0.024, j1=3.6e-6, j2=1.2e-6,
                    area=1.2e-5, xi_m1=2e-5, xi_m2=4e-5)
    mats = system_matrices(State(0.0, t1, t2, w1, w2), p, UNIT, 0.0)
    assert mats.k[1][0] == 0.0
    assert mats.k[1][1] == p.xi_m2
    assert mats.k[0][0] == mats.k[0][1]
    ref = p.m2 * p.r1 * p.r2 * (w2 - w1) * math.sin(t2 - t1) + p.xi_m1
    assert mats.k[0][0] == pytest.approx(ref, rel=1e-12, abs=1e-18)
    assert mats.m[1][1] > 0


def test_solve_zero_state(robot, pump):
    mats = system_matrices(State(), robot, pump, 0.0)
    assert solve_accel(mats, State()) == (0.0, 0.0)


def test_solve_diagonal():
    mats = SystemMatrices(m=((2.0, 0.0), (0.0, 5.0)), k=((0.0, 0.0), (0.0, 0.0)), c=(3.0, -1.0))
    a1, a2 = solve_accel(mats, State())
    assert a1 == pytest.approx(1.5, rel=1e-15)
    assert a2 == pytest.approx(-0.2, rel=1e-15)


def test_solve_matches_inverse(robot, pump):
    for state, v, tau in random_states(robot, 1000, seed=99):
        mats = system_matrices(state, robot, pump, v)
        got = solve_accel(mats, state, tau)
        ref = inverse_solution(mats, state, tau)
        scale = max(abs(ref[0]), abs(ref[1]))
        assert abs(got[0] - ref[0]) <= 1e-12 * scale
        assert abs(got[1] - ref[1]) <= 1e-12 * scale


def test_solve_pivots_on_small_leading_entry():
    mats = SystemMatrices(m=((1e-20, 1.0), (1.0, 1.0)), k=((0.0, 0.0), (0.0, 0.0)), c=(1.0, 2.0))
    a1, a2 = solve_accel(mats, State(), det_floor=0.0)
    assert a1 == pytest.approx(1.0, rel=1e-12)
    assert a2 == pytest.approx(1.0, rel=1e-12)


def test_singular_matrix_reports_state(robot, pump):
    s = State(t=1.25, theta1=0.1, theta2=0.4)
    mats = system_matrices(s, robot, pump, 0.0)
    with pytest.raises(SingularMassMatrixError) as info:
        solve_accel(mats, s, det_floor=1.0)
    assert info.value.t == 1.25
    assert "theta1=0.1" in str(info.value)


def test_dry_torque_regularized(robot):
    tf = friction_torque(robot)
    assert dry_torque(robot, 0.0, 0.02) == 0.0
    assert dry_torque(robot, 10.0, 0.02) == pytest.approx(tf, rel=1e-12)
    assert dry_torque(robot, -10.0, 0.02) == pytest.approx(-tf, rel=1e-12)


def test_derivatives_at_rest_undriven(robot, pump):
    s = DriveSignal(v_max=4.5, duty=0.0, frequency=5.0)
    assert derivatives(State(), robot, pump, s, SimOptions(dry_friction=True)) == (0.0, 0.0, 0.0, 0.0)


def test_derivatives_pendulum_limit(robot, pump):
    from dataclasses import replace
    p = replace(robot, j1=1e12 * robot.m2 * robot.r2 ** 2, k1=0.0, xi_m1=0.0)
    s = DriveSignal(v_max=0.0, duty=0.0, frequency=5.0)
    th2, w2 = 0.01, 0.3
    d = derivatives(State(theta2=th2, omega2=w2), p, pump, s)
    ref = -(p.g / p.r2) * th2 - p.xi_m2 / (p.m2 * p.r2 ** 2) * w2
    assert d[3] == pytest.approx(ref, rel=1e-3)
    assert abs(d[2]) < 1e-9 * abs(d[3])


@given(angles, angles, rates, rates)
def test_mirror_symmetry(t1, t2, w1, w2):
    p = RobotParams(m1=4e-3, m2=2e-3, r1=0.03, r2=0.024, j1=3.6e-6, j2=1.2e-6, area=1.2e-5)
    sig = DriveSignal(v_max=0.0, duty=0.0, frequency=5.0)
    a = derivatives(State(0.0, t1, t2, w1, w2), p, UNIT, sig)
    b = derivatives(State(0.0, -t1, -t2, -w1, -w2), p, UNIT, sig)
    for x, y in zip(a[2:], b[2:]):
        assert y == pytest.approx(-x, rel=1e-9, abs=1e-9)


def test_det_positive_over_full_turn(ref_cfg):
    dets = det_sweep(ref_cfg.robot, ref_cfg.pump)
    assert np.all(dets > 0)
    assert dets.min() >= ref_cfg.options.det_floor


def test_energy_terms(robot):
    e0 = energy_terms(robot, 0.0, 0.0, 0.0, 0.0)
    assert e0.u_ehd == 0.0 and e0.k_ring == 0.0 and e0.rayleigh_power == 0.0
    e = energy_terms(robot, 0.3, -1.0, 2.0, -0.5)
    assert e.u_ring == e0.u_ring == robot.m1 * robot.g * robot.r1
    assert e.u_ehd == pytest.approx(robot.m2 * robot.g * robot.r2 * (1 - math.cos(-1.3)), rel=1e-12)
    assert e.k_ehd == pytest.approx(0.5 * robot.m2 * (2.0 * robot.r1) ** 2
                                    + robot.m2 * robot.r1 * robot.r2 * (-2.5) * math.cos(-1.3), rel=1e-12)
    assert e.rayleigh_power == pytest.approx(0.5 * (robot.xi_m1 * 4 + robot.xi_m2 * 0.25), rel=1e-12)


@given(angles, angles, rates, rates)
def test_potential_nonnegative(t1, t2, w1, w2):
    p = RobotParams(m1=4e-3, m2=2e-3, r1=0.03, r2=0.024, j1=3.6e-6, j2=1.2e-6, area=1.2e-5)
    assert energy_terms(p, t1, t2, w1, w2).u_ehd >= 0.0


@pytest.mark.parametrize("kernel", ["python", "cython"])
def test_kernel_accel_matches_model(ref_cfg, kernel):
    if kernel == "cython" and compiled is None:
        pytest.skip("compiled kernel not built")
    mod = _kernel_py if kernel == "python" else compiled
    p = ref_cfg.robot
    params = (p.m1, p.m2, p.r1, p.r2, p.j1, p.j2, p.g, p.xi_m1, p.xi_m2)
    tf = friction_torque(p)
    rng = random.Random(4)
    for _ in range(500):
        st_ = State(0.0, rng.uniform(-7, 7), rng.uniform(-7, 7), rng.uniform(-5, 5), rng.uniform(-5, 5))
        v = rng.choice([0.0, 4.5])
        mats = system_matrices(st_, p, ref_cfg.pump, v)
        tau = dry_torque(p, st_.omega1, 0.02)
        ref = solve_accel(mats, st_, tau)
        got = mod.accel(params, st_.theta1, st_.theta2, st_.omega1, st_.omega2,
                        drive_force(ref_cfg.pump, p, v) * p.r2, tf, 0.02, 1e-18)
        assert got[:2] == ref
