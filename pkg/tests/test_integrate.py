import math
from dataclasses import replace

import numpy as np
import pytest

from ehdring.checks import pendulum_setup, upward_crossings
from ehdring.drive import DriveSignal, switch_times, voltage_at
from ehdring.dynamics import SimOptions, State, energy_audit, integrate, pendulum_energy
from ehdring.dynamics.backend import compiled
from ehdring.dynamics.integrate import step_grid
from ehdring.errors import (
    DivergenceError,
    InvalidInputError,
    InvalidStepError,
    SingularMassMatrixError,
)


def test_rest_stays_at_rest(ref_cfg):
    s = DriveSignal(v_max=4.5, duty=0.0, frequency=5.0)
    tr = integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 1.0, 2.5e-4, SimOptions(dry_friction=True))
    for arr in (tr.theta1, tr.theta2, tr.omega1, tr.omega2, tr.voltage):
        assert np.all(arr == 0.0)
    assert tr.t[0] == 0.0 and tr.t[-1] == 1.0


def test_steps_land_on_switches(ref_cfg):
    s = ref_cfg.signal
    dt = 3e-4
    tr = integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 1.0, dt, ref_cfg.options)
    t = tr.t
    assert np.all(np.diff(t) > 0)
    assert np.max(np.diff(t)) <= dt * (1 + 1e-9)
    assert set(switch_times(s, 0.0, 1.0)) <= set(t.tolist())
    assert np.array_equal(tr.voltage, [voltage_at(s, x) for x in t])


def test_step_grid_short_final_step():
    s = DriveSignal(v_max=1.0, duty=0.5, frequency=1.0)
    g = step_grid(s, 0.0, 1.0, 0.3)
    assert g.tolist() == pytest.approx([0.0, 0.3, 0.5, 0.8, 1.0], abs=1e-15)


def test_step_must_resolve_both_phases(ref_cfg):
    s = DriveSignal(v_max=4.5, duty=0.9, frequency=5.0)
    # off phase lasts 0.02 s, so dt may not exceed 0.005 s
    with pytest.raises(InvalidStepError):
        integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 1.0, 0.006)
    integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 0.1, 0.0049)
    with pytest.raises(InvalidStepError):
        integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 1.0, 0.0)


def test_end_time_must_follow_start(ref_cfg):
    with pytest.raises(InvalidInputError):
        integrate(State(t=1.0), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal, 1.0, 1e-3)


def test_divergence_names_time(ref_cfg):
    # the pump torque overflows once the fluid inertia divides it
    pump = replace(ref_cfg.pump, pressure_scale=1e306)
    with pytest.raises(DivergenceError) as info:
        integrate(State(), ref_cfg.robot, pump, ref_cfg.signal, 2.0, 2.5e-4, ref_cfg.options)
    assert info.value.t == 2.5e-4
    assert repr(info.value.t) in str(info.value)


def test_singular_mass_matrix_surfaces(ref_cfg):
    with pytest.raises(SingularMassMatrixError) as info:
        integrate(State(), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal, 0.1, 2.5e-4,
                  SimOptions(det_floor=1.0))
    assert info.value.t == 0.0


def test_deterministic(ref_cfg):
    a = integrate(State(), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal, 1.0, 2.5e-4, ref_cfg.options)
    b = integrate(State(), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal, 1.0, 2.5e-4, ref_cfg.options)
    for f in ("t", "theta1", "theta2", "omega1", "omega2", "voltage"):
        assert np.array_equal(getattr(a, f), getattr(b, f))


@pytest.mark.skipif(compiled is None, reason="compiled kernel not built")
def test_backends_bit_identical(ref_cfg):
    runs = [integrate(State(0.0, 0.1, -0.2, 0.3, 0.0), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal,
                      2.0, 2.5e-4, ref_cfg.options, kernel=k) for k in ("python", "cython")]
    for f in ("theta1", "theta2", "omega1", "omega2"):
        assert np.array_equal(getattr(runs[0], f), getattr(runs[1], f))


def _pendulum(ref_cfg, xi_m2=0.0, periods=10, dt=2.5e-4):
    robot, signal, period = pendulum_setup(ref_cfg.robot)
    robot = replace(robot, xi_m2=xi_m2)
    tr = integrate(State(theta2=0.05), robot, ref_cfg.pump, signal, periods * period, dt)
    return tr, robot, period


def test_pendulum_frequency(ref_cfg):
    tr, robot, period = _pendulum(ref_cfg)
    tc = upward_crossings(tr.t, tr.theta2)
    f = (len(tc) - 1) / (tc[-1] - tc[0])
    assert f == pytest.approx(math.sqrt(robot.g / robot.r2) / (2 * math.pi), rel=0.01)


def test_pendulum_energy_conserved(ref_cfg):
    tr, robot, _ = _pendulum(ref_cfg)
    e = pendulum_energy(robot, tr.theta2, tr.omega2)
    assert np.max(np.abs(e - e[0])) <= 1e-6 * e[0]
    assert robot.j1 >= 1e6 * robot.m2 * robot.r2 ** 2


def test_pendulum_energy_decays_with_damping(ref_cfg):
    tr, robot, period = _pendulum(ref_cfg, xi_m2=2e-6)
    # period starts of the idle waveform are exact sample times
    marks = np.arange(0.0, tr.t[-1], tr.signal.period)
    idx = [int(np.argmin(np.abs(tr.t - m))) for m in marks]
    e = pendulum_energy(robot, tr.theta2[idx], tr.omega2[idx])
    assert np.all(np.diff(e) <= 0)
    assert e[-1] < e[0]


def test_energy_audit_at_rest(ref_cfg):
    s = DriveSignal(v_max=4.5, duty=0.0, frequency=5.0)
    tr = integrate(State(), ref_cfg.robot, ref_cfg.pump, s, 1.0, 2.5e-4)
    audit = energy_audit(tr)
    assert np.all(audit.residual == 0.0)
    assert np.all(audit.relative == 0.0)


def test_energy_audit_pendulum(ref_cfg):
    tr, robot, _ = _pendulum(ref_cfg)
    audit = energy_audit(tr, robot)
    assert np.max(np.abs(audit.relative)) <= 1e-8
    assert all(b.u_ehd >= 0 for b in audit.breakdown)


def test_energy_audit_driven_reports(ref_cfg):
    tr = integrate(State(), ref_cfg.robot, ref_cfg.pump, ref_cfg.signal, 1.0, 2.5e-4, ref_cfg.options)
    audit = energy_audit(tr)
    assert len(audit.residual) == len(tr)
    assert np.all(np.isfinite(audit.residual))
    assert audit.work[-1] > 0


def test_damping_never_raises_ring_rate(ref_cfg):
    c = ref_cfg
    a = integrate(State(), c.robot, c.pump, c.signal, 5.0, c.options.dt, c.options)
    r2 = replace(c.robot, xi_m1=2 * c.robot.xi_m1, xi_m2=2 * c.robot.xi_m2)
    b = integrate(State(), r2, c.pump, c.signal, 5.0, c.options.dt, c.options)
    worse = int(np.count_nonzero(np.abs(b.omega1) > np.abs(a.omega1)))
    assert worse == 0, f"|omega1| larger with doubled damping at {worse} of {len(a)} samples"


def test_damping_lowers_mean_ring_rate(ref_cfg):
    c = ref_cfg
    a = integrate(State(), c.robot, c.pump, c.signal, 5.0, c.options.dt, c.options)
    r2 = replace(c.robot, xi_m1=2 * c.robot.xi_m1, xi_m2=2 * c.robot.xi_m2)
    b = integrate(State(), r2, c.pump, c.signal, 5.0, c.options.dt, c.options)
    last = a.t >= 4.0
    assert np.mean(np.abs(b.omega1[last])) < np.mean(np.abs(a.omega1[last]))
