"""Self-checks of the dynamic model against independent references.

Each check returns a :class:`CheckResult`; ``run_checks`` runs the full set
for a configuration (the ``check`` subcommand and the acceptance tests share
these routines).
"""

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from .drive import DriveSignal
from .dynamics.energy import pendulum_energy
from .dynamics.integrate import integrate
from .dynamics.model import SimOptions, State, solve_accel, system_matrices
from .errors import EHDError

# ring inertia used to freeze theta1 in the pendulum checks, in units of m2*r2^2
PENDULUM_J1_RATIO = 1.0e15
PENDULUM_THETA0 = 0.05
PENDULUM_PERIODS = 10
ORDER_HORIZON = 1.0
ORACLE_STATES = 1000
ORACLE_SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.detail}"


def pendulum_setup(robot):
    """Undriven, frictionless robot with a near-immovable ring."""
    frozen = replace(robot, j1=PENDULUM_J1_RATIO * robot.m2 * robot.r2 ** 2,
                     k1=0.0, xi_m1=0.0, xi_m2=0.0)
    signal = DriveSignal(v_max=0.0, duty=0.0, frequency=1.0)
    period = 2.0 * math.pi / math.sqrt(robot.g / robot.r2)
    return frozen, signal, period


def _pendulum_run(cfg, dt, robot=None):
    frozen, signal, period = pendulum_setup(robot or cfg.robot)
    opts = replace(cfg.options, dry_friction=False)
    traj = integrate(State(theta2=PENDULUM_THETA0), frozen, cfg.pump, signal,
                     PENDULUM_PERIODS * period, dt, opts)
    return traj, frozen, period


def upward_crossings(t, y):
    """Interpolated times where ``y`` crosses zero going up."""
    t = np.asarray(t)
    y = np.asarray(y)
    idx = np.nonzero((y[:-1] < 0) & (y[1:] >= 0))[0]
    return t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])


def check_pendulum_frequency(cfg, tol=0.01):
    traj, frozen, period = _pendulum_run(cfg, cfg.options.dt)
    tc = upward_crossings(traj.t, traj.theta2)
    if len(tc) < 2:
        return CheckResult("pendulum frequency", False, math.nan, tol, "no oscillation found")
    f_sim = (len(tc) - 1) / (tc[-1] - tc[0])
    f_ref = 1.0 / period
    rel = abs(f_sim / f_ref - 1.0)
    return CheckResult("pendulum frequency", rel <= tol, rel, tol,
                       f"f_sim={f_sim:.6f} Hz, f_ref={f_ref:.6f} Hz, rel err {rel:.2e} (limit {tol:g})")


def pendulum_drift(cfg, dt):
    traj, frozen, _ = _pendulum_run(cfg, dt)
    e = pendulum_energy(frozen, traj.theta2, traj.omega2)
    return float(np.max(np.abs(e - e[0])) / e[0])


def check_energy_drift(cfg, tol=1.0e-6, shrink=10.0):
    dt = cfg.options.dt
    d0 = pendulum_drift(cfg, dt)
    d2 = pendulum_drift(cfg, dt / 4.0)
    ratio = d0 / d2 if d2 > 0 else math.inf
    ok = d0 <= tol and ratio >= shrink
    return CheckResult("energy conservation", ok, d0, tol,
                       f"drift {d0:.3e} at dt={dt:g} (limit {tol:g}); "
                       f"{d2:.3e} at dt/4, shrink x{ratio:.1f} (need >= {shrink:g})")


def convergence_order(cfg, horizon=ORDER_HORIZON, dt=None):
    """Observed RK4 order from runs at ``dt`` and ``dt/2`` against ``dt/64``.

    The scenario is the configured drive with dry friction on, from rest.
    """
    dt = cfg.options.dt if dt is None else dt
    opts = replace(cfg.options, dry_friction=True)
    t_end = min(horizon, cfg.options.t_end)

    def end(h):
        traj = integrate(State(), cfg.robot, cfg.pump, cfg.signal, t_end, h, opts)
        return np.array(traj.final.as_tuple())

    ref = end(dt / 64.0)
    e1 = float(np.max(np.abs(end(dt) - ref)))
    e2 = float(np.max(np.abs(end(dt / 2.0) - ref)))
    return math.log2(e1 / e2), e1, e2


def check_order(cfg, minimum=3.5):
    order, e1, e2 = convergence_order(cfg)
    return CheckResult("convergence order", order >= minimum, order, minimum,
                       f"observed order {order:.2f} (errors {e1:.2e} -> {e2:.2e}; need >= {minimum:g})")


def random_states(robot, n, seed=ORACLE_SEED):
    """Reproducible random states, voltages and friction torques."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        s = State(0.0, rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi),
                  rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0))
        out.append((s, rng.uniform(0.0, 10.0), rng.uniform(-1.0, 1.0) * 1e-3))
    return out


def inverse_solution(mats, state, tau):
    """Accelerations through the explicit 2x2 inverse."""
    (m11, m12), (m21, m22) = mats.m
    (k11, k12), (k21, k22) = mats.k
    rhs1 = mats.c[0] - k11 * state.omega1 - k12 * state.omega2 - tau
    rhs2 = mats.c[1] - k21 * state.omega1 - k22 * state.omega2
    det = m11 * m22 - m12 * m21
    return (m22 * rhs1 - m12 * rhs2) / det, (-m21 * rhs1 + m11 * rhs2) / det


def solve_oracle_error(robot, pump, n=ORACLE_STATES, seed=ORACLE_SEED):
    """Worst relative disagreement between ``solve_accel`` and the inverse formula."""
    worst = 0.0
    for state, v, tau in random_states(robot, n, seed):
        mats = system_matrices(state, robot, pump, v)
        got = solve_accel(mats, state, tau)
        ref = inverse_solution(mats, state, tau)
        scale = max(abs(ref[0]), abs(ref[1]))
        if scale == 0:
            continue
        worst = max(worst, max(abs(got[0] - ref[0]), abs(got[1] - ref[1])) / scale)
    return worst


def check_solve_oracle(cfg, tol=1.0e-12):
    err = solve_oracle_error(cfg.robot, cfg.pump)
    return CheckResult("linear solve oracle", err <= tol, err, tol,
                       f"max rel diff {err:.2e} over {ORACLE_STATES} states (limit {tol:g})")


def det_sweep(robot, pump, n=721):
    phis = np.linspace(-math.pi, math.pi, n)
    return np.array([system_matrices(State(theta2=float(p)), robot, pump, 0.0).det for p in phis])


def check_det(cfg):
    dets = det_sweep(cfg.robot, cfg.pump)
    low = float(dets.min())
    floor = cfg.options.det_floor
    ok = low > 0 and low >= floor
    return CheckResult("mass matrix determinant", ok, low, floor,
                       f"min det M over phi in [-pi, pi] = {low:.3e} (floor {floor:g})")


CHECKS = (check_pendulum_frequency, check_energy_drift, check_order,
          check_solve_oracle, check_det)


def run_checks(cfg):
    results = []
    for check in CHECKS:
        name = check.__name__.replace("check_", "").replace("_", " ")
        try:
            results.append(check(cfg))
        except EHDError as exc:
            results.append(CheckResult(name, False, math.nan, math.nan,
                                       f"{type(exc).__name__}: {exc}"))
    return results
