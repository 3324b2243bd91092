"""Calibration of the pump polynomials and of the friction coefficients."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import EHDError
from .harness import run_case
from .pump import fit_quadratic, read_calibration_csv

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# search stops when |omega_ss - target| is within this fraction of the target
DEFAULT_REL_TOL = 0.005
ABS_TOL = 1.0e-6
K1_GRID = 7
XI_GRID = 5


@dataclass(frozen=True)
class PumpFit:
    source: str
    a: float
    b: float
    rms: float


@dataclass(frozen=True)
class FrictionFit:
    k1: float
    xi_m1: float
    omega_ss: float
    settle_time: float
    residual: float
    converged: bool
    iterations: int
    evaluations: int


def calibrate_pump(paths):
    """Fit ``y = a*v^2 + b*v`` to each ``voltage_kv,value`` CSV in ``paths``."""
    fits = []
    for path in paths:
        a, b, rms = fit_quadratic(read_calibration_csv(path))
        fits.append(PumpFit(str(path), a, b, rms))
    return fits


def rolling_cap(params):
    """``k1`` at which friction equals the largest possible gravity torque."""
    return params.m2 * params.r2 / (params.r1 * params.total_mass)


class _Objective:
    """Steady ring rate at the config operating point as a function of (k1, xi_m1)."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.options = replace(cfg.options, dry_friction=True)
        self.cache = {}

    def __call__(self, k1, xi):
        key = (float(k1), float(xi))
        if key not in self.cache:
            robot = replace(self.cfg.robot, k1=key[0], xi_m1=key[1])
            try:
                _, omega, settle, _ = run_case(robot, self.cfg.pump, self.cfg.signal,
                                               self.options, self.cfg.settings)
            except EHDError:
                omega, settle = math.nan, math.inf
            self.cache[key] = (omega, settle)
        return self.cache[key]


def _golden(f, lo, hi, budget, tol):
    """Golden-section minimization of ``f`` on ``[lo, hi]``.

    Stops after ``budget`` calls or once a value within ``tol`` is found.
    """
    lo, hi = float(lo), float(hi)
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    used = 2
    best = min((f1, x1), (f2, x2))
    while used < budget and best[0] > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
            best = min(best, (f1, x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
            best = min(best, (f2, x2))
        used += 1
    return best[1], best[0], used


def calibrate_friction(cfg, target, max_iter=None, rel_tol=DEFAULT_REL_TOL):
    """Fit ``(k1, xi_m1)`` so the configured run reaches ``target`` rad/s.

    A coarse grid over ``k1`` in ``[0, 1.5*cap]`` and ``xi_m1`` over a factor
    of 4 either side of the configured value checks feasibility and seeds the
    search.  Golden-section line searches then alternate between ``k1`` and
    ``log(xi_m1)`` inside the brackets of the best grid cell until the
    residual is within ``rel_tol`` of the target or ``max_iter`` simulations
    have been spent.
    """
    max_iter = cfg.calib_max_iter if max_iter is None else max_iter
    tol = max(rel_tol * abs(target), ABS_TOL)
    obj = _Objective(cfg)

    def miss(k1, xi):
        omega, _ = obj(k1, xi)
        return abs(omega - target) if math.isfinite(omega) else math.inf

    k1_grid = np.linspace(0.0, 1.5 * rolling_cap(cfg.robot), K1_GRID)
    xi0 = cfg.robot.xi_m1 if cfg.robot.xi_m1 > 0 else 1.0e-5
    xi_grid = np.geomspace(xi0 / 4.0, xi0 * 4.0, XI_GRID)
    scores = np.array([[miss(k, x) for x in xi_grid] for k in k1_grid])
    i, j = np.unravel_index(np.argmin(scores), scores.shape)
    k1, xi = float(k1_grid[i]), float(xi_grid[j])
    k_lo, k_hi = k1_grid[max(i - 1, 0)], k1_grid[min(i + 1, K1_GRID - 1)]
    lx_lo = math.log(xi_grid[max(j - 1, 0)])
    lx_hi = math.log(xi_grid[min(j + 1, XI_GRID - 1)])

    iterations = 0
    err = miss(k1, xi)
    while err > tol and iterations < max_iter:
        budget = min(12, max_iter - iterations)
        k1, err, used = _golden(lambda k: miss(k, xi), k_lo, k_hi, budget, tol)
        iterations += used
        if err <= tol or iterations >= max_iter:
            break
        budget = min(12, max_iter - iterations)
        lx, err, used = _golden(lambda lx: miss(k1, math.exp(lx)), lx_lo, lx_hi, budget, tol)
        xi = math.exp(lx)
        iterations += used
        # shrink the k1 bracket around the current point for the next pass
        span = 0.25 * (k_hi - k_lo)
        k_lo, k_hi = max(0.0, k1 - span), k1 + span

    omega, settle = obj(k1, xi)
    return FrictionFit(float(k1), float(xi), float(omega), float(settle),
                       float(omega - target), bool(err <= tol), iterations, len(obj.cache))
