"""Energy bookkeeping along a trajectory."""

import math
from dataclasses import dataclass

import numpy as np

from ..drive import voltage_series
from .model import drive_force, energy_terms, mechanical_energy


@dataclass
class EnergyAudit:
    """Per-sample energy terms and balance residual.

    ``residual = (E - E[0]) - work + dissipated`` where ``E`` is
    :func:`mechanical_energy`, ``work`` the accumulated ``F*r2*omega2`` input
    and ``dissipated`` the accumulated ``2*psi``.  ``relative`` divides by the
    initial energy excluding the constant ring potential.
    """

    breakdown: list
    energy: np.ndarray
    work: np.ndarray
    dissipated: np.ndarray
    residual: np.ndarray
    relative: np.ndarray


def pendulum_energy(params, theta2, omega2):
    """Energy of the fluid slug alone, ``0.5*m2*r2^2*w2^2 + m2*g*r2*(1 - cos th2)``."""
    theta2 = np.asarray(theta2, dtype=float)
    omega2 = np.asarray(omega2, dtype=float)
    s = np.sin(0.5 * theta2)
    return (0.5 * params.m2 * params.r2 ** 2 * omega2 ** 2
            + 2.0 * params.m2 * params.g * params.r2 * s * s)


def energy_audit(traj, params=None, pump=None):
    """Energy terms at every sample and the running balance residual.

    The pump work is exact for the piecewise-constant force, since the
    integral of ``omega2`` over a step is the change in ``theta2``.  The
    dissipation integral uses the trapezoid rule.
    """
    params = params if params is not None else traj.params
    pump = pump if pump is not None else traj.pump
    n = len(traj)
    breakdown = []
    energy = np.empty(n)
    psi = np.empty(n)
    for i in range(n):
        args = (params, float(traj.theta1[i]), float(traj.theta2[i]),
                float(traj.omega1[i]), float(traj.omega2[i]))
        b = energy_terms(*args)
        breakdown.append(b)
        energy[i] = mechanical_energy(*args)
        psi[i] = b.rayleigh_power

    t = np.asarray(traj.t, dtype=float)
    step_work = np.zeros(max(n - 1, 0))
    if pump is not None and traj.signal is not None and n > 1:
        v_step = voltage_series(traj.signal, 0.5 * (t[:-1] + t[1:]))
        torque = np.zeros(n - 1)
        for v in np.unique(v_step):
            torque[v_step == v] = drive_force(pump, params, float(v)) * params.r2
        step_work = torque * np.diff(np.asarray(traj.theta2, dtype=float))
    work = np.concatenate(([0.0], np.cumsum(step_work)))
    step_diss = 0.5 * (2.0 * psi[:-1] + 2.0 * psi[1:]) * np.diff(t)
    dissipated = np.concatenate(([0.0], np.cumsum(step_diss)))
    residual = (energy - energy[0]) - work + dissipated

    u_ring = params.m1 * params.g * params.r1
    scale = abs(energy[0] - u_ring)
    if scale > 0 and math.isfinite(scale):
        relative = residual / scale
    else:
        relative = np.where(residual == 0, 0.0, np.inf)
    return EnergyAudit(breakdown, energy, work, dissipated, residual, relative)
