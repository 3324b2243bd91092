"""Two-degree-of-freedom ring/fluid model.

Generalized coordinates are the ring rotation ``theta1`` and the fluid
rotation ``theta2``.  The equations of motion are ``M a + K w = C`` with the
matrices built in :func:`system_matrices`, optionally augmented with a
regularized dry rolling-friction torque on the ring row.
"""

import math
from dataclasses import dataclass

from ..drive import voltage_at
from ..errors import InvalidInputError, SingularMassMatrixError
from ..pump import pump_pressure
from ..statics import friction_torque

DEFAULT_DET_FLOOR = 1.0e-18


@dataclass(frozen=True)
class State:
    t: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0

    def __post_init__(self):
        for name in ("t", "theta1", "theta2", "omega1", "omega2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"state field {name} must be finite")

    def as_tuple(self):
        return (self.theta1, self.theta2, self.omega1, self.omega2)


@dataclass(frozen=True)
class SystemMatrices:
    """Mass matrix ``m``, damping matrix ``k`` (2x2 nested tuples), forcing ``c``."""

    m: tuple
    k: tuple
    c: tuple

    @property
    def det(self):
        (m11, m12), (m21, m22) = self.m
        return m11 * m22 - m12 * m21


@dataclass(frozen=True)
class EnergyBreakdown:
    k_ring: float
    k_ehd: float
    t_ring: float
    t_ehd: float
    u_ring: float
    u_ehd: float
    rayleigh_power: float


@dataclass(frozen=True)
class SimOptions:
    """Integration settings.

    ``dry_friction`` adds ``-k1*r1*(m1+m2)*g*tanh(omega1/sign_epsilon)`` to the
    ring row; it is off by default so the bare matrix model runs unchanged.
    """

    dt: float = 2.5e-4
    t_end: float = 5.0
    dry_friction: bool = False
    sign_epsilon: float = 2.0e-2
    det_floor: float = DEFAULT_DET_FLOOR

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidInputError("dt must be finite and > 0")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise InvalidInputError("t_end must be finite and > 0")
        if not (math.isfinite(self.sign_epsilon) and self.sign_epsilon > 0):
            raise InvalidInputError("sign_epsilon must be finite and > 0")
        if not (math.isfinite(self.det_floor) and self.det_floor >= 0):
            raise InvalidInputError("det_floor must be finite and >= 0")


def drive_force(pump, params, v):
    """Pump force on the fluid slug (N): clamped pressure times channel area."""
    return pump_pressure(pump, v) * params.area


def system_matrices(state, params, pump, v):
    """Mass, damping and forcing terms at ``state`` under voltage ``v`` (kV)."""
    m1, m2, r1, r2 = params.m1, params.m2, params.r1, params.r2
    phi = state.theta2 - state.theta1
    w_rel = state.omega2 - state.omega1
    cphi = math.cos(phi)
    sphi = math.sin(phi)

    m11 = params.j1 + m1 * r1 * r1 + m2 * r1 * r1 + params.j2 - 2.0 * m2 * r1 * r2 * cphi
    m12 = -params.j2 + m2 * r1 * r2 * cphi
    m21 = m2 * r1 * r2 * cphi - m2 * r2 * r2
    m22 = m2 * r2 * r2

    k_row1 = m2 * r1 * r2 * w_rel * sphi + params.xi_m1
    grav = m2 * params.g * r2 * sphi
    c2 = drive_force(pump, params, v) * r2 - grav
    return SystemMatrices(
        m=((m11, m12), (m21, m22)),
        k=((k_row1, k_row1), (0.0, params.xi_m2)),
        c=(grav, c2),
    )


def solve_accel(mats, state, dry_friction_torque=0.0, det_floor=DEFAULT_DET_FLOOR):
    """Angular accelerations from ``M a = C - K w - [tau_dry, 0]``.

    Gaussian elimination with partial pivoting on the 2x2 system.

    Raises
    ------
    SingularMassMatrixError
        If ``|det M| < det_floor``.
    """
    (m11, m12), (m21, m22) = mats.m
    (k11, k12), (k21, k22) = mats.k
    w1, w2 = state.omega1, state.omega2
    b1 = mats.c[0] - (k11 * w1 + k12 * w2) - dry_friction_torque
    b2 = mats.c[1] - (k21 * w1 + k22 * w2)

    det = m11 * m22 - m12 * m21
    if not abs(det) >= det_floor:
        raise SingularMassMatrixError(det, state.t, state.theta1, state.theta2)

    if abs(m21) > abs(m11):
        m11, m12, b1, m21, m22, b2 = m21, m22, b2, m11, m12, b1
    f = m21 / m11
    u22 = m22 - f * m12
    a2 = (b2 - f * b1) / u22
    a1 = (b1 - m12 * a2) / m11
    return a1, a2


def dry_torque(params, omega1, epsilon):
    """Regularized rolling-friction torque on the ring (N m)."""
    return friction_torque(params) * math.tanh(omega1 / epsilon)


def derivatives(state, params, pump, signal, options=None):
    """Time derivative ``(omega1, omega2, alpha1, alpha2)`` of the state."""
    options = options or SimOptions()
    v = voltage_at(signal, state.t)
    mats = system_matrices(state, params, pump, v)
    tau = dry_torque(params, state.omega1, options.sign_epsilon) if options.dry_friction else 0.0
    a1, a2 = solve_accel(mats, state, tau, options.det_floor)
    return (state.omega1, state.omega2, a1, a2)


def energy_terms(params, theta1, theta2, omega1, omega2):
    """Energy terms of the Lagrangian and the Rayleigh power at one instant.

    ``k_ehd`` keeps the printed form, which is linear in the relative rate;
    it is a diagnostic and is not the conserved quantity of the equations of
    motion (see :func:`mechanical_energy`).
    """
    m1, m2, r1, r2 = params.m1, params.m2, params.r1, params.r2
    phi = theta2 - theta1
    w_rel = omega2 - omega1
    v1 = omega1 * r1
    s = math.sin(0.5 * phi)
    return EnergyBreakdown(
        k_ring=0.5 * m1 * v1 * v1,
        k_ehd=0.5 * m2 * v1 * v1 + m2 * r1 * r2 * w_rel * math.cos(phi),
        t_ring=0.5 * params.j1 * omega1 * omega1,
        t_ehd=0.5 * params.j2 * w_rel * w_rel,
        u_ring=m1 * params.g * r1,
        u_ehd=2.0 * m2 * params.g * r2 * s * s,
        rayleigh_power=0.5 * (params.xi_m1 * omega1 * omega1 + params.xi_m2 * omega2 * omega2),
    )


def mechanical_energy(params, theta1, theta2, omega1, omega2):
    """Quadratic-form energy ``0.5 w^T sym(M) w + U_ring + U_EHD`` (J).

    This is the energy whose rate matches the equations of motion in the
    conservative limit; the constant ``U_ring`` is included for reporting.
    """
    m1, m2, r1, r2 = params.m1, params.m2, params.r1, params.r2
    phi = theta2 - theta1
    c = math.cos(phi)
    m11 = params.j1 + m1 * r1 * r1 + m2 * r1 * r1 + params.j2 - 2.0 * m2 * r1 * r2 * c
    m12 = -params.j2 + m2 * r1 * r2 * c
    m21 = m2 * r1 * r2 * c - m2 * r2 * r2
    m22 = m2 * r2 * r2
    off = 0.5 * (m12 + m21)
    kin = 0.5 * (m11 * omega1 * omega1 + 2.0 * off * omega1 * omega2 + m22 * omega2 * omega2)
    s = math.sin(0.5 * phi)
    return kin + m1 * params.g * r1 + 2.0 * m2 * params.g * r2 * s * s
