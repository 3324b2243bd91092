"""Start-to-roll analysis of the ring robot.

The fluid slug is pumped up the channel until its kinetic energy is spent
against gravity; the resulting offset from the bottom of the ring gives a
gravity torque that must beat rolling friction for the ring to move.
"""

import math
from dataclasses import dataclass

from .drive import effective_voltage
from .errors import InvalidInputError
from .pump import pump_flow

EQ17_VOLTAGE_MODES = ("on_phase", "effective")


@dataclass(frozen=True)
class RobotParams:
    """Physical constants of the ring and its working fluid (SI units).

    ``l_c`` is the length scale of the climb energy balance; ``None`` means
    "use ``r2``".
    """

    m1: float
    m2: float
    r1: float
    r2: float
    j1: float
    j2: float
    area: float
    g: float = 9.81
    k1: float = 0.0
    xi_m1: float = 0.0
    xi_m2: float = 0.0
    l_c: float = None

    def __post_init__(self):
        if self.l_c is None:
            object.__setattr__(self, "l_c", self.r2)
        names = ("m1", "m2", "r1", "r2", "j1", "j2", "area", "g",
                 "k1", "xi_m1", "xi_m2", "l_c")
        for name in names:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidInputError(f"{name} must be a finite number")
        for name in ("m1", "m2", "r1", "r2", "j1", "j2", "area", "g", "l_c"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be > 0")
        if not self.r1 > self.r2:
            raise InvalidInputError("r1 must be greater than r2")
        for name in ("k1", "xi_m1", "xi_m2"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be >= 0")

    @property
    def total_mass(self):
        return self.m1 + self.m2


def climb_angle(params, mu):
    """Angle (rad) reached by fluid moving at mean speed ``mu`` (m/s)."""
    if not mu >= 0:
        raise InvalidInputError(f"mu must be >= 0, got {mu!r}")
    arg = 1.0 - mu * mu / (2.0 * params.g * params.l_c)
    return math.acos(min(1.0, max(-1.0, arg)))


def fluid_speed(params, q):
    """Mean fluid speed (m/s) for flow rate ``q`` (m^3/s)."""
    if not q >= 0:
        raise InvalidInputError(f"q must be >= 0, got {q!r}")
    return q / params.area


def max_drive_torque(params, theta):
    """Gravity torque (N m) of the fluid held at angle ``theta``."""
    if not 0.0 <= theta <= math.pi:
        raise InvalidInputError(f"theta must lie in [0, pi], got {theta!r}")
    return params.m2 * params.g * params.r2 * math.sin(theta)


def friction_torque(params):
    """Rolling-friction torque ``k1*r1*(m1 + m2)*g`` (N m)."""
    return params.k1 * params.r1 * params.total_mass * params.g


def sign_friction(omega):
    """Three-valued sign of the ring rate: +1, 0 or -1."""
    if not math.isfinite(omega):
        raise InvalidInputError("omega must be finite")
    if omega > 0:
        return 1
    if omega < 0:
        return -1
    return 0


def start_to_roll(params, pump, signal):
    """Static rolling test at the duty-weighted voltage.

    Returns
    -------
    rolls : bool
        True when the drive torque strictly exceeds friction.
    margin : float
        Drive torque minus friction torque (N m).
    theta : float
        Climb angle (rad).
    """
    q = pump_flow(pump, effective_voltage(signal))
    theta = climb_angle(params, fluid_speed(params, q))
    margin = max_drive_torque(params, theta) - friction_torque(params)
    return margin > 0, margin, theta


def static_angular_velocity(params, pump, signal, voltage="on_phase"):
    """Duty-dependent angular-velocity estimate (rad/s).

    The net torque (drive minus friction, clamped at zero) acts on the ring
    inertia for the on-time ``duty * period`` of each cycle.  ``voltage``
    selects the pump voltage: ``"on_phase"`` uses ``v_max`` and
    ``"effective"`` the duty-weighted mean.
    """
    if voltage == "on_phase":
        v = signal.v_max
    elif voltage == "effective":
        v = effective_voltage(signal)
    else:
        raise InvalidInputError(
            f"voltage mode must be one of {EQ17_VOLTAGE_MODES}, got {voltage!r}")
    theta = climb_angle(params, fluid_speed(params, pump_flow(pump, v)))
    net = max(0.0, max_drive_torque(params, theta) - friction_torque(params))
    return signal.duty * signal.period / params.j1 * net
