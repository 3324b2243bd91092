"""Fixed-step RK4 with steps aligned to the drive waveform edges."""

import math

import numpy as np

from ..drive import switch_times, voltage_series
from ..errors import DivergenceError, InvalidInputError, InvalidStepError, SingularMassMatrixError
from ..statics import friction_torque
from ..trajectory import Trajectory
from . import backend
from .model import SimOptions, State, drive_force

# a remainder shorter than this fraction of dt is merged into the previous step
_MERGE_FRACTION = 1.0e-9


def check_step(signal, dt):
    """Raise ``InvalidStepError`` unless ``dt`` resolves both waveform phases."""
    if not (math.isfinite(dt) and dt > 0):
        raise InvalidStepError(f"dt must be finite and > 0, got {dt!r}")
    d = signal.duty
    if 0.0 < d < 1.0:
        on = d * signal.period
        off = (1.0 - d) * signal.period
        if dt > on / 4.0 or dt > off / 4.0:
            raise InvalidStepError(
                f"dt={dt!r} s exceeds a quarter of the shorter waveform phase "
                f"(on {on!r} s, off {off!r} s)")


def step_grid(signal, t0, t_end, dt):
    """Step boundaries from ``t0`` to ``t_end``.

    Every waveform edge and period start in between is a boundary.  Inside
    each segment steps are ``a + j*dt``; the last step of a segment is
    shortened to land on the edge.
    """
    breaks = [t0] + switch_times(signal, t0, t_end) + [t_end]
    parts = [np.array([t0])]
    for a, b in zip(breaks[:-1], breaks[1:]):
        n = int(math.floor((b - a) / dt))
        inner = a + np.arange(1, n + 1) * dt
        parts.append(inner[b - inner > _MERGE_FRACTION * dt])
        parts.append(np.array([b]))
    return np.concatenate(parts)


def integrate(initial, params, pump, signal, t_end, dt, options=None, kernel=None):
    """Integrate the ring/fluid model from ``initial`` to ``t_end``.

    Parameters
    ----------
    initial : State
    params : RobotParams
    pump : PumpModel
    signal : DriveSignal
    t_end, dt : float
        End time and nominal step (s).
    options : SimOptions, optional
        Only ``dry_friction``, ``sign_epsilon`` and ``det_floor`` are read.
    kernel : str, optional
        ``"python"`` or ``"cython"`` to override the import-time choice.

    Returns
    -------
    Trajectory
        Samples at every step boundary.  The voltage is held at its step
        midpoint value inside each step, which is exact because no step
        straddles an edge.

    Raises
    ------
    InvalidStepError, DivergenceError, SingularMassMatrixError
    """
    options = options or SimOptions()
    if not isinstance(initial, State):
        raise InvalidInputError("initial must be a State")
    if not (math.isfinite(t_end) and t_end > initial.t):
        raise InvalidInputError(f"t_end must exceed the initial time {initial.t!r}")
    if initial.t < 0:
        raise InvalidInputError("initial time must be >= 0")
    check_step(signal, dt)

    times = step_grid(signal, initial.t, t_end, dt)
    v_step = voltage_series(signal, 0.5 * (times[:-1] + times[1:]))
    torque = np.empty(len(v_step))
    for v in np.unique(v_step):
        torque[v_step == v] = drive_force(pump, params, float(v)) * params.r2

    tf = friction_torque(params) if options.dry_friction else 0.0
    p = (params.m1, params.m2, params.r1, params.r2, params.j1, params.j2,
         params.g, params.xi_m1, params.xi_m2)
    kern = backend.get_kernel(kernel)
    y, status, index, det = kern.rk4_run(p, initial.as_tuple(), times, torque,
                                         tf, options.sign_epsilon, options.det_floor)
    if status == 1:
        row = y[index]
        raise SingularMassMatrixError(det, float(times[index]), float(row[0]), float(row[1]))
    if status == 2:
        raise DivergenceError(float(times[index]))

    voltage = voltage_series(signal, times)
    return Trajectory(
        t=times, theta1=y[:, 0].copy(), theta2=y[:, 1].copy(),
        omega1=y[:, 2].copy(), omega2=y[:, 3].copy(), voltage=voltage,
        params=params, signal=signal, pump=pump, dt=dt,
        metadata={
            "dry_friction": bool(options.dry_friction),
            "sign_epsilon": options.sign_epsilon,
            "backend": "python" if kern is backend._kernel_py else "cython",
        },
    )
