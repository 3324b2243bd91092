"""Characterization experiments: steady state, regime, duty sweeps."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .drive import DriveSignal
from .dynamics.integrate import integrate
from .dynamics.model import SimOptions, State
from .errors import EHDError, InsufficientDataError, InvalidInputError
from .statics import static_angular_velocity

STATIONARY = "stationary"
OSCILLATING = "oscillating"
ROLLING = "rolling"
ERROR = "error"

DEFAULT_WINDOW = 5
DEFAULT_REL_TOL = 0.05
DEFAULT_THETA_STILL = 1.0e-3
DEFAULT_OMEGA_ROLL = 0.05
# absolute floor on the settle band so a zero steady state can still settle
SETTLE_ABS_FLOOR = 1.0e-9


@dataclass(frozen=True)
class SweepRow:
    duty: float
    omega_ss: float
    settle_time: float
    regime: str
    static_omega: float
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    @property
    def duties(self):
        return np.array([r.duty for r in self.rows])

    @property
    def omega_ss(self):
        return np.array([r.omega_ss for r in self.rows])

    @property
    def ok(self):
        return all(r.regime != ERROR for r in self.rows)


def _period(traj, period):
    if period is not None:
        return float(period)
    if traj.signal is None:
        raise InvalidInputError("trajectory has no drive signal; pass period explicitly")
    return traj.signal.period


def _integral_at(t, y, cum, x):
    """Integral of the piecewise-linear ``y`` from ``t[0]`` to ``x``."""
    i = int(np.searchsorted(t, x, side="right")) - 1
    i = min(max(i, 0), len(t) - 2)
    if x == t[i]:
        return cum[i]
    frac = (x - t[i]) / (t[i + 1] - t[i])
    yx = y[i] + frac * (y[i + 1] - y[i])
    return cum[i] + 0.5 * (x - t[i]) * (y[i] + yx)


def _mean_over(t, y, cum, ref, a, b):
    return ref + (_integral_at(t, y, cum, b) - _integral_at(t, y, cum, a)) / (b - a)


def period_means(traj, period=None):
    """Mean ring rate over each full waveform period from the first sample.

    Returns ``(starts, means)``.
    """
    T = _period(traj, period)
    t = np.asarray(traj.t, dtype=float)
    w = np.asarray(traj.omega1, dtype=float)
    if len(t) < 2:
        return np.array([]), np.array([])
    n_full = int(math.floor((t[-1] - t[0]) / T * (1.0 + 1e-12)))
    ref = w[-1]
    dev = w - ref
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (dev[1:] + dev[:-1]) * np.diff(t))))
    starts = t[0] + T * np.arange(n_full)
    means = np.array([_mean_over(t, dev, cum, ref, a, min(a + T, t[-1])) for a in starts])
    return starts, means


def detect_steady_state(traj, window=DEFAULT_WINDOW, rel_tol=DEFAULT_REL_TOL, period=None):
    """Steady ring rate and settling time from period means.

    Parameters
    ----------
    traj : Trajectory
    window : int
        Number of final waveform periods averaged into ``omega_ss``.
    rel_tol : float
        Settling band, relative to ``|omega_ss|``.
    period : float, optional
        Averaging period; defaults to the trajectory's drive period.

    Returns
    -------
    omega_ss : float
    settle_time : float
        Time from the first sample to the start of the earliest period after
        which every period mean stays in the band; ``inf`` if the last
        period is outside it.

    Raises
    ------
    InsufficientDataError
        If fewer than ``2*window`` full periods are available.
    """
    if window < 1:
        raise InvalidInputError("window must be >= 1")
    T = _period(traj, period)
    starts, means = period_means(traj, T)
    if len(means) < 2 * window:
        raise InsufficientDataError(
            f"need {2 * window} full periods, trajectory has {len(means)}")
    t = np.asarray(traj.t, dtype=float)
    w = np.asarray(traj.omega1, dtype=float)
    ref = w[-1]
    dev = w - ref
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (dev[1:] + dev[:-1]) * np.diff(t))))
    a = starts[len(means) - window]
    b = starts[-1] + T
    omega_ss = _mean_over(t, dev, cum, ref, a, min(b, t[-1]))

    band = max(rel_tol * abs(omega_ss), SETTLE_ABS_FLOOR)
    inside = np.abs(means - omega_ss) <= band
    if not inside[-1]:
        return float(omega_ss), math.inf
    k = len(inside)
    while k > 0 and inside[k - 1]:
        k -= 1
    return float(omega_ss), float(starts[k] - t[0])


def classify_regime(traj, theta_still=DEFAULT_THETA_STILL, omega_roll=DEFAULT_OMEGA_ROLL,
                    window=DEFAULT_WINDOW, period=None):
    """Label a run ``stationary``, ``oscillating`` or ``rolling``.

    Ring excursions are measured from the first sample.  A run rolls when
    the net ring rotation exceeds one turn or the steady rate exceeds
    ``omega_roll``; otherwise it oscillates unless the ring never moves more
    than ``theta_still``.
    """
    T = _period(traj, period)
    t = np.asarray(traj.t, dtype=float)
    if len(t) < 2 or (t[-1] - t[0]) < 5 * T * (1.0 - 1e-12):
        raise InsufficientDataError("classification needs at least 5 waveform periods")
    th = np.asarray(traj.theta1, dtype=float) - traj.theta1[0]
    if np.max(np.abs(th)) < theta_still:
        return STATIONARY
    if abs(th[-1]) > 2.0 * math.pi:
        return ROLLING
    n_periods = int(math.floor((t[-1] - t[0]) / T * (1.0 + 1e-12)))
    win = min(window, n_periods // 2)
    omega_ss, _ = detect_steady_state(traj, win, period=T)
    if abs(omega_ss) > omega_roll:
        return ROLLING
    return OSCILLATING


def linear_displacement(traj):
    """Ground displacement ``r1*theta1`` (m) under rolling without slipping."""
    return traj.params.r1 * np.asarray(traj.theta1, dtype=float)


@dataclass(frozen=True)
class HarnessSettings:
    """Steady-state and regime thresholds shared by sweeps and the CLI."""

    window: int = DEFAULT_WINDOW
    rel_tol: float = DEFAULT_REL_TOL
    theta_still: float = DEFAULT_THETA_STILL
    omega_roll: float = DEFAULT_OMEGA_ROLL
    eq17_voltage: str = "on_phase"


def run_case(params, pump, signal, options, settings=HarnessSettings(), initial=None):
    """Integrate one scenario and return ``(traj, omega_ss, settle_time, regime)``."""
    initial = initial or State()
    traj = integrate(initial, params, pump, signal, options.t_end, options.dt, options)
    omega_ss, settle = detect_steady_state(traj, settings.window, settings.rel_tol)
    regime = classify_regime(traj, settings.theta_still, settings.omega_roll, settings.window)
    return traj, omega_ss, settle, regime


def _sweep_row(args):
    params, pump, signal, options, settings = args
    static = static_angular_velocity(params, pump, signal, settings.eq17_voltage)
    try:
        _, omega_ss, settle, regime = run_case(params, pump, signal, options, settings)
    except EHDError as exc:
        return SweepRow(signal.duty, math.nan, math.nan, ERROR, static, str(exc))
    return SweepRow(signal.duty, omega_ss, settle, regime, static)


def sweep_duty(params, pump, base_signal, duties, options=None, settings=HarnessSettings(),
               workers=None):
    """Steady ring rate against duty, with the static estimate alongside.

    Every row runs with dry friction on.  A row that raises a library error
    is recorded with regime ``"error"`` and the sweep carries on.  With
    ``workers > 1`` rows run in a process pool; row order and values do not
    depend on scheduling.
    """
    duties = [float(d) for d in duties]
    if not duties:
        raise InvalidInputError("duties must not be empty")
    if any(not 0.0 <= d <= 1.0 for d in duties):
        raise InvalidInputError("duties must lie in [0, 1]")
    if any(b <= a for a, b in zip(duties[:-1], duties[1:])):
        raise InvalidInputError("duties must be strictly increasing")
    options = replace(options or SimOptions(), dry_friction=True)
    jobs = [(params, pump,
             DriveSignal(base_signal.v_max, d, base_signal.frequency,
                         base_signal.v_min, base_signal.phase),
             options, settings) for d in duties]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    return SweepResult(tuple(rows))
