"""Square-wave drive voltage."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class DriveSignal:
    """Rectangular high-voltage command.

    The waveform is ``v_max`` for the first ``duty`` fraction of every period
    (starting at ``phase`` seconds) and ``v_min`` for the rest.  The on
    interval is half-open, so the value exactly at the switch-off instant is
    ``v_min``.
    """

    v_max: float
    duty: float
    frequency: float
    v_min: float = 0.0
    phase: float = 0.0
    period: float = field(init=False)

    def __post_init__(self):
        for name in ("v_max", "v_min", "duty", "frequency", "phase"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        if not 0.0 <= self.duty <= 1.0:
            raise InvalidInputError(f"duty must lie in [0, 1], got {self.duty!r}")
        if self.v_min < 0:
            raise InvalidInputError("v_min must be >= 0")
        if self.v_max < self.v_min:
            raise InvalidInputError("v_max must be >= v_min")
        if not self.frequency > 0:
            raise InvalidInputError("frequency must be > 0")
        object.__setattr__(self, "period", 1.0 / self.frequency)

    @property
    def on_time(self):
        return self.duty * self.period


def voltage_at(signal, t):
    """Applied voltage (kV) at time ``t`` (s)."""
    if t < 0:
        raise InvalidInputError(f"t must be >= 0, got {t!r}")
    if signal.duty >= 1.0:
        return signal.v_max
    if signal.duty <= 0.0:
        return signal.v_min
    if (t - signal.phase) % signal.period < signal.duty * signal.period:
        return signal.v_max
    return signal.v_min


def effective_voltage(signal):
    """Duty-weighted mean voltage ``D*v_max + (1 - D)*v_min``."""
    return signal.duty * signal.v_max + (1.0 - signal.duty) * signal.v_min


def switch_times(signal, t0, t1):
    """Sorted waveform edges in the open interval ``(t0, t1)``.

    Period starts are always included (even when duty is 0 or 1) so that
    period boundaries are exact sample instants of an integrated trajectory.
    """
    T = signal.period
    k = math.floor((t0 - signal.phase) / T)
    edges = []
    while True:
        start = signal.phase + k * T
        if start >= t1:
            break
        cands = [start]
        if 0.0 < signal.duty < 1.0:
            cands.append(start + signal.duty * T)
        for e in cands:
            if t0 < e < t1:
                edges.append(e)
        k += 1
    return sorted(set(edges))


def voltage_series(signal, t):
    """Vectorized :func:`voltage_at` over an array of times (same values)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidInputError("t must be >= 0")
    if signal.duty >= 1.0:
        return np.full(t.shape, float(signal.v_max))
    if signal.duty <= 0.0:
        return np.full(t.shape, float(signal.v_min))
    on = np.mod(t - signal.phase, signal.period) < signal.duty * signal.period
    return np.where(on, float(signal.v_max), float(signal.v_min))
