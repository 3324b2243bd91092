"""Empirical EHD pump model.

Pressure and flow rate of the flexible EHD pump are quadratic in the applied
DC voltage (kV) with no constant term.  The raw polynomial outputs are in
unspecified "polynomial units"; ``pressure_scale`` and ``flow_scale`` convert
them to pascals and cubic metres per second.  The defaults read pressure as Pa
and flow as mL/min.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InvalidInputError

ML_PER_MIN = 1.0e-6 / 60.0

# condition-number ceiling for the 2x2 normal equations
MAX_CONDITION = 1.0e12


@dataclass(frozen=True)
class PumpModel:
    """Quadratic pressure/flow model of the EHD pump.

    Pressure is ``a_p*v**2 - b_p*v`` and flow is ``a_q*v**2 + b_q*v`` with
    ``v`` in kV.  ``c_p`` and ``c_q`` are the empirical per-electrode
    correction factors; they are *not* applied to the polynomials, which are
    already calibrated totals (see :func:`apply_empirical_scaling`).
    """

    a_p: float = 2.152
    b_p: float = 2.031
    a_q: float = 0.0076
    b_q: float = 0.0167
    c_p: float = 15.0
    c_q: float = 11.0
    pressure_scale: float = 1.0
    flow_scale: float = ML_PER_MIN

    def __post_init__(self):
        for name in ("a_p", "b_p", "a_q", "b_q", "c_p", "c_q",
                     "pressure_scale", "flow_scale"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        if self.pressure_scale <= 0:
            raise InvalidInputError("pressure_scale must be > 0")
        if self.flow_scale <= 0:
            raise InvalidInputError("flow_scale must be > 0")

    @property
    def pressure_zero_crossing(self):
        """Voltage (kV) below which the raw pressure polynomial is negative."""
        if self.a_p <= 0:
            return math.inf
        return max(self.b_p / self.a_p, 0.0)


def _check_voltage(v):
    if not math.isfinite(v) or v < 0:
        raise InvalidInputError(f"voltage must be finite and >= 0 kV, got {v!r}")


def raw_pressure(model, v):
    """Unclamped pressure polynomial in polynomial units."""
    return model.a_p * v * v - model.b_p * v


def raw_flow(model, v):
    """Flow polynomial in polynomial units."""
    return model.a_q * v * v + model.b_q * v


def pump_pressure(model, v):
    """Pump pressure in Pa at voltage ``v`` (kV), clamped below at zero."""
    _check_voltage(v)
    return model.pressure_scale * max(raw_pressure(model, v), 0.0)


def pump_flow(model, v):
    """Pump volumetric flow in m^3/s at voltage ``v`` (kV)."""
    _check_voltage(v)
    return model.flow_scale * raw_flow(model, v)


def apply_empirical_scaling(raw_simulated, c):
    """Scale a single-electrode-pair simulated output by an empirical factor."""
    if not c > 0:
        raise InvalidInputError(f"scaling coefficient must be > 0, got {c!r}")
    return raw_simulated * c


def fit_quadratic(samples):
    """Least-squares fit of ``y = a*v**2 + b*v`` (no constant term).

    Parameters
    ----------
    samples : iterable of (float, float)
        ``(voltage_kv, value)`` pairs.

    Returns
    -------
    (a, b, rms) : tuple of float
        Fitted coefficients and RMS residual.

    Raises
    ------
    DegenerateDataError
        Fewer than 3 samples, fewer than 2 distinct nonzero voltages, or an
        ill-conditioned normal matrix.
    """
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise DegenerateDataError("need at least 3 (voltage, value) samples")
    v, y = data[:, 0], data[:, 1]
    if not np.all(np.isfinite(data)):
        raise DegenerateDataError("samples must be finite")
    if np.unique(v[v != 0.0]).size < 2:
        raise DegenerateDataError("need at least 2 distinct nonzero voltages")

    # normal equations on the basis {v^2, v}
    s4 = math.fsum(v**4)
    s3 = math.fsum(v**3)
    s2 = math.fsum(v**2)
    t2 = math.fsum(v**2 * y)
    t1 = math.fsum(v * y)
    normal = np.array([[s4, s3], [s3, s2]])
    if np.linalg.cond(normal) > MAX_CONDITION:
        raise DegenerateDataError("normal equations are ill-conditioned")
    det = s4 * s2 - s3 * s3
    a = (t2 * s2 - s3 * t1) / det
    b = (s4 * t1 - s3 * t2) / det
    resid = y - (a * v * v + b * v)
    rms = math.sqrt(math.fsum(resid**2) / len(y))
    return a, b, rms


def read_calibration_csv(path):
    """Read ``voltage_kv,value`` samples from a CSV file."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["voltage_kv", "value"]:
            raise InvalidInputError(
                f"{path}: expected header 'voltage_kv,value', got {header!r}")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise InvalidInputError(f"{path}:{lineno}: expected 2 columns")
            try:
                samples.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
    return samples


def write_fit_csv(path, a, b, rms):
    """Write a fit report with header ``a,b,rms``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["a", "b", "rms"])
        writer.writerow([repr(float(a)), repr(float(b)), repr(float(rms))])
