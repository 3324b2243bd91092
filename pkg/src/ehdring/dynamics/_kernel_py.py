"""Pure-Python RK4 kernel (fallback when the compiled extension is absent).

Mirrors ``_kernel.pyx`` operation for operation.

``p`` is ``(m1, m2, r1, r2, j1, j2, g, xi_m1, xi_m2)``.  ``times`` are the
step boundaries and ``torque[i]`` is the drive torque ``F*r2`` held constant
over step ``i``.  Status codes: 0 ok, 1 singular mass matrix, 2 non-finite
state.
"""

import math

import numpy as np

OK = 0
SINGULAR = 1
DIVERGED = 2


def _accel(p, th1, th2, w1, w2, torque, tf, eps, det_floor):
    m1, m2, r1, r2, j1, j2, g, xi1, xi2 = p
    phi = th2 - th1
    w_rel = w2 - w1
    c = math.cos(phi)
    s = math.sin(phi)
    m11 = j1 + m1 * r1 * r1 + m2 * r1 * r1 + j2 - 2.0 * m2 * r1 * r2 * c
    m12 = -j2 + m2 * r1 * r2 * c
    m21 = m2 * r1 * r2 * c - m2 * r2 * r2
    m22 = m2 * r2 * r2
    k1 = m2 * r1 * r2 * w_rel * s + xi1
    grav = m2 * g * r2 * s
    dry = tf * math.tanh(w1 / eps) if tf != 0.0 else 0.0
    b1 = grav - (k1 * w1 + k1 * w2) - dry
    b2 = (torque - grav) - (0.0 * w1 + xi2 * w2)
    det = m11 * m22 - m12 * m21
    if not abs(det) >= det_floor:
        return 0.0, 0.0, det, False
    if abs(m21) > abs(m11):
        m11, m12, b1, m21, m22, b2 = m21, m22, b2, m11, m12, b1
    f = m21 / m11
    u22 = m22 - f * m12
    a2 = (b2 - f * b1) / u22
    a1 = (b1 - m12 * a2) / m11
    return a1, a2, det, True


def accel(p, th1, th2, w1, w2, torque, tf, eps, det_floor):
    """Single evaluation of the accelerations; returns ``(a1, a2, det, ok)``."""
    return _accel(tuple(float(x) for x in p), th1, th2, w1, w2, torque, tf, eps, det_floor)


def rk4_run(p, y0, times, torque, tf, eps, det_floor):
    """Integrate over the step grid ``times``.

    Returns
    -------
    y : ndarray, shape (len(times), 4)
        Rows filled up to and including ``index`` on failure.
    status : int
    index : int
        Sample index where the failure was detected (``len(times) - 1`` on success).
    det : float
        Determinant that tripped the singular check (0.0 otherwise).
    """
    p = tuple(float(x) for x in p)
    times = [float(t) for t in times]
    torque = [float(x) for x in torque]
    n = len(times)
    out = np.empty((n, 4))
    out[:] = np.nan
    th1, th2, w1, w2 = (float(v) for v in y0)
    out[0] = (th1, th2, w1, w2)
    tf = float(tf)
    eps = float(eps)
    det_floor = float(det_floor)
    isfinite = math.isfinite
    acc = _accel

    for i in range(n - 1):
        h = times[i + 1] - times[i]
        hh = 0.5 * h
        tq = torque[i]

        a1a, a2a, det, ok = acc(p, th1, th2, w1, w2, tq, tf, eps, det_floor)
        if not ok:
            return out, SINGULAR, i, det
        x1 = th1 + hh * w1
        x2 = th2 + hh * w2
        v1 = w1 + hh * a1a
        v2 = w2 + hh * a2a
        a1b, a2b, det, ok = acc(p, x1, x2, v1, v2, tq, tf, eps, det_floor)
        if not ok:
            return out, SINGULAR, i, det
        d1b, d2b = v1, v2
        x1 = th1 + hh * d1b
        x2 = th2 + hh * d2b
        v1 = w1 + hh * a1b
        v2 = w2 + hh * a2b
        a1c, a2c, det, ok = acc(p, x1, x2, v1, v2, tq, tf, eps, det_floor)
        if not ok:
            return out, SINGULAR, i, det
        d1c, d2c = v1, v2
        x1 = th1 + h * d1c
        x2 = th2 + h * d2c
        v1 = w1 + h * a1c
        v2 = w2 + h * a2c
        a1d, a2d, det, ok = acc(p, x1, x2, v1, v2, tq, tf, eps, det_floor)
        if not ok:
            return out, SINGULAR, i, det
        d1d, d2d = v1, v2

        h6 = h / 6.0
        th1 = th1 + h6 * (w1 + 2.0 * d1b + 2.0 * d1c + d1d)
        th2 = th2 + h6 * (w2 + 2.0 * d2b + 2.0 * d2c + d2d)
        w1n = w1 + h6 * (a1a + 2.0 * a1b + 2.0 * a1c + a1d)
        w2n = w2 + h6 * (a2a + 2.0 * a2b + 2.0 * a2c + a2d)
        w1, w2 = w1n, w2n
        out[i + 1, 0] = th1
        out[i + 1, 1] = th2
        out[i + 1, 2] = w1
        out[i + 1, 3] = w2
        if not (isfinite(th1) and isfinite(th2) and isfinite(w1) and isfinite(w2)):
            return out, DIVERGED, i + 1, 0.0
    return out, OK, n - 1, 0.0
