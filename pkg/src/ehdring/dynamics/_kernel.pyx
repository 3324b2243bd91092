# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 kernel; same contract and operation order as ``_kernel_py``."""

from libc.math cimport cos, sin, tanh, fabs, isfinite

import numpy as np

cdef enum:
    ST_OK = 0
    ST_SINGULAR = 1
    ST_DIVERGED = 2

OK = ST_OK
SINGULAR = ST_SINGULAR
DIVERGED = ST_DIVERGED


cdef struct Params:
    double m1, m2, r1, r2, j1, j2, g, xi1, xi2


cdef inline bint _accel(const Params* p, double th1, double th2, double w1, double w2,
                        double torque, double tf, double eps, double det_floor,
                        double* a1, double* a2, double* det_out) noexcept nogil:
    cdef double phi = th2 - th1
    cdef double w_rel = w2 - w1
    cdef double c = cos(phi)
    cdef double s = sin(phi)
    cdef double m11 = p.j1 + p.m1 * p.r1 * p.r1 + p.m2 * p.r1 * p.r1 + p.j2 - 2.0 * p.m2 * p.r1 * p.r2 * c
    cdef double m12 = -p.j2 + p.m2 * p.r1 * p.r2 * c
    cdef double m21 = p.m2 * p.r1 * p.r2 * c - p.m2 * p.r2 * p.r2
    cdef double m22 = p.m2 * p.r2 * p.r2
    cdef double k1 = p.m2 * p.r1 * p.r2 * w_rel * s + p.xi1
    cdef double grav = p.m2 * p.g * p.r2 * s
    cdef double dry = 0.0
    cdef double b1, b2, det, f, u22, tmp
    if tf != 0.0:
        dry = tf * tanh(w1 / eps)
    b1 = grav - (k1 * w1 + k1 * w2) - dry
    b2 = (torque - grav) - (0.0 * w1 + p.xi2 * w2)
    det = m11 * m22 - m12 * m21
    det_out[0] = det
    if not (fabs(det) >= det_floor):
        return False
    if fabs(m21) > fabs(m11):
        tmp = m11; m11 = m21; m21 = tmp
        tmp = m12; m12 = m22; m22 = tmp
        tmp = b1; b1 = b2; b2 = tmp
    f = m21 / m11
    u22 = m22 - f * m12
    a2[0] = (b2 - f * b1) / u22
    a1[0] = (b1 - m12 * a2[0]) / m11
    return True


def accel(p, double th1, double th2, double w1, double w2, double torque,
          double tf, double eps, double det_floor):
    cdef Params P
    P.m1, P.m2, P.r1, P.r2, P.j1, P.j2, P.g, P.xi1, P.xi2 = [float(x) for x in p]
    cdef double a1 = 0.0, a2 = 0.0, det = 0.0
    ok = _accel(&P, th1, th2, w1, w2, torque, tf, eps, det_floor, &a1, &a2, &det)
    if not ok:
        return 0.0, 0.0, det, False
    return a1, a2, det, True


def rk4_run(p, y0, times, torque, double tf, double eps, double det_floor):
    cdef Params P
    P.m1, P.m2, P.r1, P.r2, P.j1, P.j2, P.g, P.xi1, P.xi2 = [float(x) for x in p]
    cdef double[::1] tv = np.ascontiguousarray(times, dtype=np.float64)
    cdef double[::1] qv = np.ascontiguousarray(torque, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    out_arr = np.full((n, 4), np.nan)
    cdef double[:, ::1] out = out_arr
    cdef double th1 = float(y0[0]), th2 = float(y0[1]), w1 = float(y0[2]), w2 = float(y0[3])
    cdef double h, hh, h6, tq, det = 0.0
    cdef double a1a, a2a, a1b, a2b, a1c, a2c, a1d, a2d
    cdef double x1, x2, v1, v2, d1b, d2b, d1c, d2c, d1d, d2d, w1n, w2n
    cdef Py_ssize_t i
    cdef int status = ST_OK
    cdef Py_ssize_t index = n - 1
    out[0, 0] = th1
    out[0, 1] = th2
    out[0, 2] = w1
    out[0, 3] = w2
    with nogil:
        for i in range(n - 1):
            h = tv[i + 1] - tv[i]
            hh = 0.5 * h
            tq = qv[i]
            if not _accel(&P, th1, th2, w1, w2, tq, tf, eps, det_floor, &a1a, &a2a, &det):
                status = ST_SINGULAR; index = i; break
            x1 = th1 + hh * w1
            x2 = th2 + hh * w2
            v1 = w1 + hh * a1a
            v2 = w2 + hh * a2a
            if not _accel(&P, x1, x2, v1, v2, tq, tf, eps, det_floor, &a1b, &a2b, &det):
                status = ST_SINGULAR; index = i; break
            d1b = v1; d2b = v2
            x1 = th1 + hh * d1b
            x2 = th2 + hh * d2b
            v1 = w1 + hh * a1b
            v2 = w2 + hh * a2b
            if not _accel(&P, x1, x2, v1, v2, tq, tf, eps, det_floor, &a1c, &a2c, &det):
                status = ST_SINGULAR; index = i; break
            d1c = v1; d2c = v2
            x1 = th1 + h * d1c
            x2 = th2 + h * d2c
            v1 = w1 + h * a1c
            v2 = w2 + h * a2c
            if not _accel(&P, x1, x2, v1, v2, tq, tf, eps, det_floor, &a1d, &a2d, &det):
                status = ST_SINGULAR; index = i; break
            d1d = v1; d2d = v2
            h6 = h / 6.0
            th1 = th1 + h6 * (w1 + 2.0 * d1b + 2.0 * d1c + d1d)
            th2 = th2 + h6 * (w2 + 2.0 * d2b + 2.0 * d2c + d2d)
            w1n = w1 + h6 * (a1a + 2.0 * a1b + 2.0 * a1c + a1d)
            w2n = w2 + h6 * (a2a + 2.0 * a2b + 2.0 * a2c + a2d)
            w1 = w1n
            w2 = w2n
            out[i + 1, 0] = th1
            out[i + 1, 1] = th2
            out[i + 1, 2] = w1
            out[i + 1, 3] = w2
            if not (isfinite(th1) and isfinite(th2) and isfinite(w1) and isfinite(w2)):
                status = ST_DIVERGED; index = i + 1; break
    if status != ST_SINGULAR:
        det = 0.0
    return out_arr, status, index, det
