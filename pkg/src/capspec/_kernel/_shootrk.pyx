# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled radial shooting integrator.

Same algorithm, tableau, and step-control constants as ``pyshoot`` — the two
backends are interchangeable and are cross-checked in the test suite.  See
``pyshoot.py`` for the mathematical background.
"""

from libc.math cimport fabs, fmax, fmin, pow, sin, sqrt

import numpy as np

from ..errors import IntegratorError, ValidationError

__all__ = ["integrate_radial"]

cdef double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0
cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0


cdef inline double sinpow(double th, int pw) nogil:
    cdef double s = sin(th)
    cdef double out = 1.0
    cdef int i
    for i in range(pw):
        out *= s
    return out


def integrate_radial(int N, double lam, double theta_end, eval_pts=None,
                     double rtol=1e-11, double atol=1e-13):
    """Shoot the regular radial solution from the pole to ``theta_end``.

    Returns ``(phi_end, zero_count, max_abs_phi, n_steps, values)`` exactly
    like the pure-Python backend.
    """
    cdef double pi = 3.141592653589793238462643383279502884
    if N < 2:
        raise ValidationError(f"dimension must be >= 2, got {N!r}")
    if not 0.0 < theta_end < pi:
        raise ValidationError(f"theta_end must lie in (0, pi), got {theta_end!r}")
    cdef int pw = N - 1

    values_arr = None
    cdef double[::1] pts
    cdef double[::1] values
    cdef Py_ssize_t n_pts = 0, ip = 0
    if eval_pts is not None:
        pts_arr = np.ascontiguousarray(eval_pts, dtype=np.float64)
        if pts_arr.ndim != 1 or (len(pts_arr) > 1 and np.any(np.diff(pts_arr) <= 0)):
            raise ValidationError("eval_pts must be strictly increasing")
        if len(pts_arr) and (pts_arr[0] < 0.0 or pts_arr[-1] > theta_end * (1 + 1e-12)):
            raise ValidationError("eval_pts must lie within [0, theta_end]")
        values_arr = np.empty(len(pts_arr))
        pts = pts_arr
        values = values_arr
        n_pts = len(pts_arr)

    cdef double c2 = -lam / (2.0 * N)
    cdef double c4 = lam * (3.0 * lam - 2.0 * (N - 1)) / (24.0 * N * (N + 2.0))
    cdef double theta0 = fmin(1e-6, 1e-3 * theta_end)

    cdef double t
    while ip < n_pts and pts[ip] <= theta0:
        t = pts[ip]
        values[ip] = 1.0 + c2 * t * t + c4 * t * t * t * t
        ip += 1

    t = theta0
    cdef double phi = 1.0 + c2 * t * t + c4 * t * t * t * t
    cdef double dphi = 2.0 * c2 * t + 4.0 * c4 * t * t * t
    cdef double v = sinpow(t, pw) * dphi

    cdef double h_max = fmin(theta_end / 16.0, 1.5 / sqrt(fabs(lam) + 1.0))
    cdef double h = fmin(h_max, 1e-4)
    cdef double max_abs = fabs(phi)
    cdef int zero_count = 0
    cdef double last_sign = 1.0 if phi > 0 else (-1.0 if phi < 0 else 0.0)
    cdef long n_steps = 0

    cdef double s
    cdef double f_p, f_v
    cdef double k1p, k1v, k2p, k2v, k3p, k3v, k4p, k4v, k5p, k5v, k6p, k6v, k7p, k7v
    cdef double h_try, t_new, phi_new, v_new, err_p, err_v, sc_p, sc_v, err, factor
    cdef double yp, yv
    cdef bint landing

    s = sinpow(t, pw)
    f_p = v / s
    f_v = -lam * s * phi

    while t < theta_end:
        landing = False
        h_try = fmin(fmin(h, h_max), theta_end - t)
        if ip < n_pts and t + h_try >= pts[ip] - 1e-15:
            h_try = pts[ip] - t
            landing = True
        if h_try < 1e-14:
            if landing:
                values[ip] = phi
                ip += 1
                continue
            raise IntegratorError(t)

        k1p = f_p; k1v = f_v
        yp = phi + h_try * A21 * k1p; yv = v + h_try * A21 * k1v
        s = sinpow(t + C2 * h_try, pw); k2p = yv / s; k2v = -lam * s * yp
        yp = phi + h_try * (A31 * k1p + A32 * k2p)
        yv = v + h_try * (A31 * k1v + A32 * k2v)
        s = sinpow(t + C3 * h_try, pw); k3p = yv / s; k3v = -lam * s * yp
        yp = phi + h_try * (A41 * k1p + A42 * k2p + A43 * k3p)
        yv = v + h_try * (A41 * k1v + A42 * k2v + A43 * k3v)
        s = sinpow(t + C4 * h_try, pw); k4p = yv / s; k4v = -lam * s * yp
        yp = phi + h_try * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p)
        yv = v + h_try * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
        s = sinpow(t + C5 * h_try, pw); k5p = yv / s; k5v = -lam * s * yp
        yp = phi + h_try * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p)
        yv = v + h_try * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
        s = sinpow(t + h_try, pw); k6p = yv / s; k6v = -lam * s * yp

        phi_new = phi + h_try * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
        v_new = v + h_try * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
        t_new = t + h_try
        s = sinpow(t_new, pw); k7p = v_new / s; k7v = -lam * s * phi_new

        err_p = h_try * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
        err_v = h_try * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
        sc_p = atol + rtol * fmax(fabs(phi), fabs(phi_new))
        sc_v = atol + rtol * fmax(fabs(v), fabs(v_new))
        err = sqrt(0.5 * ((err_p / sc_p) * (err_p / sc_p) + (err_v / sc_v) * (err_v / sc_v)))

        if err <= 1.0:
            t = t_new; phi = phi_new; v = v_new
            f_p = k7p; f_v = k7v
            n_steps += 1
            if fabs(phi) > max_abs:
                max_abs = fabs(phi)
            s = 1.0 if phi > 0 else (-1.0 if phi < 0 else 0.0)
            if s != 0.0:
                if last_sign != 0.0 and s != last_sign:
                    zero_count += 1
                last_sign = s
            if landing:
                values[ip] = phi
                ip += 1
            factor = 5.0 if err == 0.0 else fmin(5.0, 0.9 * pow(err, -0.2))
            h = h_try * factor
        else:
            h = h_try * fmax(0.2, 0.9 * pow(err, -0.2))
            if h < 1e-14:
                raise IntegratorError(t)

    while ip < n_pts:
        values[ip] = phi
        ip += 1
    return phi, zero_count, max_abs, n_steps, values_arr
