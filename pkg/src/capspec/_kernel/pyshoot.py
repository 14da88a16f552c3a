"""Pure-Python radial shooting integrator (reference backend).

Integrates the polar eigenfunction equation on a cap,

    (sin^(N-1) theta * phi')' + lam * sin^(N-1) theta * phi = 0,

as the first-order system ``y = (phi, v)`` with ``v = sin^(N-1) theta phi'``
(the flux variable keeps the coefficient singularity at theta = 0
integrable).  Initial data is the regular solution ``phi(0) = 1``, seeded at
a small ``theta0`` from the Taylor expansion

    phi = 1 + c2 t^2 + c4 t^4,
    c2 = -lam / (2N),   c4 = lam (3 lam - 2(N-1)) / (24 N (N+2)),

and advanced with an adaptive Dormand-Prince 5(4) pair.  A step-size cap of
about half the local oscillation wavelength guarantees at most one sign
change of phi per accepted step, so crossings can be counted from the
accepted endpoints alone (Sturm oscillation bookkeeping).

The compiled backend (`_shootrk`) implements the identical algorithm with
the identical tableau; both must produce the same trajectories to within
roundoff-level step-control noise.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import IntegratorError, ValidationError

__all__ = ["integrate_radial"]

# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def integrate_radial(
    N: int,
    lam: float,
    theta_end: float,
    eval_pts=None,
    rtol: float = 1e-11,
    atol: float = 1e-13,
):
    """Shoot the regular radial solution from the pole to ``theta_end``.

    Parameters
    ----------
    N : sphere dimension (>= 2).
    lam : spectral parameter.
    theta_end : final angle, in (0, pi).
    eval_pts : optional increasing array of angles in [0, theta_end] at
        which phi is recorded (the integrator lands on them exactly).
    rtol, atol : local error control of the embedded pair.

    Returns
    -------
    (phi_end, zero_count, max_abs_phi, n_steps, values)
        ``zero_count`` is the number of sign changes of phi over accepted
        steps in (0, theta_end]; ``values`` is None unless ``eval_pts`` was
        given.
    """
    if N < 2:
        raise ValidationError(f"dimension must be >= 2, got {N!r}")
    if not 0.0 < theta_end < math.pi:
        raise ValidationError(f"theta_end must lie in (0, pi), got {theta_end!r}")
    pw = N - 1

    values = None
    pts = None
    n_pts = 0
    if eval_pts is not None:
        pts = np.asarray(eval_pts, dtype=float)
        if pts.ndim != 1 or (len(pts) > 1 and np.any(np.diff(pts) <= 0)):
            raise ValidationError("eval_pts must be strictly increasing")
        if len(pts) and (pts[0] < 0.0 or pts[-1] > theta_end * (1 + 1e-12)):
            raise ValidationError("eval_pts must lie within [0, theta_end]")
        values = np.empty(len(pts))
        n_pts = len(pts)

    c2 = -lam / (2.0 * N)
    c4 = lam * (3.0 * lam - 2.0 * (N - 1)) / (24.0 * N * (N + 2.0))
    theta0 = min(1e-6, 1e-3 * theta_end)

    ip = 0
    while ip < n_pts and pts[ip] <= theta0:
        t = pts[ip]
        values[ip] = 1.0 + c2 * t * t + c4 * t**4
        ip += 1

    t = theta0
    phi = 1.0 + c2 * t * t + c4 * t**4
    dphi = 2.0 * c2 * t + 4.0 * c4 * t**3
    v = math.sin(t) ** pw * dphi

    def rhs(th: float, p: float, q: float) -> tuple[float, float]:
        s = math.sin(th) ** pw
        return q / s, -lam * s * p

    h_max = min(theta_end / 16.0, 1.5 / math.sqrt(abs(lam) + 1.0))
    h = min(h_max, 1e-4)
    max_abs = abs(phi)
    zero_count = 0
    last_sign = 1.0 if phi > 0 else (-1.0 if phi < 0 else 0.0)
    n_steps = 0

    f_p, f_v = rhs(t, phi, v)
    while t < theta_end:
        landing = False
        h_try = min(h, h_max, theta_end - t)
        if ip < n_pts and t + h_try >= pts[ip] - 1e-15:
            h_try = pts[ip] - t
            landing = True
        if h_try < 1e-14:
            # Zero-width landing (duplicate target): emit and move on.
            if landing:
                values[ip] = phi
                ip += 1
                continue
            raise IntegratorError(t)

        k1p, k1v = f_p, f_v
        k2p, k2v = rhs(t + _C2 * h_try, phi + h_try * _A21 * k1p, v + h_try * _A21 * k1v)
        k3p, k3v = rhs(
            t + _C3 * h_try,
            phi + h_try * (_A31 * k1p + _A32 * k2p),
            v + h_try * (_A31 * k1v + _A32 * k2v),
        )
        k4p, k4v = rhs(
            t + _C4 * h_try,
            phi + h_try * (_A41 * k1p + _A42 * k2p + _A43 * k3p),
            v + h_try * (_A41 * k1v + _A42 * k2v + _A43 * k3v),
        )
        k5p, k5v = rhs(
            t + _C5 * h_try,
            phi + h_try * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p),
            v + h_try * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v),
        )
        k6p, k6v = rhs(
            t + h_try,
            phi + h_try * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p + _A65 * k5p),
            v + h_try * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v),
        )
        phi_new = phi + h_try * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p + _B6 * k6p)
        v_new = v + h_try * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
        t_new = t + h_try
        k7p, k7v = rhs(t_new, phi_new, v_new)

        err_p = h_try * (
            _E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p + _E7 * k7p
        )
        err_v = h_try * (
            _E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v
        )
        sc_p = atol + rtol * max(abs(phi), abs(phi_new))
        sc_v = atol + rtol * max(abs(v), abs(v_new))
        err = math.sqrt(0.5 * ((err_p / sc_p) ** 2 + (err_v / sc_v) ** 2))

        if err <= 1.0:
            t, phi, v = t_new, phi_new, v_new
            f_p, f_v = k7p, k7v  # first-same-as-last
            n_steps += 1
            if abs(phi) > max_abs:
                max_abs = abs(phi)
            s = 1.0 if phi > 0 else (-1.0 if phi < 0 else 0.0)
            if s != 0.0:
                if last_sign != 0.0 and s != last_sign:
                    zero_count += 1
                last_sign = s
            if landing:
                values[ip] = phi
                ip += 1
            factor = 5.0 if err == 0.0 else min(5.0, 0.9 * err**-0.2)
            h = h_try * factor
        else:
            h = h_try * max(0.2, 0.9 * err**-0.2)
            if h < 1e-14:
                raise IntegratorError(t)

    while ip < n_pts:  # numerically-coincident trailing targets
        values[ip] = phi
        ip += 1
    return phi, zero_count, max_abs, n_steps, values
