"""Dirichlet eigenvalues and radial eigenfunctions on geodesic caps.

The polar (zonal) spectrum of ``-Delta`` on the cap ``theta < theta_max``
is computed by shooting: integrate the regular solution from the pole and
locate the parameters where it vanishes at the rim.  Sturm oscillation
theory makes the search bulletproof — the number of interior sign changes
of the shot solution equals the number of eigenvalues strictly below the
shooting parameter, so the j-th eigenvalue is bracketed by bisection on the
zero count before a root finder polishes the rim value.

Two independent representations back the shooting route:

* for N = 3 the spectrum is elementary (``lam_j = j^2/(1-eps)^2 - 1`` with
  sine-kernel eigenfunctions), implemented in :func:`eigen_closed_n3`;
* for general N the radial profile is a ratio of an associated Legendre
  function and a sine power, implemented in :func:`legendre_radial_profile`
  on top of :mod:`capspec.specfun`.

In the Legendre representation the degree ``nu`` and the spectral parameter
are linked by ``lam = nu (nu + 1) - N (N - 2) / 4``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import specfun
from ._kernel import integrate_radial
from .cap import (
    CapDomain,
    RadialFunction,
    RadialGrid,
    cap_area,
    inner_product,
    make_domain,
    make_grid,
)
from .errors import SignalBelowNoiseError, SpectralScanError, ValidationError

__all__ = [
    "EigenPair",
    "shoot",
    "find_eigenvalue",
    "eigen_closed_n3",
    "fourier_coefficient",
    "decay_exponent_estimate",
    "legendre_radial_profile",
    "nu_from_lambda",
    "lambda_from_nu",
]

log = logging.getLogger("capspec.eigen")

#: Shot budget for one eigenvalue hunt before declaring the scan exhausted.
_SCAN_BUDGET = 600


def lambda_from_nu(N: int, nu: float) -> float:
    """Spectral parameter of the Legendre degree: ``nu(nu+1) - N(N-2)/4``."""
    return nu * (nu + 1.0) - 0.25 * N * (N - 2)


def nu_from_lambda(N: int, lam: float) -> float:
    """Legendre degree of a spectral parameter (branch with nu >= -1/2)."""
    disc = lam + 0.25 * (N - 1) ** 2
    if disc < 0:
        raise ValidationError(f"no real degree for lam={lam!r} in dimension {N}")
    return math.sqrt(disc) - 0.5


@dataclass
class EigenPair:
    """One radial Dirichlet mode.

    ``K`` is the representation constant of the normalized eigenfunction:
    the Legendre-route constant for :func:`find_eigenvalue` (all N), the
    sine-kernel constant for :func:`eigen_closed_n3`.  ``endpoint_residual``
    is ``|phi(theta_max)| / max|phi|`` of the raw shot before the Dirichlet
    value is clamped.
    """

    j: int
    lam: float
    nu: float
    K: float
    phi: RadialFunction = field(repr=False)
    endpoint_residual: float = 0.0


def shoot(dom: CapDomain, lam: float) -> tuple[float, int]:
    """Endpoint value and interior sign-change count of the regular shot."""
    if not math.isfinite(lam):
        raise ValidationError(f"spectral parameter must be finite, got {lam!r}")
    phi_end, zeros, _, _, _ = integrate_radial(dom.N, float(lam), dom.theta_max)
    return phi_end, zeros


def _zero_count(dom: CapDomain, lam: float) -> tuple[int, float]:
    phi_end, zeros, max_abs, _, _ = integrate_radial(dom.N, lam, dom.theta_max)
    # A rim value at roundoff level means lam sits essentially on an
    # eigenvalue; whether the terminal crossing was counted is then noise.
    if abs(phi_end) <= 1e-12 * max_abs:
        return zeros, 0.0
    return zeros, phi_end


def _representation_constant(N: int, nu: float, phi0: float) -> float:
    """Legendre-route constant from the pole limit of the normalized mode.

    The rescaled Legendre function behaves near the pole like
    ``(theta/2)^q / Gamma(1+q)`` for negated half-integer order ``-q``
    (odd N, q = (N-2)/2) and like ``Gamma(q+nu+1) theta^q /
    (q! 2^q Gamma(1+nu-q))`` for natural order ``q`` (even N).
    """
    q = 0.5 * (N - 2)
    if N % 2 == 1:
        return phi0 * 2.0**q * math.gamma(1.0 + q)
    m = int(q)
    return (
        phi0
        * math.factorial(m)
        * 2.0**m
        * math.gamma(1.0 + nu - m)
        / math.gamma(m + nu + 1.0)
    )


def _interior_sign_changes(values: np.ndarray) -> int:
    mags = np.abs(values)
    big = mags > 1e-12 * mags.max()
    signs = np.sign(values[big])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def find_eigenvalue(dom: CapDomain, j: int, grid: RadialGrid | None = None) -> EigenPair:
    """Locate the j-th radial Dirichlet eigenvalue by shooting.

    Bisects on the Sturm zero count until the count jumps from ``j - 1`` to
    ``j`` across the bracket, then polishes the rim value with Brent's
    method (the endpoint changes sign across that jump).  Raises
    :class:`SpectralScanError` if the shot budget is exhausted.
    """
    if not isinstance(j, (int, np.integer)) or j < 1:
        raise ValidationError(f"mode index must be a positive integer, got {j!r}")
    if grid is None:
        grid = make_grid(dom)
    N = dom.N
    shots = 0

    def count(lam: float) -> tuple[int, float]:
        nonlocal shots
        shots += 1
        if shots > _SCAN_BUDGET:
            raise SpectralScanError(
                f"spectral scan exhausted after {_SCAN_BUDGET} shots (N={N}, "
                f"eps={dom.eps:g}, j={j})"
            )
        return _zero_count(dom, lam)

    nu_guess = (j - 1) + 0.5 * (N - 2)
    lam_guess = max(lambda_from_nu(N, nu_guess), 1.0)

    # Expand until the count at hi reaches j (at lam = 0 the shot is the
    # constant 1: no zeros, so lo = 0 always sits below the target).
    lo, c_lo, end_lo = 0.0, 0, 1.0
    hi = 2.0 * lam_guess + 10.0
    while True:
        c_hi, end_hi = count(hi)
        if c_hi >= j:
            break
        lo, c_lo, end_lo = hi, c_hi, end_hi
        hi = 2.0 * hi + 10.0

    # Bisect on the Sturm predicate count(lam) >= j.  Once the bracket
    # counts are exactly adjacent the rim value has opposite signs at the
    # ends (one new zero enters through the rim) and Brent's method takes
    # over; degenerate roundoff endpoints just keep the bisection running.
    lam = None
    while hi - lo > 1e-10 * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        c_mid, end_mid = count(mid)
        if c_mid >= j:
            hi, c_hi, end_hi = mid, c_mid, end_mid
        else:
            lo, c_lo, end_lo = mid, c_mid, end_mid
        if (
            c_lo == j - 1
            and c_hi == j
            and end_lo != 0.0
            and end_hi != 0.0
            and (end_lo > 0.0) != (end_hi > 0.0)
        ):
            lam = brentq(
                lambda L: integrate_radial(N, L, dom.theta_max)[0],
                lo,
                hi,
                xtol=1e-14 * (1.0 + hi),
                rtol=4.0 * np.finfo(float).eps,
                maxiter=120,
            )
            break
    if lam is None:
        lam = 0.5 * (lo + hi)

    log.debug("eigenvalue hunt N=%d eps=%g j=%d: lam=%.15g after %d shots",
              N, dom.eps, j, lam, shots)

    phi_end, _, max_abs, _, vals = integrate_radial(
        N, lam, dom.theta_max, eval_pts=grid.nodes
    )
    residual = abs(phi_end) / max_abs
    vals = np.asarray(vals)
    vals[-1] = 0.0
    zeros = _interior_sign_changes(vals[:-1])
    if zeros != j - 1:
        raise SpectralScanError(
            f"spectral scan landed on a mode with {zeros} interior zeros, "
            f"expected {j - 1} (N={N}, eps={dom.eps:g})"
        )
    phi = RadialFunction(grid, vals)
    nrm = math.sqrt(inner_product(phi, phi))
    phi.values /= nrm
    nu = nu_from_lambda(N, lam)
    K = _representation_constant(N, nu, phi.values[0])
    return EigenPair(j, float(lam), nu, K, phi, residual)


def eigen_closed_n3(dom: CapDomain, j: int, grid: RadialGrid | None = None) -> EigenPair:
    """Elementary N = 3 mode: ``phi_j = K_j sin(j theta/(1-eps)) / sin theta``.

    ``K_j`` is fixed by numeric normalization on the grid; analytically it
    equals ``1 / (pi sqrt(2 (1 - eps)))``.
    """
    if dom.N != 3:
        raise ValidationError(f"closed-form spectrum requires N = 3, got N={dom.N}")
    if not isinstance(j, (int, np.integer)) or j < 1:
        raise ValidationError(f"mode index must be a positive integer, got {j!r}")
    if grid is None:
        grid = make_grid(dom)
    scale = j / (1.0 - dom.eps)
    lam = scale * scale - 1.0
    th = grid.nodes
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.sin(scale * th) / np.sin(th)
    vals[0] = scale
    vals[-1] = 0.0
    phi = RadialFunction(grid, vals)
    nrm = math.sqrt(inner_product(phi, phi))
    phi.values /= nrm
    return EigenPair(j, lam, scale - 0.5, 1.0 / nrm, phi)


def fourier_coefficient(dom: CapDomain, pair: EigenPair) -> float:
    """Coefficient ``(1, phi_j)`` of the constant against a normalized mode."""
    if pair.phi.grid.dom != dom:
        raise ValidationError("eigenpair was computed on a different domain")
    return inner_product(RadialFunction.ones(pair.phi.grid), pair.phi)


def decay_exponent_estimate(N: int, j: int, eps_list) -> float:
    """Least-squares slope of ``log |(1, phi_j)|`` against ``log eps``.

    For modes ``j >= 2`` the coefficient decays like ``eps^(N-2)`` as the
    cap fills the sphere; this estimates that exponent from a sweep.
    Raises :class:`SignalBelowNoiseError` when a coefficient falls under
    the quadrature noise floor and the fit would be meaningless.
    """
    if not isinstance(j, (int, np.integer)) or j < 2:
        raise ValidationError(f"decay estimate needs a mode index >= 2, got {j!r}")
    eps_arr = [float(e) for e in eps_list]
    if len(eps_arr) < 3 or any(b >= a for a, b in zip(eps_arr, eps_arr[1:])):
        raise ValidationError("eps_list must contain at least 3 decreasing values")
    coefs = []
    for eps in eps_arr:
        dom = make_domain(N, eps)
        grid = make_grid(dom)
        pair = find_eigenvalue(dom, j, grid)
        c = fourier_coefficient(dom, pair)
        floor = 1e-10 * math.sqrt(cap_area(dom))
        if abs(c) < floor:
            raise SignalBelowNoiseError(
                f"signal below noise: |(1, phi_{j})| = {abs(c):.3e} under "
                f"floor {floor:.3e} at eps={eps:g}"
            )
        coefs.append(abs(c))
    slope = float(np.polyfit(np.log(eps_arr), np.log(coefs), 1)[0])
    log.info("decay fit N=%d j=%d over %s: slope %.4f", N, j, eps_arr, slope)
    return slope


def legendre_radial_profile(dom: CapDomain, nu: float, thetas) -> np.ndarray:
    """Unnormalized Legendre-route radial profile at the given angles.

    Evaluates ``P-hat / sin^q`` with ``q = (N-2)/2``: the hat function uses
    the negated (negative half-integer) order for odd N and the natural
    order ``q`` for even N.  The pole value is filled from the known limit.
    Serves as the independent cross-check of the shooting profiles.
    """
    q = 0.5 * (dom.N - 2)
    mu = -q if dom.N % 2 == 1 else q
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    out = np.empty_like(thetas)
    for i, th in enumerate(thetas):
        if th < 1e-12:
            if dom.N % 2 == 1:
                out[i] = 1.0 / (2.0**q * math.gamma(1.0 + q))
            else:
                m = int(q)
                out[i] = math.gamma(m + nu + 1.0) / (
                    math.factorial(m) * 2.0**m * math.gamma(1.0 + nu - m)
                )
        else:
            out[i] = specfun.legendre_p(nu, mu, math.cos(th)) / math.sin(th) ** q
    return out
