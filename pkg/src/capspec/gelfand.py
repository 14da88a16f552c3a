"""Minimal-solution branch of the cap Gelfand problem.

For a convex, increasing, superlinear source ``f`` with ``f(0) > 0``, the
problem ``-Delta u = lam * f(u)`` on a cap has a minimal nonnegative
solution for small ``lam`` and none past an extremal value ``lam_star``.
This module carries the three computational pieces:

* nonlinearity bookkeeping — the slope minimum ``a_star = min f(s)/s`` and
  its argmin ``s_star``, closed-form for the exponential and shifted-power
  families, one-dimensional minimization for anything else;
* the monotone iteration ``u_n = lam * G(f(u_{n-1}))`` from ``u_0 = 0``
  through the cap Green's operator ``G`` (from the torsion module), with
  divergence reported as an outcome rather than an error;
* bisection of the convergence predicate between the two analytic extremal
  bounds ``1/(a_star * max w) <= lam_star <= lambda_1 / a_star``, whose
  ratio closes to one as the cap fills the sphere.

Field naming: the continuation parameter is ``lam`` (``lambda`` is
reserved) and the nonlinearity's callable is ``f``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .cap import CapDomain, RadialFunction, RadialGrid, make_grid
from .eigen import find_eigenvalue
from .errors import (
    BracketInconsistencyError,
    GridMismatchError,
    GrowthConditionWarning,
    ValidationError,
)
from .torsion import pde_residual, solver_for, torsion_greens

__all__ = [
    "Nonlinearity",
    "MinimalSolution",
    "LambdaStarEstimate",
    "exponential",
    "power",
    "nonlinearity_stats",
    "poisson_solve",
    "minimal_solution",
    "lambda_star_bracket",
    "theorem_ratio",
]

log = logging.getLogger("capspec.gelfand")

_CONV_TOL = 1e-10
_MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class Nonlinearity:
    """A source term with its slope-minimum data.

    ``a_star = min_{s>0} f(s)/s`` attained at ``s_star``; both are exact
    for the built-in families and minimizer output for custom callables.
    """

    kind: str
    f: Callable[[np.ndarray], np.ndarray]
    a_star: float
    s_star: float
    p: float | None = None

    @property
    def f0(self) -> float:
        return float(self.f(0.0))


def exponential() -> Nonlinearity:
    """``f(s) = e^s``: slope minimum ``e`` at ``s = 1``."""
    return Nonlinearity("exponential", np.exp, math.e, 1.0)


def power(p: float) -> Nonlinearity:
    """``f(s) = (1+s)^p`` for p > 1: minimum ``(p/(p-1))^p (p-1)`` at ``1/(p-1)``."""
    p = float(p)
    if not p > 1.0:
        raise ValidationError(f"power-law exponent must exceed 1, got {p!r}")
    s_star = 1.0 / (p - 1.0)
    a_star = (p / (p - 1.0)) ** p * (p - 1.0)

    def f(s):
        return (1.0 + np.asarray(s, dtype=float)) ** p

    return Nonlinearity("power", f, a_star, s_star, p)


NonlinearitySpec = Union[Nonlinearity, str, Callable[[float], float]]


def nonlinearity_stats(spec: NonlinearitySpec) -> Nonlinearity:
    """Resolve a nonlinearity spec into a :class:`Nonlinearity`.

    Accepts an existing instance, the strings ``"exp"`` / ``"exponential"``
    / ``"power:P"``, or a bare callable.  For callables, ``a_star`` comes
    from bounded minimization of ``f(s)/s`` after doubling an upper bracket
    until the ratio turns upward; sampled convexity / growth violations
    raise :class:`GrowthConditionWarning` rather than aborting, since the
    continuation itself will surface genuinely bad sources.
    """
    if isinstance(spec, Nonlinearity):
        return spec
    if isinstance(spec, str):
        name = spec.strip().lower()
        if name in ("exp", "exponential"):
            return exponential()
        if name.startswith("power:"):
            try:
                p = float(name.split(":", 1)[1])
            except ValueError:
                raise ValidationError(
                    f"power nonlinearity needs a numeric exponent, got {spec!r}"
                ) from None
            return power(p)
        raise ValidationError(
            f"unknown nonlinearity {spec!r}; expected 'exp' or 'power:P'"
        )
    if not callable(spec):
        raise ValidationError(f"cannot interpret nonlinearity spec {spec!r}")

    f = np.vectorize(spec, otypes=[float])
    f0 = float(f(0.0))
    if not math.isfinite(f0) or f0 <= 0.0:
        raise ValidationError(f"nonlinearity must satisfy f(0) > 0, got f(0)={f0!r}")

    ratio = lambda s: float(f(s)) / s
    s_hi, prev = 1.0, ratio(1.0)
    for _ in range(60):
        cand = ratio(2.0 * s_hi)
        s_hi *= 2.0
        if cand > prev:
            break
        prev = cand
    else:
        warnings.warn(
            "growth condition violated: f(s)/s never turned upward while "
            f"doubling s to {s_hi:g}; a_star may be meaningless",
            GrowthConditionWarning,
            stacklevel=2,
        )
    res = minimize_scalar(
        ratio, bounds=(1e-12, s_hi), method="bounded", options={"xatol": 1e-12}
    )
    s_star, a_star = float(res.x), float(res.fun)

    samples = np.geomspace(1e-3, s_hi, 17)
    fs = f(samples)
    if np.any(np.diff(fs) < -1e-12):
        warnings.warn(
            "growth condition violated: sampled f is not non-decreasing",
            GrowthConditionWarning,
            stacklevel=2,
        )
    mid = f(0.5 * (samples[:-1] + samples[1:]))
    if np.any(mid > 0.5 * (fs[:-1] + fs[1:]) + 1e-9 * np.abs(fs[1:])):
        warnings.warn(
            "growth condition violated: sampled f fails midpoint convexity",
            GrowthConditionWarning,
            stacklevel=2,
        )
    return Nonlinearity("custom", f, a_star, s_star)


def _as_values(grid: RadialGrid, source) -> np.ndarray:
    if isinstance(source, RadialFunction):
        if source.grid is not grid:
            raise GridMismatchError(
                "source is defined on a different grid than the solver"
            )
        return source.values
    if callable(source):
        return np.array([float(source(t)) for t in grid.nodes])
    return np.asarray(source, dtype=float)


def poisson_solve(dom: CapDomain, grid: RadialGrid, source) -> RadialFunction:
    """Radial Dirichlet solve ``-Delta u = source`` on the cap.

    ``source`` may be a :class:`RadialFunction` on the same grid, a nodal
    array, or a callable of the angle.  The result is regular at the pole
    and zero at the rim.
    """
    vals = _as_values(grid, source)
    if vals.shape != grid.nodes.shape:
        raise ValidationError(
            f"source has {vals.shape} values for a grid of {grid.nodes.shape}"
        )
    if not np.all(np.isfinite(vals)):
        raise ValidationError("source is not finite on the grid")
    return RadialFunction(grid, solver_for(grid).apply(vals))


@dataclass
class MinimalSolution:
    """Outcome of the monotone iteration at one value of ``lam``.

    ``status`` is ``converged`` / ``diverged`` (blow-up cap or non-finite
    iterate) / ``stalled`` (iteration budget exhausted while still
    shrinking); ``converged`` is the boolean shortcut for the first.
    ``residual`` is the interior PDE residual of the final iterate and is
    NaN unless converged.
    """

    lam: float
    u: RadialFunction = field(repr=False)
    iterations: int
    converged: bool
    sup_increment: float
    status: str
    monotone: bool
    residual: float


def minimal_solution(
    dom: CapDomain,
    grid: RadialGrid,
    f: NonlinearitySpec,
    lam: float,
    n_max: int = 500,
    blowup_cap: float = 1e6,
) -> MinimalSolution:
    """Monotone iteration ``u_n = lam * G(f(u_{n-1}))`` from ``u_0 = 0``.

    Stops when the sup increment drops below ``1e-10 * (1 + max u)``
    (converged), an iterate exceeds ``blowup_cap`` or goes non-finite
    (diverged), or ``n_max`` passes without either (stalled).  Divergence
    is a reported outcome, not an error.
    """
    nl = nonlinearity_stats(f)
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValidationError(f"continuation parameter must be positive, got {lam!r}")
    if n_max < 1:
        raise ValidationError(f"iteration budget must be positive, got {n_max!r}")
    solver = solver_for(grid)
    u = np.zeros_like(grid.nodes)
    monotone = True
    status, inc, n = "stalled", math.inf, 0
    for n in range(1, n_max + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            src = lam * nl.f(u)
        if not np.all(np.isfinite(src)):
            status = "diverged"
            break
        u_new = solver.apply(src)
        top = float(np.max(np.abs(u_new)))
        if not math.isfinite(top) or top > blowup_cap:
            u = u_new
            status = "diverged"
            break
        inc = float(np.max(np.abs(u_new - u)))
        if np.min(u_new - u) < -_MONOTONE_SLACK * (1.0 + top):
            monotone = False
        u = u_new
        if inc <= _CONV_TOL * (1.0 + top):
            status = "converged"
            break
    converged = status == "converged"
    residual = (
        pde_residual(dom, grid, u, lam * nl.f(u)) if converged else math.nan
    )
    log.debug(
        "iteration lam=%.8g: %s after %d steps (last increment %.3g)",
        lam, status, n, inc,
    )
    return MinimalSolution(
        lam, RadialFunction(grid, u), n, converged, inc, status, monotone, residual
    )


@dataclass
class LambdaStarEstimate:
    """Bisection bracket for the extremal parameter.

    ``lower_analytic = 1/(a_star * max w)`` and ``upper_analytic =
    lambda_1 / a_star`` are the two proved extremal bounds; the refined
    ``[bracket_lo, bracket_hi]`` sits inside them with relative width at
    most ``tolerance``.  ``stalled`` lists parameter values where the
    iteration exhausted its budget (treated as non-convergent).
    """

    lower_analytic: float
    upper_analytic: float
    bracket_lo: float
    bracket_hi: float
    tolerance: float
    lambda1: float
    w_max: float
    stalled: tuple[float, ...] = ()

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.bracket_lo + self.bracket_hi)


def lambda_star_bracket(
    dom: CapDomain,
    grid: RadialGrid,
    f: NonlinearitySpec,
    tol: float = 0.01,
) -> LambdaStarEstimate:
    """Bracket the extremal parameter by bisecting the convergence predicate.

    The analytic lower endpoint must converge and the analytic upper
    endpoint must not — both are rechecked numerically, and a violation
    raises :class:`BracketInconsistencyError` carrying the offending pair.
    """
    nl = nonlinearity_stats(f)
    tol = float(tol)
    if not 1e-4 < tol < 0.1:
        raise ValidationError(f"bracket tolerance must lie in (1e-4, 0.1), got {tol!r}")
    w_max = torsion_greens(dom, grid).max_value
    lambda1 = find_eigenvalue(dom, 1, grid).lam
    lower = 1.0 / (nl.a_star * w_max)
    upper = lambda1 / nl.a_star

    stalled: list[float] = []

    def converges(lam: float) -> bool:
        out = minimal_solution(dom, grid, nl, lam)
        if out.status == "stalled":
            stalled.append(lam)
        return out.converged

    if not converges(lower):
        raise BracketInconsistencyError(
            "bracket inconsistency: analytic lower endpoint "
            f"lam={lower:.10g} failed to converge (upper {upper:.10g})"
        )
    if converges(upper):
        raise BracketInconsistencyError(
            "bracket inconsistency: analytic upper endpoint "
            f"lam={upper:.10g} converged (lower {lower:.10g})"
        )
    lo, hi = lower, upper
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if converges(mid):
            lo = mid
        else:
            hi = mid
    log.info(
        "bracket N=%d eps=%g %s: [%.8g, %.8g] in [%.8g, %.8g]",
        dom.N, dom.eps, nl.kind, lo, hi, lower, upper,
    )
    return LambdaStarEstimate(
        lower, upper, lo, hi, tol, lambda1, w_max, tuple(stalled)
    )


def theorem_ratio(
    dom: CapDomain,
    f: NonlinearitySpec,
    grid: RadialGrid | None = None,
    tol: float = 0.01,
) -> float:
    """Ratio ``a_star * lam_star_mid / lambda_1`` from the bracket midpoint.

    Sweeping this over shrinking ``eps`` exhibits the extremal parameter
    approaching ``lambda_1 / a_star`` from below (ratio tending to one).
    """
    nl = nonlinearity_stats(f)
    if grid is None:
        grid = make_grid(dom)
    est = lambda_star_bracket(dom, grid, nl, tol)
    return nl.a_star * est.midpoint / est.lambda1
