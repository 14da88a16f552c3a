"""Geodesic caps of the round N-sphere: domains, radial grids, quadrature.

A cap is the ball of geodesic radius ``theta_max = (1 - eps) * pi`` around
the north pole of S^N; as ``eps -> 0`` it exhausts the sphere minus a point.
All radial profiles live on ``[0, theta_max]`` with the surface measure
``omega_{N-1} * sin^(N-1) theta dtheta`` (``omega_{N-1}`` the area of the
unit equatorial sphere), so that 1D inner products equal integrals over the
cap of the corresponding zonal functions.

The radial grid is a composite Gauss-Legendre rule whose panels shrink
geometrically (ratio 2) toward the rim: both the torsion kernel
``sin^(1-N)`` and near-degenerate eigenfunctions develop boundary layers at
``theta_max``, while everything is analytic in the interior.  Panels wider
than the base resolution are subdivided uniformly.  The first and last grid
nodes sit exactly at 0 and ``theta_max`` with zero quadrature weight —
Gauss nodes are interior, and the endpoint samples carry Dirichlet data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import beta as _beta_fn
from scipy.special import betainc as _betainc

from .errors import GridMismatchError, ValidationError

__all__ = [
    "PANEL_ORDER",
    "MIN_PANEL_WIDTH",
    "CapDomain",
    "RadialGrid",
    "RadialFunction",
    "make_domain",
    "surface_area_sphere",
    "cap_area",
    "make_grid",
    "default_node_count",
    "inner_product",
    "sin_power_cumulative",
    "stereographic_radius",
    "polar_angle",
    "conformal_factor",
    "derivative_weights",
]

#: Gauss-Legendre nodes per panel.
PANEL_ORDER = 16

#: Panels never shrink below this width; fixes the geometric-refinement depth.
MIN_PANEL_WIDTH = 1e-8 * math.pi


@dataclass(frozen=True)
class CapDomain:
    """Geodesic cap ``{theta < theta_max}`` on S^N.

    ``R = tan(theta_max / 2)`` is the stereographic image radius (the cap
    maps onto the ball of radius R; R ~ 2/(pi*eps) for small eps).
    """

    N: int
    eps: float
    theta_max: float
    R: float


def make_domain(N: int, eps: float) -> CapDomain:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {N!r}")
    if not (isinstance(eps, (int, float, np.floating)) and 0.0 < float(eps) < 1.0):
        raise ValidationError(f"eps must lie in (0, 1), got {eps!r}")
    eps = float(eps)
    theta_max = (1.0 - eps) * math.pi
    return CapDomain(int(N), eps, theta_max, math.tan(0.5 * theta_max))


def surface_area_sphere(N: int) -> float:
    """Surface area of the unit N-sphere: ``2 pi^((N+1)/2) / Gamma((N+1)/2)``."""
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise ValidationError(f"dimension must be an integer >= 1, got {N!r}")
    return 2.0 * math.pi ** (0.5 * (N + 1)) / math.gamma(0.5 * (N + 1))


def sin_power_cumulative(N: int, t):
    """Exact ``integral_0^t sin^(N-1) s ds`` via the regularized beta function.

    Substituting ``u = sin^2(s/2)`` turns the integrand into a beta density,
    giving ``2^(N-1) B(N/2, N/2) I_{sin^2(t/2)}(N/2, N/2)`` (which reduces
    to ``1 - cos t`` at N = 2).  The lower-tail form keeps full relative
    accuracy as ``t -> 0``, where the integral shrinks like ``t^N`` and the
    complementary upper-tail expression would cancel catastrophically.
    Accepts scalars or arrays.
    """
    a = 0.5 * N
    u = np.sin(0.5 * np.asarray(t, dtype=float)) ** 2
    return 2.0 ** (N - 1) * _beta_fn(a, a) * _betainc(a, a, u)


def cap_area(dom: CapDomain) -> float:
    """Surface measure of the cap: ``omega_{N-1} * integral sin^(N-1)``."""
    return float(
        surface_area_sphere(dom.N - 1) * sin_power_cumulative(dom.N, dom.theta_max)
    )


def default_node_count(eps: float) -> int:
    """Default grid size: 512, plus one panel's worth per halving below 0.05."""
    if eps >= 0.05:
        return 512
    return 512 + PANEL_ORDER * math.ceil(math.log2(0.05 / eps))


class RadialGrid:
    """Composite Gauss-Legendre quadrature/collocation grid on a cap radius.

    Attributes
    ----------
    dom : CapDomain
    nodes : (n,) ndarray, strictly increasing, ``nodes[0] = 0`` and
        ``nodes[-1] = theta_max``.
    weights : (n,) ndarray, ``omega_{N-1} sin^(N-1)(theta)``-weighted Gauss
        weights; zero at the two endpoint nodes.
    edges : (P+1,) ndarray of panel boundaries.
    order : Gauss nodes per panel (PANEL_ORDER).
    """

    def __init__(self, dom: CapDomain, edges: np.ndarray):
        self.dom = dom
        self.edges = edges
        self.order = PANEL_ORDER
        x, w = np.polynomial.legendre.leggauss(PANEL_ORDER)
        self._ref_x = x
        self._ref_w = w
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        self._ref_bary = 1.0 / diff.prod(axis=1)

        a = edges[:-1]
        b = edges[1:]
        self.panel_mid = 0.5 * (a + b)
        self.panel_half = 0.5 * (b - a)
        inner = (self.panel_mid[:, None] + self.panel_half[:, None] * x[None, :])
        sinw = np.sin(inner) ** (dom.N - 1)
        gw = surface_area_sphere(dom.N - 1) * self.panel_half[:, None] * w[None, :] * sinw

        self.n_panels = len(a)
        self.nodes = np.concatenate(([0.0], inner.ravel(), [dom.theta_max]))
        self.weights = np.concatenate(([0.0], gw.ravel(), [0.0]))

    def __len__(self) -> int:
        return len(self.nodes)

    def panel_values(self, values: np.ndarray) -> np.ndarray:
        """View of interior (Gauss) samples shaped (n_panels, order)."""
        return values[1:-1].reshape(self.n_panels, self.order)

    def panel_index(self, theta: float) -> int:
        idx = int(np.searchsorted(self.edges, theta, side="right")) - 1
        return min(max(idx, 0), self.n_panels - 1)

    def interpolate(self, values: np.ndarray, theta) -> np.ndarray | float:
        """Barycentric panel-polynomial interpolation of nodal samples.

        ``values`` must be aligned with ``self.nodes``.  Spectrally accurate
        for profiles produced by this package (smooth per panel).
        """
        thetas = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.empty_like(thetas)
        pv = self.panel_values(np.asarray(values, dtype=float))
        for i, th in enumerate(thetas):
            if not 0.0 <= th <= self.dom.theta_max + 1e-12:
                raise ValidationError(
                    f"interpolation angle {th!r} outside [0, theta_max]"
                )
            k = self.panel_index(th)
            z = (th - self.panel_mid[k]) / self.panel_half[k]
            d = z - self._ref_x
            hit = np.argmin(np.abs(d))
            if abs(d[hit]) < 1e-14:
                out[i] = pv[k, hit]
                continue
            c = self._ref_bary / d
            out[i] = (c @ pv[k]) / c.sum()
        if np.isscalar(theta) or np.asarray(theta).ndim == 0:
            return float(out[0])
        return out


def make_grid(dom: CapDomain, n_nodes: int | None = None) -> RadialGrid:
    """Build the boundary-refined composite Gauss grid for ``dom``.

    ``n_nodes`` is a resolution target (>= 16): panel count is chosen so the
    total comes out near it, but the geometric rim refinement imposes a floor
    of roughly ``16 * log2(theta_max / MIN_PANEL_WIDTH)`` nodes regardless.
    """
    if n_nodes is None:
        n_nodes = default_node_count(dom.eps)
    if not isinstance(n_nodes, (int, np.integer)) or n_nodes < 16:
        raise ValidationError(f"n_nodes must be an integer >= 16, got {n_nodes!r}")

    theta_max = dom.theta_max
    depth = max(1, math.ceil(math.log2(theta_max / MIN_PANEL_WIDTH)))
    base = max(1, round(n_nodes / PANEL_ORDER) - depth)

    edges = [0.0]
    prev = 0.0
    for k in range(1, depth + 1):
        cur = theta_max * (1.0 - 0.5**k)
        pieces = math.ceil(base * 0.5**k) if base * 0.5**k > 1 else 1
        edges.extend(np.linspace(prev, cur, pieces + 1)[1:])
        prev = cur
    edges.append(theta_max)
    return RadialGrid(dom, np.asarray(edges))


@dataclass
class RadialFunction:
    """Samples of a radial profile on a :class:`RadialGrid`."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.nodes.shape:
            raise GridMismatchError(
                f"values shape {self.values.shape} does not match grid "
                f"size {self.grid.nodes.shape}"
            )

    @classmethod
    def from_callable(cls, grid: RadialGrid, fn) -> "RadialFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float))

    @classmethod
    def ones(cls, grid: RadialGrid) -> "RadialFunction":
        return cls(grid, np.ones_like(grid.nodes))

    def __call__(self, theta):
        return self.grid.interpolate(self.values, theta)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def inner_product(f: RadialFunction, g: RadialFunction) -> float:
    """Surface inner product ``(f, g)`` over the cap of two radial profiles.

    Both arguments must live on the *same* grid object.
    """
    if f.grid is not g.grid:
        raise GridMismatchError("inner product requires functions on the same grid")
    return float(np.dot(f.grid.weights, f.values * g.values))


# ---------------------------------------------------------------------------
# Stereographic chart (provided for cross-checks; production code works in
# the polar angle directly)
# ---------------------------------------------------------------------------

def stereographic_radius(theta):
    """Chart radius ``r = tan(theta/2)`` of the projection from the south pole."""
    return np.tan(0.5 * np.asarray(theta, dtype=float))


def polar_angle(r):
    """Inverse chart map ``theta = 2 arctan r``."""
    return 2.0 * np.arctan(np.asarray(r, dtype=float))


def conformal_factor(r):
    """Metric factor ``p(r) = 2 / (1 + r^2)`` of the stereographic chart."""
    r = np.asarray(r, dtype=float)
    return 2.0 / (1.0 + r * r)


# ---------------------------------------------------------------------------
# Local polynomial differentiation (for PDE residual checks)
# ---------------------------------------------------------------------------

def derivative_weights(x0: float, xs: np.ndarray, max_order: int) -> np.ndarray:
    """Finite-difference weights on arbitrary nodes (Fornberg recursion).

    Returns ``c`` of shape ``(len(xs), max_order + 1)`` such that
    ``c[:, m] @ f(xs)`` approximates the m-th derivative of f at ``x0``.
    """
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    if max_order >= n:
        raise ValidationError(
            f"need more than {max_order} nodes for derivative order {max_order}"
        )
    c = np.zeros((n, max_order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c
