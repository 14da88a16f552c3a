"""Cap geometry, quadrature grid, interpolation, chart maps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from capspec import cap
from capspec.errors import GridMismatchError, ValidationError

# ------------------------------------------------------------------ domain


def test_make_domain_values():
    dom = cap.make_domain(3, 0.1)
    assert dom.N == 3 and dom.eps == 0.1
    assert abs(dom.theta_max - 0.9 * math.pi) < 1e-15
    assert abs(dom.R - math.tan(0.45 * math.pi)) < 1e-9 * dom.R


def test_make_domain_validation():
    for bad_n in (1, 0, -2, 2.5, True):
        with pytest.raises(ValidationError):
            cap.make_domain(bad_n, 0.1)
    for bad_eps in (0.0, 1.0, -0.3, 1.7, float("nan")):
        with pytest.raises(ValidationError):
            cap.make_domain(3, bad_eps)


def test_surface_area_sphere():
    assert abs(cap.surface_area_sphere(1) - 2 * math.pi) < 1e-14
    assert abs(cap.surface_area_sphere(2) - 4 * math.pi) < 1e-13
    assert abs(cap.surface_area_sphere(3) - 2 * math.pi**2) < 1e-13
    with pytest.raises(ValidationError):
        cap.surface_area_sphere(0)


# ------------------------------------------- cumulative sine-power integral


def test_sin_power_cumulative_n2_exact():
    t = np.linspace(0.0, math.pi, 37)
    got = cap.sin_power_cumulative(2, t)
    want = 1.0 - np.cos(t)
    assert np.max(np.abs(got - want)) < 1e-14


def test_sin_power_cumulative_n3_exact():
    t = np.linspace(0.0, math.pi, 37)
    got = cap.sin_power_cumulative(3, t)
    want = 0.5 * (t - np.sin(t) * np.cos(t))
    assert np.max(np.abs(got - want)) < 1e-14


def test_sin_power_cumulative_small_t_relative_accuracy():
    # The integral is ~ t^N/N near zero; the lower-tail beta form must keep
    # full *relative* accuracy there (the complementary form loses it all).
    for N, t in ((6, 1e-3), (4, 1e-4), (8, 5e-3)):
        ref = oracles.sin_power_integral_ref(N, t)
        got = float(cap.sin_power_cumulative(N, t))
        assert abs(got / ref - 1.0) < 1e-13, (N, t)


def test_sin_power_cumulative_table():
    for N in range(2, 9):
        for t in (0.3, 1.2, 2.8, math.pi - 1e-3):
            ref = oracles.sin_power_integral_ref(N, t)
            got = float(cap.sin_power_cumulative(N, t))
            assert abs(got / ref - 1.0) < 1e-13, (N, t)


def test_sin_power_cumulative_endpoints():
    for N in range(2, 8):
        assert float(cap.sin_power_cumulative(N, 0.0)) == 0.0
        # full integral over (0, pi): sqrt(pi) Gamma(N/2) / Gamma((N+1)/2)
        full = math.sqrt(math.pi) * math.gamma(0.5 * N) / math.gamma(0.5 * (N + 1))
        assert abs(float(cap.sin_power_cumulative(N, math.pi)) / full - 1.0) < 1e-14


def test_cap_area_hemisphere():
    for N in range(2, 7):
        dom = cap.make_domain(N, 0.5)
        assert abs(cap.cap_area(dom) / (0.5 * cap.surface_area_sphere(N)) - 1.0) < 1e-14


# -------------------------------------------------------------------- grid


def test_grid_structure():
    dom = cap.make_domain(3, 0.1)
    g = cap.make_grid(dom)
    assert g.nodes[0] == 0.0
    assert g.nodes[-1] == dom.theta_max
    assert np.all(np.diff(g.nodes) > 0)
    assert g.weights[0] == 0.0 and g.weights[-1] == 0.0
    assert np.all(g.weights[1:-1] > 0)
    assert len(g) == g.n_panels * g.order + 2
    assert g.edges[0] == 0.0 and g.edges[-1] == dom.theta_max
    assert np.all(np.diff(g.edges) > 0)


def test_grid_weights_sum_to_cap_area():
    for N, eps in ((2, 0.3), (3, 0.1), (5, 0.2), (6, 0.05)):
        dom = cap.make_domain(N, eps)
        g = cap.make_grid(dom)
        assert abs(g.weights.sum() / cap.cap_area(dom) - 1.0) < 1e-13, (N, eps)


def test_make_grid_validation():
    dom = cap.make_domain(3, 0.1)
    with pytest.raises(ValidationError):
        cap.make_grid(dom, 15)
    with pytest.raises(ValidationError):
        cap.make_grid(dom, 64.0)


def test_default_node_count_thresholds():
    assert cap.default_node_count(0.3) == 512
    assert cap.default_node_count(0.05) == 512
    assert cap.default_node_count(0.049) == 512 + 16
    assert cap.default_node_count(0.025) == 512 + 16
    assert cap.default_node_count(0.0125) == 512 + 32


def test_panel_index():
    dom = cap.make_domain(3, 0.1)
    g = cap.make_grid(dom, 128)
    assert g.panel_index(0.0) == 0
    assert g.panel_index(dom.theta_max) == g.n_panels - 1
    assert g.panel_index(float(g.edges[3])) == 3
    mid = 0.5 * (g.edges[2] + g.edges[3])
    assert g.panel_index(float(mid)) == 2


# ----------------------------------------------------------- interpolation


def test_interpolation_exact_at_interior_nodes():
    # Node-hit shortcut returns the stored sample bit-for-bit.  (On the
    # microscopic rim panels the reconstructed panel coordinate cannot
    # resolve a hit, so probe nodes away from the boundary refinement.)
    dom = cap.make_domain(3, 0.1)
    g = cap.make_grid(dom, 128)
    rng = np.random.default_rng(0)
    vals = rng.standard_normal(len(g))
    for k in (1, 5, 20, 40, 60):
        assert g.interpolate(vals, float(g.nodes[k])) == vals[k]


def test_interpolation_smooth_function():
    dom = cap.make_domain(3, 0.1)
    g = cap.make_grid(dom)
    f = lambda th: np.cos(2.0 * th) + np.sin(th / 3.0)
    rf = cap.RadialFunction.from_callable(g, f)
    rng = np.random.default_rng(1)
    thetas = rng.uniform(0.0, dom.theta_max, size=200)
    got = g.interpolate(rf.values, thetas)
    assert np.max(np.abs(got - f(thetas))) < 1e-12
    # endpoints go through the polynomial (no node hit): still accurate
    assert abs(g.interpolate(rf.values, 0.0) - f(0.0)) < 1e-12


def test_interpolation_validation():
    dom = cap.make_domain(3, 0.1)
    g = cap.make_grid(dom, 64)
    vals = np.zeros(len(g))
    with pytest.raises(ValidationError):
        g.interpolate(vals, -0.1)
    with pytest.raises(ValidationError):
        g.interpolate(vals, dom.theta_max + 1.0)


@settings(deadline=None, max_examples=30)
@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=16))
def test_interpolation_reproduces_panel_degree_polynomials(coeffs):
    # degree <= order-1 polynomials are interpolated exactly (up to rounding)
    dom = cap.make_domain(2, 0.3)
    g = _POLY_GRID
    z = g.nodes / dom.theta_max
    vals = np.polynomial.polynomial.polyval(z, coeffs)
    probe = np.linspace(0.0, dom.theta_max, 23)
    want = np.polynomial.polynomial.polyval(probe / dom.theta_max, coeffs)
    got = g.interpolate(vals, probe)
    assert np.max(np.abs(got - want)) < 1e-11 * max(1.0, np.max(np.abs(vals)))


_POLY_GRID = cap.make_grid(cap.make_domain(2, 0.3), 64)


# --------------------------------------------------------- RadialFunction


def test_radial_function_basics():
    dom = cap.make_domain(3, 0.2)
    g = cap.make_grid(dom, 64)
    rf = cap.RadialFunction.from_callable(g, np.cos)
    assert np.array_equal(rf.values, np.cos(g.nodes))
    assert rf(float(g.nodes[7])) == rf.values[7]
    assert cap.RadialFunction.ones(g).max_abs() == 1.0
    assert cap.RadialFunction(g, -3.0 * np.ones(len(g))).max_abs() == 3.0


def test_radial_function_shape_mismatch():
    dom = cap.make_domain(3, 0.2)
    g = cap.make_grid(dom, 64)
    with pytest.raises(GridMismatchError):
        cap.RadialFunction(g, np.zeros(len(g) - 1))


def test_inner_product_constant_gives_area():
    dom = cap.make_domain(4, 0.15)
    g = cap.make_grid(dom)
    one = cap.RadialFunction.ones(g)
    assert abs(cap.inner_product(one, one) / cap.cap_area(dom) - 1.0) < 1e-13


def test_inner_product_grid_identity_required():
    dom = cap.make_domain(3, 0.2)
    g1 = cap.make_grid(dom, 64)
    g2 = cap.make_grid(dom, 64)
    f1 = cap.RadialFunction.ones(g1)
    f2 = cap.RadialFunction.ones(g2)
    with pytest.raises(GridMismatchError):
        cap.inner_product(f1, f2)


# ------------------------------------------------------ stereographic chart


def test_stereographic_round_trip():
    th = np.linspace(1e-6, math.pi - 1e-3, 50)
    back = cap.polar_angle(cap.stereographic_radius(th))
    assert np.max(np.abs(back - th)) < 1e-13


def test_stereographic_matches_domain_radius():
    dom = cap.make_domain(3, 0.2)
    assert abs(float(cap.stereographic_radius(dom.theta_max)) - dom.R) < 1e-12 * dom.R


def test_conformal_factor():
    assert float(cap.conformal_factor(0.0)) == 2.0
    assert float(cap.conformal_factor(1.0)) == 1.0
    r = 0.7
    # metric factor satisfies sin(theta) = p(r) * r
    assert abs(cap.conformal_factor(r) * r - math.sin(float(cap.polar_angle(r)))) < 1e-15


# ------------------------------------------------- differentiation weights


def test_derivative_weights_matches_polynomial_derivatives():
    xs = np.array([0.0, 0.13, 0.21, 0.40, 0.55, 0.61, 0.83, 1.0])
    x0 = 0.47
    c = cap.derivative_weights(x0, xs, 3)
    p = np.polynomial.Polynomial([0.3, -1.2, 0.7, 2.1, -0.4, 0.9])
    vals = p(xs)
    for m in range(4):
        want = p.deriv(m)(x0) if m else p(x0)
        assert abs(c[:, m] @ vals - want) < 1e-9 * max(1.0, abs(want))


def test_derivative_weights_validation():
    with pytest.raises(ValidationError):
        cap.derivative_weights(0.5, np.array([0.0, 1.0]), 2)


@settings(deadline=None, max_examples=30)
@given(
    st.lists(st.integers(min_value=0, max_value=40), min_size=4, max_size=9, unique=True),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_derivative_weights_first_derivative_property(idx, x0_frac):
    xs = np.sort(np.asarray(idx, dtype=float)) / 40.0
    x0 = x0_frac * (xs[-1] - xs[0]) + xs[0]
    c = cap.derivative_weights(x0, xs, 1)
    p = np.polynomial.Polynomial([0.2, 1.0, -0.8, 0.5])  # cubic, n >= 4 nodes
    assert abs(c[:, 1] @ p(xs) - p.deriv()(x0)) < 1e-8
