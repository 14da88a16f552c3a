"""Torsion profile routes: closed form, Green-representation quadrature, series."""

import math

import numpy as np
import pytest

from helpers import dom_grid, greens
from capspec import torsion
from capspec.errors import ValidationError

# ------------------------------------------------------------- closed forms


def test_closed_form_n2_hemisphere_is_log2():
    dom, grid = dom_grid(2, 0.5)
    res = torsion.torsion_closed_form(dom, grid)
    assert abs(res.max_value - math.log(2.0)) < 1e-14
    assert res.method == "closed_form"


def test_closed_form_only_low_dimensions():
    dom, grid = dom_grid(4, 0.1)
    with pytest.raises(ValidationError):
        torsion.torsion_closed_form(dom, grid)


def test_closed_form_rim_zero_and_monotone():
    for N, eps in ((2, 0.3), (3, 0.1)):
        dom, grid = dom_grid(N, eps)
        res = torsion.torsion_closed_form(dom, grid)
        assert res.w.values[-1] == 0.0
        assert np.all(np.diff(res.w.values) < 1e-12)  # decreasing from the pole


# ------------------------------------------------------------- Green route


def test_greens_matches_closed_on_grid():
    for N, eps in ((2, 0.5), (2, 0.1), (3, 0.5), (3, 0.1)):
        dom, grid = dom_grid(N, eps)
        closed = torsion.torsion_closed_form(dom, grid)
        green = greens(N, eps)
        diff = np.max(np.abs(closed.w.values - green.w.values))
        assert diff < 1e-10 * max(1.0, closed.max_value), (N, eps, diff)
        assert green.method == "greens_quadrature"


def test_greens_matches_closed_off_grid():
    rng = np.random.default_rng(2)
    for N, eps in ((2, 0.5), (3, 0.1)):
        dom, grid = dom_grid(N, eps)
        closed = torsion.torsion_closed_form(dom, grid)
        green = greens(N, eps)
        for th in rng.uniform(0.0, dom.theta_max, size=25):
            assert abs(green.evaluate(th) - closed.evaluate(th)) < 1e-10


def test_greens_frozen_pole_values():
    # regression anchors on the committed default grids
    assert abs(greens(3, 0.1).max_value - 4.85097259571) < 1e-9
    assert abs(greens(2, 0.3).max_value - 1.57935801369) < 1e-9
    assert abs(greens(5, 0.2).max_value - 2.68650238378) < 1e-9
    assert abs(greens(4, 0.1).max_value - 7.88065510514) < 1e-9


def test_greens_evaluate_edges():
    dom, grid = dom_grid(3, 0.1)
    res = greens(3, 0.1)
    assert res.evaluate(dom.theta_max) == 0.0
    assert abs(res.evaluate(0.0) - res.max_value) < 1e-12
    with pytest.raises(ValidationError):
        res.evaluate(-0.2)
    with pytest.raises(ValidationError):
        res.evaluate(dom.theta_max + 0.5)


def test_pde_residual_across_dimension_table():
    for N, eps in ((2, 0.3), (3, 0.1), (4, 0.1), (5, 0.2), (6, 0.1)):
        res = greens(N, eps)
        assert res.residual < 1e-6, (N, eps, res.residual)
    for N, eps in ((2, 0.5), (3, 0.1)):
        dom, grid = dom_grid(N, eps)
        closed = torsion.torsion_closed_form(dom, grid)
        assert closed.residual < 1e-6


def test_solver_cache_returns_same_object():
    _, grid = dom_grid(3, 0.1)
    assert torsion.solver_for(grid) is torsion.solver_for(grid)


# ---------------------------------------------------------- spectral route


def test_spectral_one_mode_close():
    # a single mode already lands within a few percent of the pole value
    green = greens(3, 0.1)
    dom, grid = dom_grid(3, 0.1)
    res = torsion.torsion_spectral(dom, 1, grid)
    assert res.method == "spectral"
    assert abs(res.max_value / green.max_value - 1.0) < 0.05


def test_spectral_gap_frozen_j8():
    # truncation gap at the pole with 8 modes; the first omitted odd mode
    # keeps it just above 1e-3 at eps=0.1 and under 1e-3 at eps=0.05
    green = greens(3, 0.1)
    dom, grid = dom_grid(3, 0.1)
    res = torsion.torsion_spectral(dom, 8, grid)
    gap = abs(res.max_value - green.max_value)
    assert 1.0e-3 < gap < 1.5e-3, gap

    green5 = greens(3, 0.05)
    dom5, grid5 = dom_grid(3, 0.05)
    res5 = torsion.torsion_spectral(dom5, 8, grid5)
    assert abs(res5.max_value - green5.max_value) <= 1e-3


def test_spectral_pointwise_n2():
    dom, grid = dom_grid(2, 0.3)
    res = torsion.torsion_spectral(dom, 8, grid)
    green = greens(2, 0.3)
    assert np.max(np.abs(res.w.values - green.w.values)) < 1e-2


def test_spectral_gap_decreases_with_modes():
    green = greens(3, 0.1)
    dom, grid = dom_grid(3, 0.1)
    gaps = []
    for J in (2, 4, 8):
        res = torsion.torsion_spectral(dom, J, grid)
        gaps.append(abs(res.max_value - green.max_value))
    assert gaps[0] > gaps[1] > gaps[2]


def test_spectral_tail_estimate_bounds_gap():
    green = greens(3, 0.1)
    dom, grid = dom_grid(3, 0.1)
    for J in (2, 4, 8):
        res = torsion.torsion_spectral(dom, J, grid)
        gap = abs(res.max_value - green.max_value)
        assert res.tail_estimate > 0.0
        assert gap <= 1.5 * res.tail_estimate, (J, gap, res.tail_estimate)


def test_spectral_validation():
    dom, grid = dom_grid(3, 0.1)
    for bad in (0, -2, 2.5):
        with pytest.raises(ValidationError):
            torsion.torsion_spectral(dom, bad, grid)


# -------------------------------------------------------------- sharpness


def test_sharpness_gap_positive_and_shrinking():
    prods = []
    for eps in (0.3, 0.1, 0.05):
        dom, grid = dom_grid(3, eps)
        d = torsion.sharpness_gap(dom, grid)
        assert d > 0.0
        from capspec.eigen import find_eigenvalue

        prods.append(d * find_eigenvalue(dom, 1, grid).lam)
    assert prods[0] > prods[1] > prods[2]
    assert 0.0 < prods[2] < 0.1
