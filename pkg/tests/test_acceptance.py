"""Acceptance gate: eleven numbered end-to-end checks at pinned tolerances.

Each test prints one ``[criterion NN] PASS/FAIL`` line (visible with ``-s``;
the test verdict itself carries the same information) and asserts the
documented tolerance.  Criterion 06 encodes its stated target constants
verbatim; the assertion message carries the measured evidence.
"""

import math

import numpy as np
import pytest

from helpers import dom_grid, eigen_pair, fourier, greens
from capspec import cap, cli, eigen, gelfand, specfun, torsion


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} — {detail}")


def test_criterion_01_hemisphere_ground_eigenvalue():
    worst = 0.0
    for N in range(2, 7):
        pair = eigen_pair(N, 0.5, 1)
        worst = max(worst, abs(pair.lam - N))
    ok = worst <= 1e-6
    _report(1, ok, f"max |lambda_1 - N| over N=2..6 at eps=0.5: {worst:.3e} (tol 1e-6)")
    assert ok


def test_criterion_02_n3_spectrum_closed_form():
    worst = 0.0
    for eps in (0.3, 0.1, 0.05):
        for j in range(1, 6):
            want = j * j / (1.0 - eps) ** 2 - 1.0
            got = eigen_pair(3, eps, j).lam
            worst = max(worst, abs(got - want) / want)
    ok = worst <= 1e-8
    _report(2, ok, f"max rel error, j=1..5, eps in {{0.3,0.1,0.05}}: {worst:.3e} (tol 1e-8)")
    assert ok


def test_criterion_03_torsion_routes_agree():
    worst_rel = 0.0
    for N in (2, 3):
        for eps in (0.5, 0.2, 0.1, 0.05):
            dom, grid = dom_grid(N, eps)
            closed = torsion.torsion_closed_form(dom, grid)
            green = greens(N, eps)
            for th in np.linspace(0.01, 0.99, 50) * dom.theta_max:
                a, b = green.evaluate(float(th)), closed.evaluate(float(th))
                worst_rel = max(worst_rel, abs(a - b) / abs(b))
    dom5, grid5 = dom_grid(3, 0.05)
    spec8 = torsion.torsion_spectral(dom5, 8, grid5)
    gap = abs(spec8.max_value - greens(3, 0.05).max_value)
    ok = worst_rel <= 1e-8 and gap <= 1e-3
    _report(
        3,
        ok,
        f"greens vs closed max rel {worst_rel:.3e} (tol 1e-8); "
        f"spectral J=8 pole gap {gap:.3e} (tol 1e-3)",
    )
    assert ok


def test_criterion_04_torsion_max_tracks_inverse_lambda1():
    prods = []
    ok = True
    for eps in (0.2, 0.1, 0.05, 0.02):
        dom, grid = dom_grid(3, eps)
        d = greens(3, eps).max_value - 1.0 / eigen_pair(3, eps, 1).lam
        ok = ok and 0.0 < d <= 2.0
        prods.append(d * eigen_pair(3, eps, 1).lam)
    ok = ok and all(a > b for a, b in zip(prods, prods[1:]))
    d2_list = []
    for eps in (0.2, 0.1, 0.05, 0.02):
        d2 = greens(2, eps).max_value - 1.0 / eigen_pair(2, eps, 1).lam
        ok = ok and 0.0 < d2 <= 2.0
        d2_list.append(d2)
    # the sharp N=2 statement is for the torsion maximum itself; its
    # relation to 1/lambda1 is only O(1), covered by the gap bound above
    w0 = greens(2, 0.01).max_value
    law = 2.0 * math.log(2.0 / (math.pi * 0.01))
    rel = abs(w0 / law - 1.0)
    ok = ok and rel <= 0.10
    _report(
        4,
        ok,
        f"N=3 d*lambda1 sweep {['%.4f' % p for p in prods]} decreasing; "
        f"N=2 gaps {['%.3f' % d for d in d2_list]} in (0,2]; "
        f"N=2 w(0) vs 2log(2/(pi eps)) rel {rel:.2e} (tol 0.10)",
    )
    assert ok


def test_criterion_05_lambda1_asymptotics():
    lam_n3 = eigen_pair(3, 0.01, 1).lam
    r3 = lam_n3 / (2.0 * 0.01)
    lam_n2 = eigen_pair(2, 0.01, 1).lam
    r2 = lam_n2 * 2.0 * math.log(2.0 / (math.pi * 0.01))
    trend = {}
    for N in (4, 5):
        r = [eigen_pair(N, e, 1).lam / e ** (N - 2) for e in (0.02, 0.01)]
        trend[N] = r[1] / r[0]
    ok = (
        0.9 <= r3 <= 1.1
        and 0.75 <= r2 <= 1.25
        and all(abs(t - 1.0) <= 0.15 for t in trend.values())
    )
    _report(
        5,
        ok,
        f"N=3 lambda1/(2 eps)={r3:.4f} in [0.9,1.1]; "
        f"N=2 lambda1*2log(2/(pi eps))={r2:.4f} in [0.75,1.25]; "
        f"N=4,5 scaled-ratio drift {trend[4]:.4f}/{trend[5]:.4f} (tol 15%)",
    )
    assert ok


def test_criterion_06_fourier_decay_rates():
    eps_set = (0.1, 0.05, 0.025)
    slopes = {
        (N, j): eigen.decay_exponent_estimate(N, j, eps_set)
        for N, j in ((3, 2), (3, 3), (4, 2), (5, 2))
    }
    slope_fail = {
        k: s for k, s in slopes.items() if abs(s - (k[0] - 2)) > 0.2
    }
    pref = abs(fourier(3, 0.01, 2)) / 0.01
    pref_target = 2.0 * math.sqrt(2.0) / 3.0
    pref_ok = abs(pref / pref_target - 1.0) <= 0.05
    ok = not slope_fail and pref_ok
    detail = (
        f"slopes {dict((k, round(s, 4)) for k, s in slopes.items())} vs N-2 "
        f"within +/-0.2; prefactor |(1,phi_2)|/eps={pref:.4f} vs "
        f"{pref_target:.4f} within 5%"
    )
    _report(6, ok, detail)
    assert ok, (
        f"{detail}. Failing subclauses: slopes {slope_fail} exceed the window "
        f"at eps={eps_set} (the finer sweep (0.05,0.025,0.0125) reaches "
        f"1.9175/2.9313 for N=4/5, inside the window, so the stated set sits "
        f"short of the asymptotic regime); prefactor measured {pref:.4f} "
        f"approaches 4*sqrt(2)*pi/3 = {4 * math.sqrt(2) * math.pi / 3:.4f}, "
        f"consistent with mode completeness on the nearly full sphere "
        f"(partial Parseval sum 26.24629 vs domain measure 26.27243), not "
        f"the encoded target {pref_target:.4f}"
    )


def test_criterion_07_ground_mode_flattens():
    worst = 0.0
    for N in (3, 4):
        pair = eigen_pair(N, 0.01, 1)
        root_measure = math.sqrt(cap.surface_area_sphere(N))
        sup = pair.phi.max_abs()
        coef = fourier(N, 0.01, 1)
        worst = max(
            worst,
            abs(sup * root_measure - 1.0),
            abs(coef / root_measure - 1.0),
            abs(coef * sup - 1.0),
        )
    ok = worst <= 0.03
    _report(7, ok, f"max deviation of sup/coefficient/product limits: {worst:.4f} (tol 3%)")
    assert ok


def test_criterion_08_branch_bounds_table():
    ok = True
    rows = 0
    for N in (2, 3):
        for eps in (0.5, 0.2, 0.1):
            for f in ("exp", "power:2"):
                dom, grid = dom_grid(N, eps)
                est = gelfand.lambda_star_bracket(dom, grid, f)
                inside = (
                    est.lower_analytic <= est.bracket_lo < est.bracket_hi
                    and est.bracket_hi <= est.upper_analytic * (1 + 1e-12)
                )
                nl = gelfand.nonlinearity_stats(f)
                sol = gelfand.minimal_solution(dom, grid, nl, est.lower_analytic)
                w = greens(N, eps).w.values
                w_max = greens(N, eps).max_value
                low = est.lower_analytic * nl.f0 * w
                high = nl.s_star / w_max * w
                sandwich = bool(
                    np.all(sol.u.values >= low - 1e-9)
                    and np.all(sol.u.values <= high + 1e-9)
                )
                ok = ok and inside and sol.converged and sol.monotone and sandwich
                rows += 1
    ok = ok and rows == 12
    _report(8, ok, f"{rows} (N, eps, f) rows: containment + sandwich + monotone iterates")
    assert ok


def test_criterion_09_extremal_parameter_ratio_trend():
    ratios = []
    for eps in (0.1, 0.05, 0.02):
        dom, _ = dom_grid(3, eps)
        ratios.append(gelfand.theorem_ratio(dom, "exp", tol=1e-3))
    ok = (
        ratios[0] < ratios[1] < ratios[2] <= 1.0 + 1e-3
        and ratios[2] > 0.85
    )
    _report(
        9, ok,
        "a_star*mid/lambda1 = "
        + ", ".join(f"{r:.6f}" for r in ratios)
        + " increasing toward 1 (floor 0.85)",
    )
    assert ok


def test_criterion_10_special_function_suite():
    worst_pole = max(
        abs(specfun.gamma_pole_limit(n, 1e-6) - (-1.0) ** (n + 1) / math.factorial(n))
        for n in range(6)
    )
    rng = np.random.default_rng(20260825)
    worst_rec = max(
        abs(specfun.digamma(x + 1.0) - specfun.digamma(x) - 1.0 / x)
        for x in rng.uniform(0.1, 20.0, size=60)
    )
    worst_conv = 0.0
    count = 0
    while count < 50:
        a, b = rng.uniform(-2.5, 2.5, size=2)
        c = rng.uniform(0.3, 3.5)
        x = rng.uniform(0.5, 0.7)
        if any(
            abs(v - round(v)) < 1e-3
            for v in (c, a + b + 1 - c, c + 1 - a - b, c - a - b)
        ):
            continue
        direct = specfun.hyp2f1(a, b, c, x)
        near = specfun.hyp2f1_near_one(a, b, c, x)
        worst_conv = max(worst_conv, abs(near - direct) / max(1.0, abs(direct)))
        count += 1
    worst_ode = 0.0
    offsets = 2e-3 * np.arange(-3.0, 4.0)
    for eps in (0.3, 0.1, 0.05):
        for j in range(1, 6):
            nu, mu = j / (1.0 - eps) - 0.5, -0.5
            for t0 in (0.2, -0.6):
                ts = t0 + offsets
                vals = np.array([specfun.legendre_p(nu, mu, t) for t in ts])
                cw = cap.derivative_weights(t0, ts, 2)
                p0, d1, d2 = cw[:, 0] @ vals, cw[:, 1] @ vals, cw[:, 2] @ vals
                res = (
                    (1 - t0 * t0) * d2
                    - 2 * t0 * d1
                    + (nu * (nu + 1) - mu * mu / (1 - t0 * t0)) * p0
                )
                worst_ode = max(worst_ode, abs(res))
    triples = [
        (2.5, 0.5, 3.0), (2.5, -0.5, 3.0), (1.72, 1.0, 3.5), (0.61, 0.0, 2.2),
        (3.33, 2.0, 4.1), (1.5, 0.5, 2.5), (2.5, 1.5, 3.6), (0.61, -1.0, 2.4),
        (4.2, 0.0, 1.7), (1.3, -1.5, 3.1), (2.8, 2.5, 4.2), (5.1, 1.0, 2.9),
        (0.4, 0.5, 1.9), (3.7, -2.0, 3.5), (1.9, 0.0, 3.8), (2.2, -0.5, 2.4),
        (2.0, 0.0, 2.0), (4.0, 0.0, 2.0), (1.5, -0.5, 2.5), (3.5, -0.5, 2.5),
    ]
    from scipy.integrate import quad

    worst_int = 0.0
    for nu, mu, alpha in triples:
        closed = specfun.legendre_definite_integral(nu, mu, alpha)
        num, _ = quad(
            lambda th: specfun.legendre_p(nu, mu, math.cos(th))
            * math.sin(th) ** (alpha - 1),
            1e-6,
            math.pi - 1e-6,
            limit=300,
        )
        worst_int = max(worst_int, abs(closed - num))
    ok = (
        worst_pole <= 1e-4
        and worst_rec <= 1e-10
        and worst_conv <= 1e-9
        and worst_ode <= 1e-5
        and worst_int <= 1e-6
    )
    _report(
        10,
        ok,
        f"pole limits {worst_pole:.2e} (1e-4); digamma recurrence {worst_rec:.2e} "
        f"(1e-10); connection vs series {worst_conv:.2e} (1e-9); Legendre ODE "
        f"residual {worst_ode:.2e} (1e-5); definite integral {worst_int:.2e} (1e-6)",
    )
    assert ok


def test_criterion_11_property_suite_headless(tmp_path):
    pairs = [eigen_pair(3, 0.1, j) for j in range(1, 5)]
    gram_ok = all(
        abs(cap.inner_product(pairs[a].phi, pairs[b].phi) - (1.0 if a == b else 0.0))
        < 1e-10
        for a in range(4)
        for b in range(4)
    )
    dom, _ = dom_grid(3, 0.1)
    sturm_ok = all(
        eigen.shoot(dom, 0.5 * (pairs[j - 1].lam + pairs[j].lam))[1] == j
        for j in range(1, 4)
    )
    lam_by_eps = [eigen_pair(3, e, 1).lam for e in (0.3, 0.2, 0.1)]
    monot_ok = lam_by_eps[0] > lam_by_eps[1] > lam_by_eps[2]
    argv = ["sweep", "--dim", "3", "--eps", "0.2,0.1", "--outputs", "eigen,torsion"]
    f1, f2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    cli_ok = (
        cli.main(argv + ["--out", str(f1)]) == 0
        and cli.main(argv + ["--out", str(f2), "--jobs", "2"]) == 0
        and f1.read_bytes() == f2.read_bytes()
    )
    ok = gram_ok and sturm_ok and monot_ok and cli_ok
    _report(
        11,
        ok,
        f"orthonormality {gram_ok}; Sturm counts {sturm_ok}; "
        f"lambda1 grows as the cap shrinks {monot_ok}; CLI byte-determinism {cli_ok}",
    )
    assert ok
