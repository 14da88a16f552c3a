"""Command-line front end: single computations and reproducible eps-sweeps.

Output is machine-readable (CSV with LF endings or JSON), floats fixed at
12 significant digits so identical invocations diff byte-identically.
Subcommands: ``eigen``, ``torsion``, ``gelfand``, ``sweep`` and the
special-function probe ``specfun``.  Exit codes: 0 success, 2 usage or
validation, 3 solver failure, 4 sweep with every row failed.  The env var
``CAPSPEC_LOG`` (error/warn/info/debug) sets stderr diagnostics.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import cap, eigen, gelfand, specfun, torsion
from .errors import SolverError, ValidationError

log = logging.getLogger("capspec.cli")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

SWEEP_OUTPUTS = ("eigen", "torsion", "gelfand", "decay")


def _fmt(x) -> str:
    """Fixed 12-significant-digit float formatting (empty for missing)."""
    if x is None:
        return ""
    return f"{float(x):.12g}"


def _jnum(x):
    """JSON-safe float rounded to the same 12 digits the CSV shows."""
    return None if x is None else float(f"{float(x):.12g}")


def _setup_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("CAPSPEC_LOG", "warn").lower())
    if level is None:
        level = logging.WARNING
    root = logging.getLogger("capspec")
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(level)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: list[str], rows: list[list[str]], trailer: list[str] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in trailer:
        buf.write(line + "\n")
    return buf.getvalue()


def _domain_grid(args):
    dom = cap.make_domain(args.dim, args.eps)
    grid = cap.make_grid(dom, getattr(args, "grid", None))
    return dom, grid


# ---------------------------------------------------------------- eigen


def cmd_eigen(args) -> int:
    dom, grid = _domain_grid(args)
    rows = []
    for j in range(1, args.modes + 1):
        pair = eigen.find_eigenvalue(dom, j, grid)
        coef = eigen.fourier_coefficient(dom, pair)
        rows.append((j, pair.lam, pair.nu, pair.K, coef))
    if args.format == "json":
        doc = {
            "dim": dom.N,
            "eps": _jnum(dom.eps),
            "modes": [
                {
                    "j": j,
                    "lambda": _jnum(lam),
                    "nu": _jnum(nu),
                    "K": _jnum(K),
                    "fourier": _jnum(c),
                }
                for j, lam, nu, K, c in rows
            ],
        }
        _emit(json.dumps(doc) + "\n", args.out)
    else:
        _emit(
            _csv_text(
                ["j", "lambda", "nu", "K", "fourier"],
                [[str(j)] + [_fmt(v) for v in rest] for j, *rest in rows],
            ),
            args.out,
        )
    return 0


# --------------------------------------------------------------- torsion


def cmd_torsion(args) -> int:
    dom, grid = _domain_grid(args)
    if args.method == "closed":
        result = torsion.torsion_closed_form(dom, grid)
    elif args.method == "greens":
        result = torsion.torsion_greens(dom, grid)
    else:
        result = torsion.torsion_spectral(dom, args.modes, grid)
    lam1 = eigen.find_eigenvalue(dom, 1, grid).lam
    gap = result.max_value - 1.0 / lam1
    fields = {
        "dim": dom.N,
        "eps": dom.eps,
        "method": result.method,
        "w_max": result.max_value,
        "gap": gap,
        "residual": result.residual,
        "tail_estimate": result.tail_estimate,
    }
    if args.format == "json":
        doc = {k: (v if k in ("dim", "method") else _jnum(v)) for k, v in fields.items()}
        if args.profile:
            doc["profile"] = [
                {"theta": _jnum(t), "w": _jnum(v)}
                for t, v in zip(grid.nodes, result.w.values)
            ]
        _emit(json.dumps(doc) + "\n", args.out)
    elif args.profile:
        trailer_meta = [
            f"# {k}={_fmt(v) if not isinstance(v, str) else v}"
            for k, v in fields.items()
            if v is not None and k != "dim"
        ]
        text = "\n".join([f"# dim={dom.N}"] + trailer_meta) + "\n"
        text += _csv_text(
            ["theta", "w"],
            [[_fmt(t), _fmt(v)] for t, v in zip(grid.nodes, result.w.values)],
        )
        _emit(text, args.out)
    else:
        keys = list(fields)
        _emit(
            _csv_text(
                keys,
                [[
                    str(fields["dim"]),
                    _fmt(fields["eps"]),
                    fields["method"],
                    _fmt(fields["w_max"]),
                    _fmt(fields["gap"]),
                    _fmt(fields["residual"]),
                    _fmt(fields["tail_estimate"]),
                ]],
            ),
            args.out,
        )
    return 0


# --------------------------------------------------------------- gelfand


def cmd_gelfand(args) -> int:
    dom, grid = _domain_grid(args)
    nl = gelfand.nonlinearity_stats(args.f)
    est = gelfand.lambda_star_bracket(dom, grid, nl, args.tol)
    ratio = nl.a_star * est.midpoint / est.lambda1
    fields = {
        "dim": dom.N,
        "eps": dom.eps,
        "f": nl.kind if nl.p is None else f"{nl.kind}:{_fmt(nl.p)}",
        "a_star": nl.a_star,
        "s_star": nl.s_star,
        "lambda1": est.lambda1,
        "w_max": est.w_max,
        "lower_analytic": est.lower_analytic,
        "bracket_lo": est.bracket_lo,
        "bracket_hi": est.bracket_hi,
        "upper_analytic": est.upper_analytic,
        "theorem_ratio": ratio,
        "stalled": len(est.stalled),
    }
    if args.format == "json":
        doc = {
            k: (v if k in ("dim", "f", "stalled") else _jnum(v))
            for k, v in fields.items()
        }
        _emit(json.dumps(doc) + "\n", args.out)
    else:
        row = [
            str(fields["dim"]),
            _fmt(fields["eps"]),
            fields["f"],
            *[_fmt(fields[k]) for k in list(fields)[3:-1]],
            str(fields["stalled"]),
        ]
        _emit(_csv_text(list(fields), [row]), args.out)
    return 0


# --------------------------------------------------------------- specfun


def cmd_specfun(args) -> int:
    name = args.name
    vals = args.args
    try:
        need = {
            "gamma": 1,
            "digamma": 1,
            "hyp2f1": 4,
            "hypu": 4,
            "legendre": 3,
            "legendre-integral": 3,
        }[name]
    except KeyError:
        raise ValidationError(
            f"unknown function {name!r}; choose from gamma, digamma, hyp2f1, "
            "hypu, legendre, legendre-integral"
        )
    if len(vals) != need:
        raise ValidationError(f"{name} takes {need} arguments, got {len(vals)}")
    if name == "gamma":
        out = specfun.gamma(vals[0]).value
    elif name == "digamma":
        out = specfun.digamma(vals[0])
    elif name == "hyp2f1":
        out = specfun.hyp2f1(*vals)
    elif name == "hypu":
        out = specfun.hypU(vals[0], vals[1], int(vals[2]), vals[3])
    elif name == "legendre":
        out = specfun.legendre_p(*vals)
    else:
        out = specfun.legendre_definite_integral(*vals)
    _emit(_fmt(out) + "\n", args.out)
    return 0


# ----------------------------------------------------------------- sweep


def _sweep_columns(outputs: tuple[str, ...], modes: int) -> list[str]:
    cols = ["eps", "status"]
    if set(outputs) & {"eigen", "torsion", "gelfand", "decay"}:
        cols.append("lambda1")
    if "torsion" in outputs:
        cols += ["w_max", "gap"]
    if "gelfand" in outputs:
        cols += ["lambda_star_lo", "lambda_star_hi", "theorem_ratio"]
    if set(outputs) & {"eigen", "decay"}:
        for j in range(1, modes + 1):
            cols += [f"lambda_{j}", f"fourier_{j}"]
    return cols


def _sweep_cell(task):
    """One sweep row; top-level so process pools can pickle it."""
    N, eps, outputs, modes, f_spec, tol, n_nodes = task
    row = {"eps": eps, "status": "ok"}
    try:
        dom = cap.make_domain(N, eps)
        grid = cap.make_grid(dom, n_nodes)
        pairs = {}
        if set(outputs) & {"eigen", "torsion", "gelfand", "decay"}:
            pairs[1] = eigen.find_eigenvalue(dom, 1, grid)
            row["lambda1"] = pairs[1].lam
        if "torsion" in outputs:
            res = torsion.torsion_greens(dom, grid)
            row["w_max"] = res.max_value
            row["gap"] = res.max_value - 1.0 / pairs[1].lam
        if "gelfand" in outputs:
            nl = gelfand.nonlinearity_stats(f_spec)
            est = gelfand.lambda_star_bracket(dom, grid, nl, tol)
            row["lambda_star_lo"] = est.bracket_lo
            row["lambda_star_hi"] = est.bracket_hi
            row["theorem_ratio"] = nl.a_star * est.midpoint / est.lambda1
        if set(outputs) & {"eigen", "decay"}:
            for j in range(1, modes + 1):
                pair = pairs.get(j) or eigen.find_eigenvalue(dom, j, grid)
                row[f"lambda_{j}"] = pair.lam
                row[f"fourier_{j}"] = eigen.fourier_coefficient(dom, pair)
    except SolverError as exc:
        log.warning("sweep row eps=%g failed: %s", eps, exc)
        row = {"eps": eps, "status": f"error:{type(exc).__name__}"}
    return row


def _parse_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{ln}: expected key=value, got {raw!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


_SWEEP_DEFAULTS = {
    "modes": 1, "outputs": "eigen", "f": "exp", "tol": 0.01,
    "jobs": 0, "format": "csv",
}
_SWEEP_INT_KEYS = ("dim", "modes", "jobs", "grid")


def _apply_config(args) -> None:
    """Fill sweep settings the command line left unset (flags win)."""
    cfg = _parse_config(args.config)
    allowed = {"dim", "eps", "modes", "outputs", "f", "tol", "format", "jobs",
               "grid", "out"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for key, val in cfg.items():
        if getattr(args, key) is None:
            try:
                if key in _SWEEP_INT_KEYS:
                    setattr(args, key, int(val))
                elif key == "tol":
                    setattr(args, key, float(val))
                else:
                    setattr(args, key, val)
            except ValueError as exc:
                raise ValidationError(f"bad config value {key}={val!r}: {exc}") from None


def cmd_sweep(args) -> int:
    if args.config:
        _apply_config(args)
    for key, val in _SWEEP_DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, val)
    if args.format not in ("csv", "json"):
        raise ValidationError(f"format must be csv or json, got {args.format!r}")
    if args.dim is None or args.eps is None:
        raise ValidationError("sweep requires --dim and --eps (flags or config)")
    try:
        eps_values = [float(tok) for tok in args.eps.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad --eps list {args.eps!r}: {exc}") from None
    if not eps_values or any(not 0.0 < e < 1.0 for e in eps_values):
        raise ValidationError("sweep eps values must lie in (0, 1)")
    if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
        raise ValidationError("sweep eps values must be strictly decreasing")
    outputs = tuple(tok.strip() for tok in args.outputs.split(",") if tok.strip())
    bad = set(outputs) - set(SWEEP_OUTPUTS)
    if not outputs or bad:
        raise ValidationError(
            f"outputs must be a non-empty subset of {SWEEP_OUTPUTS}, got {args.outputs!r}"
        )
    if not 1 <= args.modes <= 12:
        raise ValidationError(f"mode count must lie in 1..12, got {args.modes}")
    modes = args.modes
    if "decay" in outputs:
        modes = max(modes, 2)
        if len(eps_values) < 3:
            raise ValidationError("decay fits need at least 3 eps values")

    tasks = [
        (args.dim, e, outputs, modes, args.f, args.tol, args.grid)
        for e in eps_values
    ]
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    jobs = min(jobs, len(tasks))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]

    summary = {}
    if "decay" in outputs:
        for j in range(2, modes + 1):
            summary[f"decay_slope_{j}"] = eigen.decay_exponent_estimate(
                args.dim, j, eps_values
            )

    cols = _sweep_columns(outputs, modes)
    if args.format == "json":
        lines = []
        for row in rows:
            doc = {c: (_jnum(row.get(c)) if c not in ("status",) else row[c])
                   for c in cols}
            lines.append(json.dumps(doc))
        if summary:
            lines.append(json.dumps({"summary": {k: _jnum(v) for k, v in summary.items()}}))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        body = [
            [row.get("status", "") if c == "status" else _fmt(row.get(c)) for c in cols]
            for row in rows
        ]
        trailer = [f"# {k}={_fmt(v)}" for k, v in summary.items()]
        _emit(_csv_text(cols, body, trailer), args.out)
    return 4 if all(r["status"] != "ok" for r in rows) else 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capspec",
        description="Cap eigenvalues, torsion profiles, and the extremal "
        "branch of the cap Gelfand problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modes_default):
        p.add_argument("--dim", type=int, required=True, help="sphere dimension N >= 2")
        p.add_argument("--eps", type=float, required=True,
                       help="cap aperture parameter in (0, 1)")
        p.add_argument("--modes", type=int, default=modes_default,
                       help="number of radial modes")
        p.add_argument("--grid", type=int, default=None,
                       help="target number of radial quadrature nodes")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write output to FILE")

    p_eigen = sub.add_parser("eigen", help="Dirichlet eigenvalues and mode data")
    common(p_eigen, 1)

    p_tor = sub.add_parser("torsion", help="torsion profile, pole value, and gap")
    common(p_tor, 8)
    p_tor.add_argument("--method", choices=("closed", "greens", "spectral"),
                       default="greens")
    p_tor.add_argument("--profile", action="store_true",
                       help="emit the radial profile (theta, w)")

    p_gel = sub.add_parser("gelfand", help="extremal-parameter bracket")
    common(p_gel, 1)
    p_gel.add_argument("--f", default="exp",
                       help="nonlinearity: 'exp' or 'power:P'")
    p_gel.add_argument("--tol", type=float, default=0.01,
                       help="relative bracket tolerance")

    p_fun = sub.add_parser("specfun", help="evaluate one special function")
    p_fun.add_argument("name", help="gamma | digamma | hyp2f1 | hypu | "
                       "legendre | legendre-integral")
    p_fun.add_argument("args", nargs="*", type=float)
    p_fun.add_argument("--out", default=None)

    p_sweep = sub.add_parser("sweep", help="eps-sweep to CSV or JSON lines")
    p_sweep.add_argument("--dim", type=int, default=None)
    p_sweep.add_argument("--eps", default=None,
                         help="comma list, strictly decreasing, in (0,1)")
    p_sweep.add_argument("--modes", type=int, default=None)
    p_sweep.add_argument("--outputs", default=None,
                         help="comma subset of eigen,torsion,gelfand,decay")
    p_sweep.add_argument("--f", default=None)
    p_sweep.add_argument("--tol", type=float, default=None)
    p_sweep.add_argument("--grid", type=int, default=None)
    p_sweep.add_argument("--jobs", type=int, default=None,
                         help="parallel workers (default: all cores)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default=None)
    p_sweep.add_argument("--config", default=None,
                         help="key=value file; explicit flags override it")
    p_sweep.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eigen":
            return cmd_eigen(args)
        if args.command == "torsion":
            return cmd_torsion(args)
        if args.command == "gelfand":
            return cmd_gelfand(args)
        if args.command == "specfun":
            return cmd_specfun(args)
        return cmd_sweep(args)
    except ValidationError as exc:
        print(f"capspec: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"capspec: {exc}", file=sys.stderr)
        return 3


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()
