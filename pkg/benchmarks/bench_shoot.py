"""Time the radial shooting kernel: compiled extension vs pure-Python twin.

Runs the same batch of eigenvalue shots through both backends and reports
per-shot times and the speedup.  Typical desk numbers: the compiled kernel
clears a shot in tens of microseconds, roughly 25-30x the Python twin.

    python3 benchmarks/bench_shoot.py --dim 3 --eps 0.1 --shots 200
"""

import argparse
import importlib
import time

from capspec.cap import make_domain


def load_backends():
    backends = {}
    try:
        backends["compiled"] = importlib.import_module("capspec._kernel._shootrk")
    except ImportError:
        pass
    backends["python"] = importlib.import_module("capspec._kernel.pyshoot")
    return backends


def run(mod, dom, lams, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        acc = 0.0
        for lam in lams:
            end, _, _, _, _ = mod.integrate_radial(dom.N, lam, dom.theta_max)
            acc += end
        best = min(best, time.perf_counter() - t0)
    return best, acc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--shots", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    dom = make_domain(args.dim, args.eps)
    lam1 = args.dim  # hemisphere scale; shots scan a band around it
    lams = [lam1 * (0.25 + 2.0 * k / args.shots) for k in range(args.shots)]

    results = {}
    checks = {}
    for name, mod in load_backends().items():
        secs, acc = run(mod, dom, lams, args.repeats)
        results[name] = secs
        checks[name] = acc
        print(f"{name:>9}: {secs * 1e3:8.2f} ms total, "
              f"{secs / args.shots * 1e6:8.2f} us/shot")
    if "compiled" in results:
        drift = abs(checks["compiled"] - checks["python"])
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x  "
              f"(endpoint-sum drift {drift:.2e})")
    else:
        print("  compiled kernel not built; python twin only")


if __name__ == "__main__":
    main()
