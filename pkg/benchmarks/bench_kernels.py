"""Compare the numba and numpy kernel backends.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 10 50 200 --json results.json
"""
import argparse
import json
import timeit

import numpy as np

from kscontract.graph import random_connected_graph
from kscontract.kernels import backend_module


def _setup(n, batch, rng):
    g = random_connected_graph(n, min(1.0, 6.0 / n), rng)
    omega = rng.normal(scale=0.2, size=n)
    phi = 0.3
    X = rng.uniform(-np.pi, np.pi, size=(batch, n))
    D = X[:, g.src] - X[:, g.dst]
    w = g.weights
    return g, omega, phi, w, X, D


def _parts(out):
    return out if isinstance(out, tuple) else (out,)


def _best(fn, number):
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def run(sizes, batch, steps, seed):
    rng = np.random.default_rng(seed)
    try:
        nb = backend_module("numba")
    except ImportError:
        nb = None
    npk = backend_module("numpy")
    rows = []
    for n in sizes:
        g, omega, phi, w, X, D = _setup(n, batch, rng)
        c, s = w * np.cos(phi), w * np.sin(phi)
        cases = {
            "field": lambda k: k.field(omega, g.src, g.dst, w, phi, D[0]),
            "field_batch": lambda k: k.field_batch(omega, g.src, g.dst, w, phi, D),
            "jacobian_batch": lambda k: k.jacobian_parts_batch(n, g.src, g.dst, c, s, D),
            "rk4": lambda k: k.rk4(omega, g.src, g.dst, w, phi, X[0], 1e-3, steps),
        }
        for name, call in cases.items():
            ref = call(npk)
            t_np = _best(lambda: call(npk), 3)
            row = {"kernel": name, "n": n, "m": g.m, "numpy_s": t_np, "numba_s": None, "speedup": None}
            if nb is not None:
                got = call(nb)  # first call compiles or loads the cache
                for a, b in zip(_parts(ref), _parts(got)):
                    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)
                t_nb = _best(lambda: call(nb), 3)
                row.update(numba_s=t_nb, speedup=t_np / t_nb)
            rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 200])
    ap.add_argument("--batch", type=int, default=1000, help="states per batched call")
    ap.add_argument("--steps", type=int, default=2000, help="RK4 steps")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args()

    rows = run(args.sizes, args.batch, args.steps, args.seed)
    print(f"{'kernel':<16}{'n':>6}{'m':>7}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for r in rows:
        nb = f"{1e3 * r['numba_s']:13.3f}" if r["numba_s"] is not None else f"{'n/a':>13}"
        sp = f"{r['speedup']:9.1f}" if r["speedup"] is not None else f"{'n/a':>9}"
        print(f"{r['kernel']:<16}{r['n']:>6}{r['m']:>7}{1e3 * r['numpy_s']:13.3f}{nb}{sp}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
