"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 disconnected graph, 4 value out of range,
5 non-finite state, 6 two synchronous states found in one certified cell.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .certificate import bounds_curve, certify, gamma_bar, scan_slice
from .dynamics import ModelParams, default_step, integrate
from .errors import GraphParseError, InvalidGraph, InvalidRange, KSError, NonFiniteState, NotConnected
from .io import load_graph, parse_vector_text, write_csv, write_json
from .seminorm import build_projector
from .sync import uniqueness_check
from .torus import ccw_diff, splay_state, winding_vectors_from_diffs

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_RANGE = 4
EXIT_NONFINITE = 5
EXIT_UNIQUENESS = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _vector(spec: str, n: int, what: str) -> np.ndarray:
    """Inline list, ``@file``, ``zero``, ``const:<v>``, or ``splay:<k>``."""
    spec = spec.strip()
    if spec == "zero":
        return np.zeros(n)
    if spec.startswith("const:"):
        return np.full(n, float(spec[6:]))
    if spec.startswith("splay:"):
        return splay_state(n, int(spec[6:]))
    try:
        if spec.startswith("@"):
            with open(spec[1:], encoding="utf-8") as fh:
                vec = parse_vector_text(fh.read())
        else:
            vec = parse_vector_text(spec)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {what}: {exc}") from exc
    if vec.shape != (n,):
        raise UsageError(f"{what} has {vec.shape[0]} entries, graph has {n} vertices")
    return vec


def _angle(value, degrees: bool):
    if value is None:
        return None
    return math.radians(value) if degrees else float(value)


def _invocation(argv) -> str:
    return f"kscontract {__version__}: kscontract " + " ".join(argv)


def cmd_graph_info(args, argv) -> int:
    g = load_graph(args.graph)
    write_json(
        args.out,
        {"n": g.n, "m": g.m, "lambda2": g.lambda2, "d_max": g.d_max, "cycle_count": g.basis.c},
    )
    return EXIT_OK


def cmd_certify(args, argv) -> int:
    g = load_graph(args.graph)
    phi = _angle(args.phi, args.degrees)
    gamma = _angle(args.gamma, args.degrees)
    report = certify(g, phi, gamma)
    write_json(args.out, report.to_dict())
    return EXIT_OK


def _dirs(spec: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    if spec.startswith("@"):
        import json

        try:
            with open(spec[1:], encoding="utf-8") as fh:
                vecs = np.asarray(json.load(fh), dtype=np.float64)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read directions: {exc}") from exc
        if vecs.shape != (2, n):
            raise UsageError(f"direction file must hold a 2 x {n} array")
        return vecs[0], vecs[1]
    parts = [t.strip() for t in spec.split(",")]
    if len(parts) != 2 or not all(t.startswith("e") for t in parts):
        raise UsageError(f"--dirs expects 'e<i>,e<j>' or '@file', got {spec!r}")
    out = []
    for t in parts:
        try:
            k = int(t[1:])
        except ValueError as exc:
            raise UsageError(f"bad unit direction {t!r}") from exc
        if not 0 <= k < n:
            raise UsageError(f"unit direction {t} out of range for n = {n}")
        v = np.zeros(n)
        v[k] = 1.0
        out.append(v)
    return out[0], out[1]


def cmd_scan(args, argv) -> int:
    g = load_graph(args.graph)
    phi = _angle(args.phi, args.degrees)
    p = ModelParams(g, phi, _vector(args.omega, g.n, "omega"))
    origin = _vector(args.origin, g.n, "origin")
    d1, d2 = _dirs(args.dirs, g.n)
    rng = _floats(args.range)
    if len(rng) == 2:
        s_range = t_range = (rng[0], rng[1])
    elif len(rng) == 4:
        s_range, t_range = (rng[0], rng[1]), (rng[2], rng[3])
    else:
        raise UsageError("--range expects 'lo,hi' or 'slo,shi,tlo,thi'")
    grid = scan_slice(p, g.basis, origin, d1, d2, s_range, t_range, args.res, jobs=_jobs(args))
    header = ["s", "t", "mu"] + [f"q_{k}" for k in range(g.basis.c)] + ["cohesive_flag"]
    rows = []
    for a, s in enumerate(grid.s):
        for b, t in enumerate(grid.t):
            rows.append([s, t, grid.mu[a, b], *grid.windings[a, b].tolist(), bool(grid.cohesive[a, b])])
    write_csv(args.out, header, rows, _invocation(argv) + f" | gamma_bar={grid.gamma!r}")
    return EXIT_OK


def cmd_bounds(args, argv) -> int:
    ratios = _floats(args.ratios)
    phi_min = _angle(args.phi_min, args.degrees)
    phi_max = _angle(args.phi_max, args.degrees)
    if args.steps < 1:
        raise InvalidRange("--steps must be positive")
    if not (0.0 < phi_min <= phi_max <= math.pi / 2):
        raise InvalidRange("need 0 < phi_min <= phi_max <= pi/2")
    table = bounds_curve(ratios, np.linspace(phi_min, phi_max, args.steps))
    write_csv(args.out, ["ratio", "phi", "gamma_bar"], table.tolist(), _invocation(argv))
    return EXIT_OK


def cmd_simulate(args, argv) -> int:
    g = load_graph(args.graph)
    phi = _angle(args.phi, args.degrees)
    p = ModelParams(g, phi, _vector(args.omega, g.n, "omega"))
    x0 = _vector(args.x0, g.n, "x0")
    dt = args.dt if args.dt is not None else default_step(g)
    traj = integrate(p, x0, dt, args.t)
    header = ["t"] + [f"x_{i}" for i in range(g.n)]
    cols = [traj.times[:, None], traj.states]
    if args.track_winding:
        basis = g.basis
        d = ccw_diff(traj.states[:, g.src] - traj.states[:, g.dst], 0.0)
        header += [f"q_{k}" for k in range(basis.c)]
        cols.append(winding_vectors_from_diffs(basis, d))
    if args.pair_x0 is not None:
        y0 = _vector(args.pair_x0, g.n, "pair-x0")
        other = integrate(p, y0, dt, args.t)
        R = build_projector(g.n).R
        header.append("dist")
        cols.append(np.linalg.norm((traj.states - other.states) @ R.T, axis=1)[:, None])
    rows = []
    for k in range(len(traj)):
        row = []
        for blk in cols:
            row.extend(blk[k].tolist())
        rows.append(row)
    # winding columns are integers; keep them integral in the output
    nint = g.basis.c if args.track_winding else 0
    if nint:
        lo = 1 + g.n
        rows = [r[:lo] + [int(v) for v in r[lo : lo + nint]] + r[lo + nint :] for r in rows]
    write_csv(args.out, header, rows, _invocation(argv))
    return EXIT_OK


def cmd_sync(args, argv) -> int:
    g = load_graph(args.graph)
    phi = _angle(args.phi, args.degrees)
    p = ModelParams(g, phi, _vector(args.omega, g.n, "omega"))
    basis = g.basis
    if args.u is None or args.u.strip() == "":
        u = np.zeros(basis.c, dtype=np.int64)
    else:
        try:
            u = np.array([int(t) for t in args.u.split(",")], dtype=np.int64)
        except ValueError as exc:
            raise UsageError(f"--u expects comma-separated integers, got {args.u!r}") from exc
        if u.shape[0] != basis.c:
            raise UsageError(f"--u has {u.shape[0]} entries, graph has {basis.c} basis cycles")
    gamma = _angle(args.gamma, args.degrees)
    if gamma is None:
        gamma = 0.9 * gamma_bar(g, phi)
    report = uniqueness_check(p, basis, u, gamma, args.starts, args.seed, jobs=_jobs(args))
    write_json(args.out, report.to_dict())
    return EXIT_UNIQUENESS if report.violation else EXIT_OK


def _jobs(args) -> int:
    return args.jobs if args.jobs else (os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kscontract", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"kscontract {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("graph", help="graph file (JSON or CSV edge list)")
        sp.add_argument("--out", default="-", help="output path, '-' for stdout")
        sp.add_argument("--degrees", action="store_true", help="angle flags are in degrees")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("graph-info", help="spectral and structural summary")
    common(sp)
    sp.set_defaults(func=cmd_graph_info)

    sp = sub.add_parser("certify", help="semicontraction certificate")
    common(sp)
    sp.add_argument("--phi", type=float, required=True)
    sp.add_argument("--gamma", type=float, default=None, help="default 0.9 * gamma_bar")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("scan", help="log-seminorm on a 2-D slice (CSV)")
    common(sp)
    sp.add_argument("--phi", type=float, required=True)
    sp.add_argument("--omega", default="zero")
    sp.add_argument("--origin", default="zero")
    sp.add_argument("--dirs", default="e0,e1")
    sp.add_argument("--range", default=f"0,{2 * math.pi!r}")
    sp.add_argument("--res", type=int, default=100)
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("bounds", help="gamma_bar against phi for several lambda2/d_max ratios (CSV)")
    common(sp, graph=False)
    sp.add_argument("--ratios", default="0.1,0.5,1")
    sp.add_argument("--phi-min", type=float, default=math.pi / 200)
    sp.add_argument("--phi-max", type=float, default=math.pi / 2)
    sp.add_argument("--steps", type=int, default=100)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("simulate", help="RK4 trajectory (CSV)")
    common(sp)
    sp.add_argument("--phi", type=float, required=True)
    sp.add_argument("--omega", default="zero")
    sp.add_argument("--x0", default="zero")
    sp.add_argument("--pair-x0", default=None, help="second start; adds the seminorm distance column")
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--track-winding", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sync", help="multistart synchronous-state search in one winding cell (JSON)")
    common(sp)
    sp.add_argument("--phi", type=float, required=True)
    sp.add_argument("--omega", default="zero")
    sp.add_argument("--u", default=None, help="winding vector, comma separated")
    sp.add_argument("--gamma", type=float, default=None, help="default 0.9 * gamma_bar")
    sp.add_argument("--starts", type=int, default=50)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sync)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, argv)
    except UsageError as exc:
        print(f"kscontract: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphParseError as exc:
        print(f"kscontract: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotConnected as exc:
        print(f"kscontract: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except InvalidGraph as exc:
        print(f"kscontract: invalid graph: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonFiniteState as exc:
        print(f"kscontract: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except InvalidRange as exc:
        print(f"kscontract: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except KSError as exc:
        print(f"kscontract: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
