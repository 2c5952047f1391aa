"""Command-line interface: generate, solve, validate, compare, benchmark.

Instance files are plain text, one point per line as two decimals
separated by whitespace; ``#`` starts a comment line.  Results are CSV
(``index,dist,pred`` with ``inf`` and empty pred for unreachable
vertices) or JSON (the same fields plus a metadata header).  All numbers
are written with round-trip precision, and every command is
deterministic given its seed.
"""
from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
import time

import numpy as np

from . import __version__
from .approx import sssp_approx
from .exact import sssp_exact
from .geom import PointSet, normalize_points
from .oracle import build_explicit_graph, dijkstra_baseline, validate
from .result import NO_PRED, SsspResult


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    if v == int(v) and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def read_instance(path) -> np.ndarray:
    pts = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{ln}: expected two numbers, got {body!r}")
            pts.append((float(parts[0]), float(parts[1])))
    if not pts:
        raise ValueError(f"{path}: no points found")
    return np.asarray(pts, dtype=np.float64)


def write_instance(pts: np.ndarray, fh):
    fh.write("# x y\n")
    for x, y in pts:
        fh.write(f"{_fmt(float(x))} {_fmt(float(y))}\n")


def write_result(res: SsspResult, fh, fmt: str, meta: dict):
    if fmt == "csv":
        fh.write("index,dist,pred\n")
        for i in range(res.dist.shape[0]):
            p = "" if res.pred[i] == NO_PRED else str(int(res.pred[i]))
            fh.write(f"{i},{_fmt(float(res.dist[i]))},{p}\n")
        return
    vertices = []
    for i in range(res.dist.shape[0]):
        d = float(res.dist[i])
        vertices.append(
            {
                "index": i,
                "dist": "inf" if math.isinf(d) else d,
                "pred": None if res.pred[i] == NO_PRED else int(res.pred[i]),
            }
        )
    json.dump({"meta": meta, "vertices": vertices}, fh, indent=None)
    fh.write("\n")


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def generate_points(n: int, distribution: str, density: float, seed: int) -> np.ndarray:
    """Points in a square sized so the expected unit-disk degree ~ density."""
    rng = np.random.default_rng(seed)
    span = math.sqrt(n * math.pi / density)
    if distribution == "uniform":
        return rng.uniform(0.0, span, size=(n, 2))
    k = math.isqrt(n)
    if k * k < n:
        k += 1
    centers = rng.uniform(0.0, span, size=(k, 2))
    owner = rng.integers(0, k, size=n)
    return centers[owner] + rng.normal(0.0, 1.0, size=(n, 2))


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"value must be > 0, got {text}")
    return v


def _cmd_gen(args) -> int:
    pts = generate_points(args.n, args.distribution, args.density, args.seed)
    fh, close = _open_out(args.out)
    try:
        write_instance(pts, fh)
    finally:
        if close:
            fh.close()
    return 0


def _load(args) -> PointSet:
    pts = read_instance(args.file)
    if not 0 <= args.source < pts.shape[0]:
        raise ValueError(f"source {args.source} out of range for {pts.shape[0]} points")
    return PointSet(pts, args.source)


def _cmd_solve(args, mode: str) -> int:
    ps = _load(args)
    if mode == "exact":
        res = sssp_exact(ps)
    elif mode == "approx":
        res = sssp_approx(ps, args.eps)
    else:
        res = dijkstra_baseline(build_explicit_graph(ps), ps.source)
    meta = {
        "mode": mode,
        "eps": getattr(args, "eps", None),
        "source": ps.source,
        "count": len(ps),
        "version": __version__,
    }
    fh, close = _open_out(args.out)
    try:
        write_result(res, fh, args.format, meta)
    finally:
        if close:
            fh.close()
    return 0


def _cmd_compare(args) -> int:
    ps = normalize_points(_load(args))  # one shared frame: identical topology
    reference = dijkstra_baseline(build_explicit_graph(ps), ps.source)
    exact = sssp_exact(ps)
    approx = sssp_approx(ps, args.eps)
    rep_exact = validate(exact, ps, reference=reference)
    rep_approx = validate(approx, ps, eps=args.eps, reference=reference)
    ok = rep_exact.ok and rep_approx.ok
    print(f"exact vs oracle: {rep_exact.summary()}")
    print(f"approx (eps={args.eps}) vs oracle: {rep_approx.summary()}")
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rows: list[str] = ["kind,n,rep,seconds,ratio"]
    medians: list[tuple[int, float]] = []
    for n in sizes:
        pts = generate_points(n, "uniform", args.density, args.seed + n)
        ps = PointSet(pts, 0)
        times = []
        for rep in range(args.reps):
            t0 = time.perf_counter()
            if args.mode == "exact":
                sssp_exact(ps)
            else:
                sssp_approx(ps, args.eps)
            dt = time.perf_counter() - t0
            times.append(dt)
            rows.append(f"run,{n},{rep},{dt!r},")
        med = statistics.median(times)
        ratio = ""
        if medians and n == 2 * medians[-1][0]:
            ratio = repr(med / medians[-1][1])
        medians.append((n, med))
        rows.append(f"summary,{n},,{med!r},{ratio}")
    fh, close = _open_out(args.out)
    try:
        fh.write("\n".join(rows) + "\n")
    finally:
        if close:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diskpath",
        description="Single-source shortest paths in weighted unit-disk graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, with_format=True):
        p.add_argument("--source", type=int, default=0, help="source index (default 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if with_format:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--distribution", choices=("uniform", "clusters"), default="uniform")
    g.add_argument("--density", type=_positive_float, default=10.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=_cmd_gen)

    se = sub.add_parser("solve-exact", help="run the exact solver")
    se.add_argument("file")
    io_flags(se)
    se.set_defaults(fn=lambda a: _cmd_solve(a, "exact"))

    sa = sub.add_parser("solve-approx", help="run the (1+eps)-approximate solver")
    sa.add_argument("file")
    sa.add_argument("--eps", type=_positive_float, required=True)
    io_flags(sa)
    sa.set_defaults(fn=lambda a: _cmd_solve(a, "approx"))

    orc = sub.add_parser("oracle", help="run the reference Dijkstra")
    orc.add_argument("file")
    io_flags(orc)
    orc.set_defaults(fn=lambda a: _cmd_solve(a, "oracle"))

    cp = sub.add_parser("compare", help="cross-check both solvers against the oracle")
    cp.add_argument("file")
    cp.add_argument("--eps", type=_positive_float, default=0.1)
    cp.add_argument("--source", type=int, default=0)
    cp.set_defaults(fn=_cmd_compare)

    be = sub.add_parser("bench", help="timed runs over increasing sizes")
    be.add_argument("--sizes", required=True, help="comma-separated ascending sizes")
    be.add_argument("--reps", type=int, default=3)
    be.add_argument("--mode", choices=("exact", "approx"), default="exact")
    be.add_argument("--eps", type=_positive_float, default=0.1)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--density", type=_positive_float, default=10.0)
    be.add_argument("--out", default=None)
    be.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
