"""Command line entry point: solve bound sweeps and write CSV reports."""

from __future__ import annotations

import argparse
import sys

from .instances import MatrixFormatError, generate_instance, load_matrix
from .relaxation import BoundKind
from .spectral import (
    AsymmetricMatrixError,
    EigensolverError,
    NotPositiveDefiniteError,
)
from .sweep import RunConfig, run_sweep, write_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_SOLVER = 4

_SIZE_CHARS = set("0123456789n+-*/() ")


def _eval_size(expr: str, n: int) -> int:
    """Evaluate a subset-size expression such as '7' or 'n-1'."""
    expr = expr.strip()
    if not expr or not set(expr) <= _SIZE_CHARS:
        raise ValueError(f"cannot parse size expression {expr!r}")
    value = eval(expr, {"__builtins__": {}}, {"n": n})  # charset-restricted arithmetic
    if isinstance(value, float):
        if abs(value - round(value)) > 1e-9:
            raise ValueError(f"size expression {expr!r} is not an integer; use // for division")
        value = round(value)
    return int(value)


def _parse_s_spec(spec: str, n: int) -> tuple[int, ...]:
    spec = spec.strip()
    if ".." in spec:
        lo_expr, hi_expr = spec.split("..", 1)
        lo = _eval_size(lo_expr, n)
        hi = _eval_size(hi_expr, n)
        if lo > hi:
            raise ValueError(f"empty s range {spec!r}")
        return tuple(range(lo, hi + 1))
    return tuple(_eval_size(tok, n) for tok in spec.split(","))


def _parse_bounds(spec: str) -> tuple[BoundKind, ...]:
    kinds: list[BoundKind] = []
    for tok in spec.split(","):
        tok = tok.strip().lower()
        try:
            kind = BoundKind(tok)
        except ValueError as exc:
            names = ", ".join(k.value for k in BoundKind)
            raise ValueError(f"unknown bound {tok!r}; choose from {names}") from exc
        if kind not in kinds:
            kinds.append(kind)
    if not kinds:
        raise ValueError("no bounds requested")
    return tuple(kinds)


def _parse_generate(spec: str, default_seed: int) -> tuple[int, float, int]:
    parts = [tok.strip() for tok in spec.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError(f"--generate expects N,KAPPA[,SEED], got {spec!r}")
    n = int(parts[0])
    kappa = float(parts[1])
    seed = int(parts[2]) if len(parts) == 3 else default_seed
    return n, kappa, seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mesp-bounds",
        description=(
            "Certified upper bounds, improvement certificates, and variable fixing "
            "for maximum-entropy sampling on a positive definite covariance matrix."
        ),
    )
    source = parser.add_argument_group("instance source (pick one)")
    source.add_argument("--matrix", metavar="PATH", help="plain-text matrix file: first line n, then n rows")
    source.add_argument("--generate", metavar="N,KAPPA[,SEED]", help="synthetic instance with condition number KAPPA")
    parser.add_argument("--s", default="2..n-1", metavar="LIST|RANGE", help="subset sizes, e.g. '3,5' or '2..n-1' (default %(default)s)")
    parser.add_argument("--t", default="min", metavar="MODE", help="shift: 0, min, a number, or grid:M (default %(default)s)")
    parser.add_argument("--bounds", default="augfact,fact,ddfr", metavar="LIST", help="bounds to solve (default %(default)s)")
    parser.add_argument("--lb", default="auto", metavar="MODE", help="lower bound: auto, ls, bf, or a number (default %(default)s)")
    parser.add_argument("--fix", action="store_true", help="run variable fixing on shifted-envelope rows")
    parser.add_argument("--max-iters", type=int, default=2000, metavar="N", help="solver iteration cap (default %(default)s)")
    parser.add_argument("--tol", type=float, default=1e-6, metavar="X", help="solver gap tolerance in nats (default %(default)s)")
    parser.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    parser.add_argument("--plots", metavar="DIR", help="also render figures into this directory")
    parser.add_argument("--seed", type=int, default=0, metavar="N", help="generator seed when --generate omits one (default %(default)s)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if (args.matrix is None) == (args.generate is None):
        print("error: exactly one of --matrix and --generate is required", file=sys.stderr)
        return EXIT_CONFIG

    if args.matrix is not None:
        try:
            model = load_matrix(args.matrix)
        except (MatrixFormatError, OSError, AsymmetricMatrixError, NotPositiveDefiniteError, EigensolverError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        generate = None
    else:
        try:
            generate = _parse_generate(args.generate, args.seed)
            model = generate_instance(*generate)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG

    try:
        s_values = _parse_s_spec(args.s, model.dim)
        bounds = _parse_bounds(args.bounds)
        lb_mode, lb_value = _parse_lb(args.lb)
        if args.max_iters < 1:
            raise ValueError(f"--max-iters must be positive, got {args.max_iters}")
        if args.tol <= 0:
            raise ValueError(f"--tol must be positive, got {args.tol}")
        config = RunConfig(
            matrix_path=args.matrix,
            generate=generate,
            s_values=s_values,
            t_mode=args.t,
            bounds=bounds,
            max_iters=args.max_iters,
            tol=args.tol,
            lb_mode=lb_mode,
            lb_value=lb_value,
            fixing=args.fix,
            output_path=None,
        )
        rows = run_sweep(config, model=model)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.out is not None:
        write_csv(rows, args.out)
    else:
        write_csv(rows, sys.stdout)

    if args.plots is not None:
        from .figures import render_figures

        render_figures(rows, args.plots)

    if all(row.upper_bound is None for row in rows):
        print("error: every row failed to solve; see the error column", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _parse_lb(spec: str) -> tuple[str, float | None]:
    spec = spec.strip().lower()
    if spec in ("auto", "ls", "bf"):
        return spec, None
    try:
        return "value", float(spec)
    except ValueError as exc:
        raise ValueError(f"unknown lower-bound mode {spec!r}; use auto, ls, bf, or a number") from exc


if __name__ == "__main__":
    sys.exit(main())
