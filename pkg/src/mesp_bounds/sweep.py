"""Sweep driver: solve a grid of (s, t, bound) cells against one instance and
emit a delimited report."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from math import comb

import numpy as np

from .certificates import delta_lb, theta_lb
from .instances import generate_instance, load_matrix
from .primal import ENUMERATION_LIMIT, brute_force, fix_variables, local_search
from .relaxation import BoundKind, SolveOptions, solve_bound
from .spectral import SHIFT_SLACK, CovarianceModel

CSV_VERSION = "# mesp-bounds v1"

COLUMNS = (
    "n",
    "s",
    "t",
    "bound_kind",
    "upper_bound",
    "lower_bound",
    "gap",
    "fixed_to_one",
    "fixed_to_zero",
    "delta_lb",
    "theta_lb",
    "iterations",
    "wall_time_ms",
    "error",
)


@dataclass
class RunConfig:
    """Everything a sweep needs: the instance source, the grid, and solver knobs.

    Exactly one of ``matrix_path`` and ``generate`` must be set; ``generate``
    is a (n, kappa, seed) triple. ``t_mode`` is "0", "min", "grid:M", or a
    number literal. ``lb_mode`` is "auto", "ls", "bf", or "value" paired with
    ``lb_value``.
    """

    matrix_path: str | None = None
    generate: tuple[int, float, int] | None = None
    s_values: tuple[int, ...] = ()
    t_mode: str = "min"
    bounds: tuple[BoundKind, ...] = (BoundKind.AUGFACT, BoundKind.FACT, BoundKind.DDFR)
    max_iters: int = 2000
    tol: float = 1e-6
    lb_mode: str = "auto"
    lb_value: float | None = None
    fixing: bool = False
    output_path: str | None = None


@dataclass
class ReportRow:
    """One solved cell of the sweep. Column order matches COLUMNS."""

    n: int
    s: int
    t: float
    bound_kind: BoundKind
    upper_bound: float | None = None
    lower_bound: float | None = None
    gap: float | None = None
    fixed_to_one: int | None = None
    fixed_to_zero: int | None = None
    delta_lb: float | None = None
    theta_lb: float | None = None
    iterations: int | None = None
    wall_time_ms: float | None = None
    error: str = ""

    def as_record(self) -> list[str]:
        return [
            str(self.n),
            str(self.s),
            _fmt(self.t),
            self.bound_kind.value,
            _fmt(self.upper_bound),
            _fmt(self.lower_bound),
            _fmt(self.gap),
            _fmt(self.fixed_to_one),
            _fmt(self.fixed_to_zero),
            _fmt(self.delta_lb),
            _fmt(self.theta_lb),
            _fmt(self.iterations),
            _fmt(self.wall_time_ms),
            self.error,
        ]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def build_model(config: RunConfig) -> CovarianceModel:
    """Load or generate the instance a config points at."""
    if (config.matrix_path is None) == (config.generate is None):
        raise ValueError("exactly one of matrix_path and generate must be set")
    if config.matrix_path is not None:
        return load_matrix(config.matrix_path)
    n, kappa, seed = config.generate
    return generate_instance(int(n), float(kappa), int(seed))


def _resolve_ts(kind: BoundKind, model: CovarianceModel, t_mode: str) -> list[float]:
    lam = model.lambda_min
    if kind is BoundKind.FACT:
        return [0.0]
    mode = t_mode.strip()
    if mode == "0":
        ts = [0.0]
    elif mode == "min":
        ts = [lam]
    elif mode.startswith("grid:"):
        try:
            m = int(mode[len("grid:"):])
        except ValueError as exc:
            raise ValueError(f"cannot parse grid size in t mode {t_mode!r}") from exc
        if m < 2:
            raise ValueError(f"grid needs at least 2 points, got {m}")
        ts = [float(v) for v in np.linspace(0.0, lam, m)]
    else:
        try:
            t = float(mode)
        except ValueError as exc:
            raise ValueError(f"cannot parse t mode {t_mode!r}") from exc
        if t < 0.0 or t > lam + SHIFT_SLACK:
            raise ValueError(f"t = {t!r} is outside [0, lambda_min = {lam!r}]")
        ts = [t]
    if kind is BoundKind.DDFR:
        # The log-det bound diverges at t = 0; grid mode just skips that point.
        ts = [t for t in ts if t > 0.0]
    return ts


def _lower_bound(model: CovarianceModel, s: int, config: RunConfig) -> float:
    mode = config.lb_mode
    if mode == "value":
        if config.lb_value is None:
            raise ValueError("lb_mode 'value' needs lb_value")
        return float(config.lb_value)
    if mode == "bf":
        return brute_force(model, s).objective
    if mode == "ls":
        return local_search(model, s).objective
    if mode == "auto":
        if comb(model.dim, s) <= ENUMERATION_LIMIT:
            return brute_force(model, s).objective
        return local_search(model, s).objective
    raise ValueError(f"unknown lb_mode {mode!r}")


def run_sweep(config: RunConfig, model: CovarianceModel | None = None) -> list[ReportRow]:
    """Solve every (s, t, bound) cell and collect report rows.

    Solver failures are recorded in the row's error column and the sweep
    continues. Rows come out in a deterministic order: s values as given,
    bounds as given, t ascending inside each bound.
    """
    if model is None:
        model = build_model(config)
    n = model.dim
    if not config.s_values:
        raise ValueError("no s values requested")
    for s in config.s_values:
        if not 1 <= s <= n:
            raise ValueError(f"s = {s} is outside [1, {n}]")
    plan: list[tuple[int, BoundKind, float]] = []
    for s in config.s_values:
        for kind in config.bounds:
            for t in _resolve_ts(kind, model, config.t_mode):
                plan.append((s, kind, t))
    if not plan:
        raise ValueError("nothing to solve: the t mode leaves every requested bound without a shift")
    opts_base = dict(max_iters=config.max_iters, tol=config.tol)
    rows: list[ReportRow] = []
    lb_cache: dict[int, tuple[float | None, str]] = {}
    for s, kind, t in plan:
        if s not in lb_cache:
            try:
                lb_cache[s] = (_lower_bound(model, s, config), "")
            except Exception as exc:
                lb_cache[s] = (None, f"{type(exc).__name__}: {exc}")
        lb, lb_error = lb_cache[s]
        row = ReportRow(n=n, s=s, t=float(t), bound_kind=kind, error=lb_error)
        started = time.perf_counter()
        try:
            sol = solve_bound(model, kind, t, s, SolveOptions(**opts_base))
            row.upper_bound = sol.certified_ub
            row.iterations = sol.iterations
            if lb is not None:
                row.gap = sol.certified_ub - lb
                row.lower_bound = lb
            at_min_shift = kind is BoundKind.AUGFACT and np.isclose(
                t, model.lambda_min, rtol=1e-12, atol=0.0
            )
            if at_min_shift:
                row.delta_lb = delta_lb(model, sol.point.x, s)[0]
                row.theta_lb = theta_lb(model, sol.point.x, s)
                if config.fixing and lb is not None:
                    cert = fix_variables(model, sol, lb)
                    row.fixed_to_one = len(cert.fixed_to_one)
                    row.fixed_to_zero = len(cert.fixed_to_zero)
        except Exception as exc:
            note = f"{type(exc).__name__}: {exc}"
            row.error = f"{row.error}; {note}" if row.error else note
        row.wall_time_ms = (time.perf_counter() - started) * 1000.0
        rows.append(row)
    if config.output_path is not None:
        write_csv(rows, config.output_path)
    return rows


def write_csv(rows: list[ReportRow], dest) -> None:
    """Write rows as CSV behind a version comment line.

    ``dest`` is a path or a writable text file object.
    """
    if hasattr(dest, "write"):
        _write_csv_file(rows, dest)
    else:
        with open(dest, "w", newline="") as f:
            _write_csv_file(rows, f)


def _write_csv_file(rows: list[ReportRow], f) -> None:
    f.write(CSV_VERSION + "\n")
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_record())
