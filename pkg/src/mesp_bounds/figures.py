"""Render sweep reports as figures next to the delimited output."""

from __future__ import annotations

from pathlib import Path

from .relaxation import BoundKind
from .sweep import ReportRow

_KIND_STYLE = {
    BoundKind.AUGFACT: dict(color="#1f77b4", marker="o"),
    BoundKind.FACT: dict(color="#d62728", marker="s"),
    BoundKind.DDFR: dict(color="#2ca02c", marker="^"),
}


def _tightest_per_s(rows: list[ReportRow], kind: BoundKind) -> list[ReportRow]:
    """One row per s for a bound: the largest solved shift (shifts tighten the bound)."""
    best: dict[int, ReportRow] = {}
    for row in rows:
        if row.bound_kind is not kind or row.upper_bound is None:
            continue
        if row.s not in best or row.t > best[row.s].t:
            best[row.s] = row
    return [best[s] for s in sorted(best)]


def render_figures(rows: list[ReportRow], out_dir: str | Path) -> list[Path]:
    """Write the figures a report supports; returns the paths created.

    Gap versus s needs lower bounds; fixed counts need fixing results; bound
    versus shift needs at least three distinct shifts for some bound.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    plotted = False
    for kind in _KIND_STYLE:
        series = [(r.s, r.gap) for r in _tightest_per_s(rows, kind) if r.gap is not None]
        if len(series) >= 1:
            xs, ys = zip(*series)
            ax.plot(xs, ys, label=kind.value, markersize=4, **_KIND_STYLE[kind])
            plotted = True
    if plotted:
        ax.set_xlabel("subset size s")
        ax.set_ylabel("upper bound minus lower bound (nats)")
        ax.grid(alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = out_dir / "gap_vs_s.png"
        fig.savefig(path, dpi=150)
        written.append(path)
    plt.close(fig)

    fixed = [
        (r.s, r.fixed_to_one + r.fixed_to_zero)
        for r in _tightest_per_s(rows, BoundKind.AUGFACT)
        if r.fixed_to_one is not None and r.fixed_to_zero is not None
    ]
    if fixed:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        xs, ys = zip(*sorted(fixed))
        ax.plot(xs, ys, color="#1f77b4", marker="o", markersize=4)
        ax.set_xlabel("subset size s")
        ax.set_ylabel("variables fixed")
        ax.grid(alpha=0.3)
        fig.tight_layout()
        path = out_dir / "fixed_vs_s.png"
        fig.savefig(path, dpi=150)
        written.append(path)
        plt.close(fig)

    multi_t = any(
        len({r.t for r in rows if r.bound_kind is kind and r.upper_bound is not None}) >= 3
        for kind in _KIND_STYLE
    )
    if multi_t:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for kind in _KIND_STYLE:
            for s in sorted({r.s for r in rows}):
                series = sorted(
                    (r.t, r.upper_bound)
                    for r in rows
                    if r.bound_kind is kind and r.s == s and r.upper_bound is not None
                )
                if len(series) >= 2:
                    xs, ys = zip(*series)
                    ax.plot(xs, ys, label=f"{kind.value} s={s}", marker=".", markersize=4)
        ax.set_xlabel("shift t")
        ax.set_ylabel("certified upper bound (nats)")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / "bound_vs_t.png"
        fig.savefig(path, dpi=150)
        written.append(path)
        plt.close(fig)

    return written
