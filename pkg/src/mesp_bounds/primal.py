"""Primal side: feasible subset heuristics, exact enumeration, and gradient-based
variable fixing driven by an upper and a lower bound."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .relaxation import BoundKind, RelaxationSolution, augfact_objective
from .spectral import CovarianceModel, logdet_submatrix, shifted_factor

ENUMERATION_LIMIT = 10**6
"""Refuse exhaustive enumeration beyond this many subsets."""

SWAP_GAIN_TOL = 1e-10
"""A swap must improve the objective by more than this to be taken."""


class EnumerationLimitError(ValueError):
    """Exhaustive enumeration was asked to visit too many subsets."""


class BoundConsistencyError(ValueError):
    """A claimed lower bound exceeds the certified upper bound."""


@dataclass(frozen=True)
class SubsetSolution:
    """A feasible subset with its log-det objective (in nats)."""

    subset: tuple[int, ...]
    objective: float
    method: str


@dataclass(frozen=True)
class FixingCertificate:
    """Variables forced to 0 or 1 in every optimal subset.

    ``gradient`` is the supergradient at the solved point, ``upper_bound`` the
    linearized bound it induces, and the fixed index sets follow from margins
    against ``upper_bound - lower_bound``.
    """

    gradient: np.ndarray
    upper_bound: float
    lower_bound: float
    fixed_to_one: tuple[int, ...]
    fixed_to_zero: tuple[int, ...]


def greedy(model: CovarianceModel, s: int) -> SubsetSolution:
    """Grow a subset one index at a time, best log-det first.

    Ties take the smallest index. Dense recomputation per candidate keeps this
    simple; rank-one determinant updates would cut a factor of the subset size.
    """
    _check_s(model, s)
    chosen: list[int] = []
    for _ in range(s):
        best_j = -1
        best_val = -np.inf
        for j in range(model.dim):
            if j in chosen:
                continue
            val = logdet_submatrix(model, chosen + [j])
            if val > best_val:
                best_j, best_val = j, val
        chosen.append(best_j)
    chosen.sort()
    return SubsetSolution(tuple(chosen), logdet_submatrix(model, chosen), "greedy")


def local_search(model: CovarianceModel, s: int, init: SubsetSolution | None = None) -> SubsetSolution:
    """Best-improvement single-swap descent from an initial subset.

    Stops when no swap gains more than SWAP_GAIN_TOL. The scan order (smaller
    outgoing index, then smaller incoming index) makes ties deterministic.
    """
    _check_s(model, s)
    if init is None:
        init = greedy(model, s)
    if len(init.subset) != s:
        raise ValueError(f"initial subset has size {len(init.subset)}, expected {s}")
    current = sorted(init.subset)
    current_val = logdet_submatrix(model, current)
    inside = set(current)
    while True:
        best_gain = SWAP_GAIN_TOL
        best_swap: tuple[int, int, float] | None = None
        for i in current:
            for j in range(model.dim):
                if j in inside:
                    continue
                cand = sorted(k for k in current if k != i) + [j]
                val = logdet_submatrix(model, sorted(cand))
                gain = val - current_val
                if gain > best_gain:
                    best_gain = gain
                    best_swap = (i, j, val)
        if best_swap is None:
            break
        i, j, val = best_swap
        inside.discard(i)
        inside.add(j)
        current = sorted(inside)
        current_val = val
    return SubsetSolution(tuple(current), current_val, "local_search")


def brute_force(model: CovarianceModel, s: int) -> SubsetSolution:
    """Exact optimum by exhaustive enumeration, lexicographically first among ties.

    Refuses when C(n, s) exceeds ENUMERATION_LIMIT.
    """
    _check_s(model, s)
    count = comb(model.dim, s)
    if count > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"C({model.dim}, {s}) = {count} subsets exceeds the limit of {ENUMERATION_LIMIT}"
        )
    best_subset: tuple[int, ...] | None = None
    best_val = -np.inf
    for subset in itertools.combinations(range(model.dim), s):
        val = logdet_submatrix(model, subset)
        if val > best_val:
            best_subset, best_val = subset, val
    assert best_subset is not None
    return SubsetSolution(best_subset, best_val, "brute_force")


def fixing_sets(gradient: np.ndarray, s: int, slack: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Indices whose gradient margin against the s-th and (s+1)-th largest
    entries strictly exceeds ``slack``; ties never fix anything."""
    g = np.asarray(gradient, dtype=float).reshape(-1)
    n = g.size
    if not 1 <= s <= n:
        raise ValueError(f"s must lie in [1, {n}], got {s}")
    gs = np.sort(g)[::-1]
    s_th = float(gs[s - 1])
    next_th = float(gs[s]) if s < n else float("-inf")
    ones = tuple(i for i in range(n) if g[i] - next_th > slack)
    zeros = tuple(i for i in range(n) if s_th - g[i] > slack)
    return ones, zeros


def fix_variables(model: CovarianceModel, solution: RelaxationSolution, lb: float) -> FixingCertificate:
    """Fix variables that every optimal subset must include or exclude.

    The solved point's supergradient linearizes the concave bound into a valid
    upper bound; coordinates whose gradient clears the top-s threshold by more
    than the remaining gap are forced. Sound for any feasible solved point and
    any valid lower bound.
    """
    if solution.bound_kind is not BoundKind.AUGFACT:
        raise ValueError("fixing is stated at a shifted-envelope solution")
    lam_min = model.lambda_min
    if abs(solution.shift - lam_min) > 1e-9 * max(1.0, lam_min):
        raise ValueError(f"solution shift {solution.shift!r} is not the smallest eigenvalue {lam_min!r}")
    x = solution.point.x
    s = solution.point.s
    factor = shifted_factor(model, solution.shift)
    value, grad = augfact_objective(factor, x, s)
    if grad is None:
        raise ValueError("no supergradient is available at the solved point")
    top_sum = float(np.sort(grad)[::-1][:s].sum())
    ub = float(value - grad @ x + top_sum)
    if lb > ub + 1e-6:
        raise BoundConsistencyError(f"lower bound {lb!r} exceeds the certified upper bound {ub!r}")
    # lb may exceed ub by rounding noise when the relaxation is tight; a
    # negative slack would let zero-margin ties fix, which is unsound.
    ones, zeros = fixing_sets(grad, s, max(ub - lb, 0.0))
    return FixingCertificate(grad, ub, float(lb), ones, zeros)


def _check_s(model: CovarianceModel, s: int) -> None:
    if not 1 <= s <= model.dim:
        raise ValueError(f"s must lie in [1, {model.dim}], got {s}")
