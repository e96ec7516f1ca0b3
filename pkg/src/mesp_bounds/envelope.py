"""Concave envelope of the top-s log-determinant on nonnegative vectors.

The envelope splits a sorted vector at a breakpoint k: the k largest entries
contribute their own logs, the remaining mass is averaged into s - k equal
shares. The breakpoint is the unique k in [0, s-1] whose averaged tail sits
between the k-th and (k+1)-th largest entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOISE_CLAMP = 1e-12
"""Entries in [-NOISE_CLAMP, 0) are treated as eigensolver noise and set to zero."""

_CONDITION_SLACK = 1e-12
"""Slack on the non-strict side of the breakpoint condition, relative to the
largest entry; the strict side stays exact so the breakpoint remains unique."""


@dataclass(frozen=True)
class EnvelopeEval:
    """Envelope value with its breakpoint and subgradient.

    ``subgradient`` is aligned with the nonincreasing sort of the input and is
    None when the value is -inf. ``sort_permutation[j]`` is the input index of
    the j-th sorted entry.
    """

    value: float
    k: int
    subgradient: np.ndarray | None
    sort_permutation: np.ndarray
    rank_deficient: bool = False


def psi(y: np.ndarray, s: int) -> EnvelopeEval:
    """Evaluate the envelope of the top-s log product at a nonnegative vector.

    Fewer than s entries carrying positive mass make the averaged tail zero;
    the value is then -inf and the evaluation is flagged rank deficient.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    n = y.size
    if not 1 <= s <= n:
        raise ValueError(f"s must lie in [1, {n}], got {s}")
    if np.any(y < -NOISE_CLAMP):
        worst = float(y.min())
        raise ValueError(f"entry {worst:.3e} is below the negative-noise clamp {-NOISE_CLAMP:.1e}")
    y = np.where(y < 0.0, 0.0, y)
    perm = np.argsort(-y, kind="stable")
    ys = y[perm]
    prefix = np.concatenate(([0.0], np.cumsum(ys)))
    total = prefix[-1]
    # The first k whose averaged tail reaches ys[k] is the unique breakpoint:
    # every earlier k fails this side, and failing at k - 1 is algebraically
    # the same as the strict condition ys[k-1] > avg_k holding at k.
    slack = _CONDITION_SLACK * max(1.0, float(ys[0]))
    k = s - 1
    avg = 0.0
    tail = 0.0
    for cand in range(s):
        tail = total - prefix[cand]
        avg = tail / (s - cand)
        if avg >= ys[cand] - slack:
            k = cand
            break
    if avg <= 0.0:
        return EnvelopeEval(float("-inf"), k, None, perm, rank_deficient=True)
    value = float(np.sum(np.log(ys[:k])) + (s - k) * np.log(avg))
    g = np.empty(n)
    g[:k] = 1.0 / ys[:k]
    g[k:] = (s - k) / tail
    return EnvelopeEval(value, k, g, perm)


def psi_subgradient(evaluation: EnvelopeEval, y: np.ndarray) -> np.ndarray:
    """Return the subgradient of an evaluation in the input's original order."""
    if evaluation.subgradient is None:
        raise ValueError("no subgradient is available at a -inf evaluation")
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != evaluation.sort_permutation.size:
        raise ValueError("vector length does not match the evaluation")
    out = np.empty(y.size)
    out[evaluation.sort_permutation] = evaluation.subgradient
    return out


def envelope_value(X_eigs: np.ndarray, t: float, s: int) -> EnvelopeEval:
    """Envelope of the shifted top-s log-determinant at a spectrum.

    ``X_eigs`` must be nonincreasing; the shift t is added to the s largest
    entries before evaluation. Entries in [-1e-10, 0) are clamped to zero.
    """
    lam = np.asarray(X_eigs, dtype=float).reshape(-1)
    n = lam.size
    if not 1 <= s <= n:
        raise ValueError(f"s must lie in [1, {n}], got {s}")
    if t < 0.0:
        raise ValueError(f"shift must be nonnegative, got {t}")
    scale = max(1.0, float(lam[0]) if n else 1.0)
    if np.any(lam[1:] > lam[:-1] + 1e-8 * scale):
        raise ValueError("spectrum must be sorted nonincreasing")
    if np.any(lam < -1e-10):
        worst = float(lam.min())
        raise ValueError(f"eigenvalue {worst:.3e} is below the clamping tolerance -1e-10")
    lam = np.maximum(lam, 0.0)
    y = lam.copy()
    y[:s] += t
    return psi(y, s)
