"""Shared test oracles, built only on numpy primitives.

The oracles deliberately avoid the package's own code paths so every derived
quantity is checked against an independent computation:

- subset log-determinants via numpy.linalg.slogdet on the extracted block
- exhaustive subset enumeration for optimal values and optimal-set families
- the spectral-average breakpoint by trying every candidate index
"""
import itertools
import math

import numpy as np


def logdet_oracle(entries, subset):
    """log det of the principal block indexed by ``subset``; -inf if not PD."""
    idx = sorted(subset)
    sign, val = np.linalg.slogdet(np.asarray(entries, dtype=float)[np.ix_(idx, idx)])
    if sign <= 0:
        return -math.inf
    return float(val)


def enumerate_subsets(entries, s):
    """All (subset, logdet) pairs in lexicographic subset order."""
    n = np.asarray(entries).shape[0]
    return [(S, logdet_oracle(entries, S)) for S in itertools.combinations(range(n), s)]


def best_subset_oracle(entries, s):
    """(best value, lexicographically-first argmax subset)."""
    pairs = enumerate_subsets(entries, s)
    best_val = max(v for _, v in pairs)
    best_set = next(S for S, v in pairs if v == best_val)
    return best_val, best_set


def optimal_subsets_oracle(entries, s, tol=1e-10):
    """(best value, list of all subsets within tol of the best)."""
    pairs = enumerate_subsets(entries, s)
    best_val = max(v for _, v in pairs)
    return best_val, [set(S) for S, v in pairs if v >= best_val - tol]


def breakpoint_hits_oracle(y, s):
    """Every index k in [0, s-1] satisfying the two-sided average condition.

    The condition for k: the (k+1)-th largest entry is at most the average of
    the remaining tail over s - k slots, and the k-th largest strictly exceeds
    it (vacuous at k = 0). Returns (hits, sorted entries descending).
    """
    ys = np.sort(np.asarray(y, dtype=float))[::-1]
    hits = []
    for k in range(s):
        tail = float(ys[k:].sum())
        avg = tail / (s - k)
        left = math.inf if k == 0 else float(ys[k - 1])
        if left > avg >= float(ys[k]):
            hits.append(k)
    return hits, ys


def psi_oracle(y, s):
    """(value, k) by explicit breakpoint enumeration."""
    hits, ys = breakpoint_hits_oracle(y, s)
    assert hits, "oracle found no breakpoint"
    k = hits[0]
    tail = float(ys[k:].sum())
    avg = tail / (s - k)
    if avg <= 0.0:
        return -math.inf, k
    head = float(np.log(ys[:k]).sum()) if k else 0.0
    return head + (s - k) * math.log(avg), k


def central_difference(fun, x, i, delta=1e-6):
    """Central finite difference of fun at x along coordinate i."""
    xp = np.array(x, dtype=float)
    xm = np.array(x, dtype=float)
    xp[i] += delta
    xm[i] -= delta
    return (fun(xp) - fun(xm)) / (2.0 * delta)
