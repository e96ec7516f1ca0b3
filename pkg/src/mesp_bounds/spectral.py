"""Dense symmetric kernels: eigendecompositions, shifted square-root factors,
and principal-submatrix log-determinants."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SHIFT_SLACK = 1e-10
"""Absolute slack allowed when a shift equals the smallest eigenvalue computed in floats."""


class AsymmetricMatrixError(ValueError):
    """Matrix expected to be symmetric is not, beyond tolerance."""


class NotPositiveDefiniteError(ValueError):
    """Matrix expected to be positive (semi)definite is not."""


class ShiftTooLargeError(ValueError):
    """Requested shift exceeds the smallest eigenvalue of the matrix."""


class EigensolverError(RuntimeError):
    """The underlying eigensolver failed to converge."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues sorted nonincreasing.

    Column ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh(X: np.ndarray, symmetry_tol: float = 1e-12) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing.

    Rejects inputs whose asymmetry exceeds ``symmetry_tol`` relative to the
    largest entry magnitude (floored at 1).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    scale = max(1.0, float(np.max(np.abs(X))) if X.size else 1.0)
    gap = float(np.max(np.abs(X - X.T))) if X.size else 0.0
    if gap > symmetry_tol * scale:
        raise AsymmetricMatrixError(
            f"asymmetry {gap:.3e} exceeds tolerance {symmetry_tol:.1e} (relative to scale {scale:.3e})"
        )
    try:
        vals, vecs = np.linalg.eigh((X + X.T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge on a {X.shape[0]}x{X.shape[0]} matrix: {exc}") from exc
    # LAPACK returns ascending order; callers get nonincreasing.
    return SpectralDecomposition(vals[::-1].copy(), vecs[:, ::-1].copy())


@dataclass(frozen=True)
class CovarianceModel:
    """A symmetric positive definite matrix with its cached spectrum."""

    dim: int
    entries: np.ndarray
    lambda_min: float
    lambda_max: float
    decomposition: SpectralDecomposition = field(repr=False)

    @classmethod
    def from_entries(cls, entries: np.ndarray, symmetry_tol: float = 1e-8) -> "CovarianceModel":
        """Validate, symmetrize, and decompose a covariance matrix.

        Asymmetry below ``symmetry_tol`` (relative) is averaged away; larger
        asymmetry raises. Any nonpositive eigenvalue raises.
        """
        X = np.asarray(entries, dtype=float)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {X.shape}")
        n = X.shape[0]
        if n < 1:
            raise ValueError("matrix must have at least one row")
        scale = max(1.0, float(np.max(np.abs(X))))
        gap = float(np.max(np.abs(X - X.T)))
        if gap > symmetry_tol * scale:
            raise AsymmetricMatrixError(
                f"asymmetry {gap:.3e} exceeds tolerance {symmetry_tol:.1e}; refusing to average"
            )
        X = (X + X.T) / 2.0
        dec = eigh(X)
        lam_min = float(dec.eigenvalues[-1])
        lam_max = float(dec.eigenvalues[0])
        if lam_min <= 0.0:
            raise NotPositiveDefiniteError(f"smallest eigenvalue {lam_min:.6e} is not positive")
        return cls(n, X, lam_min, lam_max, dec)

    @property
    def condition_number(self) -> float:
        return self.lambda_max / self.lambda_min


@dataclass(frozen=True)
class ShiftedFactor:
    """Square factor A of a downshifted matrix: ``A.T @ A = C - shift * I``.

    ``factor`` is n x n; column i is the vector attached to index i.
    """

    shift: float
    factor: np.ndarray

    @property
    def dim(self) -> int:
        return self.factor.shape[0]

    def column(self, i: int) -> np.ndarray:
        return self.factor[:, i]


def shifted_factor(model: CovarianceModel, t: float) -> ShiftedFactor:
    """Build a factor A(t) with ``A(t).T @ A(t) = C - t I``.

    Valid for 0 <= t <= lambda_min(C) (plus float slack). Eigenvalues of
    C - t I in [-SHIFT_SLACK, 0) are clamped to zero.
    """
    t = float(t)
    if t < 0.0:
        raise ShiftTooLargeError(f"shift must be nonnegative, got {t}")
    if t > model.lambda_min + SHIFT_SLACK:
        raise ShiftTooLargeError(
            f"shift {t!r} exceeds the smallest eigenvalue {model.lambda_min!r} of the matrix"
        )
    vals = model.decomposition.eigenvalues - t
    if np.any(vals < -SHIFT_SLACK):
        raise NotPositiveDefiniteError("downshifted matrix has an eigenvalue below the clamping slack")
    vals = np.maximum(vals, 0.0)
    A = np.sqrt(vals)[:, None] * model.decomposition.eigenvectors.T
    return ShiftedFactor(t, A)


def _validated_subset(subset: Sequence[int], n: int) -> np.ndarray:
    idx = np.asarray(sorted(int(i) for i in subset), dtype=int)
    if idx.size == 0:
        raise ValueError("subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"subset indices must lie in [0, {n})")
    if np.unique(idx).size != idx.size:
        raise ValueError("subset contains duplicate indices")
    return idx


def logdet_submatrix(model: CovarianceModel, subset: Sequence[int]) -> float:
    """Log-determinant of the principal submatrix indexed by ``subset``.

    Returns -inf (with a warning) if the submatrix is numerically singular.
    """
    idx = _validated_subset(subset, model.dim)
    sub = model.entries[np.ix_(idx, idx)]
    sign, val = np.linalg.slogdet(sub)
    if sign <= 0.0:
        warnings.warn("numerically singular principal submatrix; returning -inf", RuntimeWarning)
        return float("-inf")
    return float(val)
