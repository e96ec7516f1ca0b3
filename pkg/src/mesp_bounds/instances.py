"""Covariance instances: plain-text matrix files and a seeded synthetic generator."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .spectral import CovarianceModel


class MatrixFormatError(ValueError):
    """A matrix file does not follow the expected plain-text layout."""


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def load_matrix(path: str | Path) -> CovarianceModel:
    """Read a covariance matrix from a plain-text file.

    Layout: the first non-comment line holds n, followed by n rows of n
    whitespace-separated entries. Everything after a '#' is a comment.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    content: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(lines, start=1):
        tokens = _strip_comment(raw).split()
        if tokens:
            content.append((lineno, tokens))
    if not content:
        raise MatrixFormatError(f"{path}: no data found")
    head_lineno, head = content[0]
    if len(head) != 1:
        raise MatrixFormatError(f"{path}:{head_lineno}: expected a single dimension, got {len(head)} tokens")
    try:
        n = int(head[0])
    except ValueError as exc:
        raise MatrixFormatError(f"{path}:{head_lineno}: dimension {head[0]!r} is not an integer") from exc
    if n < 1:
        raise MatrixFormatError(f"{path}:{head_lineno}: dimension must be positive, got {n}")
    body = content[1:]
    if len(body) != n:
        raise MatrixFormatError(f"{path}: expected {n} matrix rows, found {len(body)}")
    rows = []
    for lineno, tokens in body:
        if len(tokens) != n:
            raise MatrixFormatError(f"{path}:{lineno}: expected {n} entries, got {len(tokens)}")
        try:
            rows.append([float(tok) for tok in tokens])
        except ValueError as exc:
            raise MatrixFormatError(f"{path}:{lineno}: non-numeric entry") from exc
    return CovarianceModel.from_entries(np.array(rows))


def save_matrix(path: str | Path, model: CovarianceModel) -> None:
    """Write a matrix in the plain-text layout, round-tripping entries bit-exactly."""
    lines = ["# covariance matrix", str(model.dim)]
    for row in model.entries:
        lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def generate_instance(n: int, kappa: float, seed: int) -> CovarianceModel:
    """Random positive definite matrix with condition number ``kappa``.

    The spectrum is log-uniform on [1, kappa] with both endpoints pinned, and
    the eigenbasis is a seeded random orthogonal matrix, so the same arguments
    always reproduce the same instance.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if kappa < 1.0:
        raise ValueError(f"condition number must be >= 1, got {kappa}")
    rng = np.random.default_rng(seed)
    gauss = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(gauss)
    Q = Q * np.where(np.diag(R) >= 0.0, 1.0, -1.0)
    interior = np.exp(rng.uniform(0.0, np.log(kappa), size=n - 2)) if n > 2 else np.empty(0)
    lam = np.sort(np.concatenate(([kappa, 1.0], interior)))[::-1]
    C = (Q * lam) @ Q.T
    C = (C + C.T) / 2.0
    return CovarianceModel.from_entries(C)
