"""
Dense linear-algebra primitives for A-optimal subdata selection.

The central object is :class:`InverseInfoState`, which tracks
``(Q^T Q)^{-1}`` and its trace while rows are deleted from ``Q`` one at a
time. Row deletion uses the Sherman-Morrison identity

    (Q_i^T Q_i)^{-1} = A + (A x)(A x)^T / (1 - x^T A x),   A = (Q^T Q)^{-1}

so the trace after deleting row ``x`` is ``tr(A) + ||A x||^2 / (1 - h)``
with ``h = x^T A x`` the leverage of ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRemoval, RankDeficient, SingularInformation

#: Smallest admissible ``1 - h`` for a row deletion.
REMOVAL_TOL = 1e-10
#: Relative singular-value cutoff used by :func:`thin_svd`.
RANK_TOL = 1e-10
#: Largest accepted condition number of ``Q^T Q``.
MAX_INFO_COND = 1e12
#: Number of downdates between full re-inversions in long greedy runs.
REFRESH_EVERY = 128


@dataclass(frozen=True)
class ThinSvd:
    """Thin SVD ``X = U diag(D) V^T`` of an n x p matrix with n >= p."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray


@dataclass(frozen=True)
class InverseInfoState:
    """
    Inverse information matrix of the rows currently kept.

    Parameters
    ----------
    inv : ndarray, shape (p, p)
        ``(Q^T Q)^{-1}``.
    trace : float
        Trace of ``inv``.
    n_rows : int
        Number of rows of ``Q``.
    n_downdates : int
        Sherman-Morrison downdates applied since ``inv`` was last formed
        directly.
    """

    inv: np.ndarray
    trace: float
    n_rows: int
    n_downdates: int = 0


@dataclass(frozen=True)
class RemovalScore:
    """Trace and downdated inverse obtained by deleting one row."""

    row_index: int
    score: float
    downdated_inv: np.ndarray


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix contains non-finite entries")
    return X


def _symmetrize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def thin_svd(X) -> ThinSvd:
    """Thin SVD of a tall matrix, refusing rank-deficient input.

    Raises
    ------
    RankDeficient
        If the smallest singular value is at most ``1e-10`` times the largest.
    """
    X = _as_matrix(X)
    n, p = X.shape
    if n < p:
        raise RankDeficient(f"need rows >= cols for a thin SVD, got {n} x {p}")
    U, D, Vt = np.linalg.svd(X, full_matrices=False)
    if D[0] == 0.0 or D[-1] <= RANK_TOL * D[0]:
        raise RankDeficient(
            f"smallest singular value {D[-1]:.3e} vs largest {D[0]:.3e}"
        )
    return ThinSvd(U=U, D=D, V=Vt.T)


def leverage_scores(svd: ThinSvd) -> np.ndarray:
    """Diagonal of the hat matrix: squared row norms of ``U``."""
    return np.einsum("ij,ij->i", svd.U, svd.U)


def inverse_info(Q) -> InverseInfoState:
    """Form ``(Q^T Q)^{-1}`` from the rows of ``Q``.

    The inverse is built from the SVD of ``Q`` as ``V diag(D^-2) V^T``, which
    avoids squaring the condition number before inverting.

    Raises
    ------
    SingularInformation
        If ``Q`` has no more rows than columns or ``cond(Q^T Q) >= 1e12``.
    """
    Q = _as_matrix(Q)
    n, p = Q.shape
    if n <= p:
        raise SingularInformation(f"need more rows than columns, got {n} x {p}")
    _, D, Vt = np.linalg.svd(Q, full_matrices=False)
    if D[-1] == 0.0 or (D[0] / D[-1]) ** 2 >= MAX_INFO_COND:
        raise SingularInformation("information matrix is numerically singular")
    W = Vt.T / D
    inv = _symmetrize(W @ W.T)
    return InverseInfoState(inv=inv, trace=float(np.trace(inv)), n_rows=n)


def a_criterion(Q) -> float:
    """Trace of ``(Q^T Q)^{-1}``; smaller is better."""
    return inverse_info(Q).trace


def removal_score(state: InverseInfoState, x, row_index: int = -1) -> RemovalScore:
    """Score the deletion of row ``x`` from the current design.

    Raises
    ------
    DegenerateRemoval
        If ``1 - x^T A x < 1e-10``.
    """
    x = np.asarray(x, dtype=float)
    z = state.inv @ x
    h = float(x @ z)
    denom = 1.0 - h
    if denom < REMOVAL_TOL:
        raise DegenerateRemoval(f"row leverage {h:.12f} leaves no information")
    score = state.trace + float(z @ z) / denom
    downdated = _symmetrize(state.inv + np.outer(z, z) / denom)
    return RemovalScore(row_index=row_index, score=score, downdated_inv=downdated)


def removal_scores(state: InverseInfoState, R) -> np.ndarray:
    """Deletion score for every row of ``R`` at once.

    Rows whose deletion fails the ``1 - h >= 1e-10`` guard get ``+inf``.
    """
    R = np.asarray(R, dtype=float)
    Z = R @ state.inv
    denom = 1.0 - np.einsum("ij,ij->i", Z, R)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = state.trace + np.einsum("ij,ij->i", Z, Z) / denom
    scores[denom < REMOVAL_TOL] = np.inf
    return scores


def apply_removal(state: InverseInfoState, chosen: RemovalScore) -> InverseInfoState:
    """Advance ``state`` by the deletion described in ``chosen``."""
    return InverseInfoState(
        inv=chosen.downdated_inv,
        trace=chosen.score,
        n_rows=state.n_rows - 1,
        n_downdates=state.n_downdates + 1,
    )
