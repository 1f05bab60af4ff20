"""
Subdata selection algorithms.

Four selectors share one entry point, :func:`select_subdata`:

``levss``
    Deterministic leverage-driven selection over ``T`` rounds.
``alg1``
    LEVSS elimination to a pool of about ``2k`` rows, then greedy
    A-optimal pruning down to ``k``.
``alg2``
    Elimination by the deletion-cost ``d_i = ||(X^T X)^{-1} x_i||^2 / (1 - h_i)``
    (largest kept), then the same greedy pruning.
``random``
    Uniform sampling without replacement.

All of them run on the columns rescaled to ``[-1, 1]``; the indices returned
always refer to rows of the caller's original matrix.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import AllRemovalsDegenerate, PoolTooSmall
from .linalg_core import (
    REFRESH_EVERY,
    REMOVAL_TOL,
    apply_removal,
    inverse_info,
    leverage_scores,
    removal_score,
    removal_scores,
    thin_svd,
)
from .preprocess import DataMatrix, scale_to_unit_interval

ALGORITHMS = ("levss", "alg1", "alg2", "random")

#: Scores within this relative distance of the minimum count as ties.
TIE_RTOL = 1e-12


@dataclass
class SelectionResult:
    """
    Outcome of one subdata selection.

    Parameters
    ----------
    indices : ndarray of int
        Selected original row indices, ascending.
    algorithm : str
        One of ``levss``, ``alg1``, ``alg2``, ``random``.
    trace_trajectory : list of float
        Trace of ``(Q^T Q)^{-1}`` after each greedy deletion (empty for the
        non-greedy selectors).
    elapsed : float
        Wall-clock seconds spent selecting.
    pool_indices : ndarray of int, optional
        Elimination pool the greedy stage started from.
    removed : list of int
        Original indices deleted by the greedy stage, in deletion order.
    """

    indices: np.ndarray
    algorithm: str
    trace_trajectory: List[float] = field(default_factory=list)
    elapsed: float = 0.0
    pool_indices: Optional[np.ndarray] = None
    removed: List[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.indices)

    def to_report(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "k": self.k,
            "elapsed": self.elapsed,
            "trace_trajectory": list(map(float, self.trace_trajectory)),
        }

    def write_indices(self, path) -> None:
        Path(path).write_text("".join(f"{i}\n" for i in self.indices))

    def write_report(self, path, **extra) -> None:
        report = self.to_report()
        report.update(extra)
        Path(path).write_text(json.dumps(report, indent=2))


@dataclass
class EliminationPool:
    """Rows kept by an elimination step, ready for greedy pruning."""

    pool_indices: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        order = np.argsort(self.pool_indices, kind="stable")
        self.pool_indices = np.asarray(self.pool_indices)[order]
        self.Q = np.asarray(self.Q, dtype=float)[order]

    @classmethod
    def from_rows(cls, X, rows) -> "EliminationPool":
        rows = np.asarray(rows, dtype=int)
        return cls(rows, np.asarray(X, dtype=float)[rows])

    @property
    def size(self) -> int:
        return len(self.pool_indices)


def _top(values: np.ndarray, m: int) -> np.ndarray:
    """Positions of the ``m`` largest values, largest first, ties to the lower position."""
    n = len(values)
    if m < n:
        cut = np.partition(values, n - m)[n - m]
        above = np.flatnonzero(values > cut)
        at = np.flatnonzero(values == cut)[: m - len(above)]
        cand = np.concatenate([above, at])
    else:
        cand = np.arange(n)
    return cand[np.lexsort((cand, -values[cand]))][:m]


def levss_select(X, m: int, T: int = 10) -> np.ndarray:
    """Leverage-based deterministic selection of ``m`` rows over ``T`` rounds.

    Each round recomputes leverage scores among the rows not yet chosen and
    takes the ``ceil(m / T)`` largest; the final round takes whatever is left
    of ``m``.
    """
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    if not 0 < m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    if T < 1:
        raise ValueError("T must be at least 1")
    per_round = math.ceil(m / T)
    remaining = np.arange(n)
    chosen: List[np.ndarray] = []
    taken = 0
    while taken < m:
        take = min(per_round, m - taken)
        if len(remaining) <= take:
            picked = np.arange(len(remaining))[:take]
        elif len(remaining) <= p:
            # hat matrix of a square full-rank block is the identity
            picked = np.arange(take)
        else:
            h = leverage_scores(thin_svd(X[remaining]))
            picked = _top(h, take)
        chosen.append(remaining[picked])
        remaining = np.delete(remaining, picked)
        taken += take
    return np.sort(np.concatenate(chosen))


def eliminate_alg1(X_scaled, k: int, T: int = 10, rng_seed=None,
                   pool_size: Optional[int] = None) -> EliminationPool:
    """LEVSS elimination to a pool of ``pool_size`` rows (default ``2k``).

    If LEVSS hands back more rows than requested, a uniform random subset of
    the requested size is drawn with ``rng_seed``.
    """
    X_scaled = np.asarray(X_scaled, dtype=float)
    n, p = X_scaled.shape
    target = 2 * k if pool_size is None else pool_size
    if k <= p:
        raise ValueError(f"k must exceed the number of columns ({p}), got {k}")
    if n < target:
        raise PoolTooSmall(f"pool of {target} rows requested from {n}")
    rows = levss_select(X_scaled, target, T)
    if len(rows) > target:
        rng = np.random.default_rng(rng_seed)
        rows = np.sort(rng.choice(rows, size=target, replace=False))
    return EliminationPool.from_rows(X_scaled, rows)


def deletion_costs(X, z_variant: str = "inverse") -> np.ndarray:
    """Per-row ``||z_i||^2 / (1 - h_i)`` computed through the thin SVD.

    ``z_variant="inverse"`` uses ``z_i = (X^T X)^{-1} x_i = V D^-1 U_i``.
    ``z_variant="pseudocode"`` uses ``z_i = V D^2 V^T x_i = V D^3 U_i`` for
    comparison runs. Rows with ``1 - h_i < 1e-10`` get ``-inf``.
    """
    svd = thin_svd(X)
    h = leverage_scores(svd)
    if z_variant == "inverse":
        W = svd.U / svd.D
    elif z_variant == "pseudocode":
        W = svd.U * svd.D**3
    else:
        raise ValueError(f"unknown z_variant {z_variant!r}")
    zsq = np.einsum("ij,ij->i", W, W)
    denom = 1.0 - h
    ok = denom >= REMOVAL_TOL
    d = np.full(len(h), -np.inf)
    d[ok] = zsq[ok] / denom[ok]
    return d


def eliminate_alg2(X_scaled, k: int, pool_size: Optional[int] = None,
                   z_variant: str = "inverse") -> EliminationPool:
    """Keep the ``pool_size`` rows (default ``2k``) with the largest deletion cost."""
    X_scaled = np.asarray(X_scaled, dtype=float)
    n, p = X_scaled.shape
    target = 2 * k if pool_size is None else pool_size
    if k <= p:
        raise ValueError(f"k must exceed the number of columns ({p}), got {k}")
    if n < target:
        raise PoolTooSmall(f"pool of {target} rows requested from {n}")
    d = deletion_costs(X_scaled, z_variant)
    return EliminationPool.from_rows(X_scaled, np.sort(_top(d, target)))


def _argmin_tie_low(scores: np.ndarray) -> int:
    best = scores.min()
    if not np.isfinite(best):
        return int(np.argmin(scores))
    ties = np.flatnonzero(scores <= best + TIE_RTOL * abs(best))
    return int(ties[0])


def greedy_a_prune(pool: EliminationPool, k: int, algorithm: str = "greedy") -> SelectionResult:
    """Delete rows one at a time until ``k`` remain, each time removing the
    row whose deletion increases ``tr{(Q^T Q)^{-1}}`` the least.

    Ties go to the lowest original row index. The inverse is carried from one
    iteration to the next by Sherman-Morrison and rebuilt from the surviving
    rows every ``REFRESH_EVERY`` deletions.

    Raises
    ------
    SingularInformation
        If the pooled information matrix is singular.
    AllRemovalsDegenerate
        If no row can be removed without losing invertibility.
    """
    t0 = time.perf_counter()
    Q = pool.Q
    N0, p = Q.shape
    if k > N0:
        raise ValueError(f"cannot keep {k} rows from a pool of {N0}")
    if k <= p:
        raise ValueError(f"k must exceed the number of columns ({p}), got {k}")
    alive = np.ones(N0, dtype=bool)
    removed: List[int] = []
    trajectory: List[float] = []
    if N0 > k:
        state = inverse_info(Q)
        for _ in range(N0 - k):
            scores = removal_scores(state, Q)
            scores[~alive] = np.inf
            pos = _argmin_tie_low(scores)
            if not np.isfinite(scores[pos]):
                raise AllRemovalsDegenerate(
                    f"every removal is degenerate with {alive.sum()} rows left"
                )
            state = apply_removal(state, removal_score(state, Q[pos], row_index=pos))
            alive[pos] = False
            removed.append(int(pool.pool_indices[pos]))
            if state.n_downdates % REFRESH_EVERY == 0:
                state = inverse_info(Q[alive])
            trajectory.append(state.trace)
    return SelectionResult(
        indices=pool.pool_indices[alive],
        algorithm=algorithm,
        trace_trajectory=trajectory,
        elapsed=time.perf_counter() - t0,
        pool_indices=pool.pool_indices,
        removed=removed,
    )


def select_subdata(d, k: int, algorithm: str = "alg1", T: int = 10,
                   pool_multiplier: float = 2.0, rng_seed=None,
                   z_variant: str = "inverse") -> SelectionResult:
    """Select ``k`` rows of ``d`` with the chosen algorithm.

    Parameters
    ----------
    d : DataMatrix or array_like
        Full data; only the covariates are used.
    k : int
        Subdata size, must exceed the number of columns.
    algorithm : {"levss", "alg1", "alg2", "random"}
    T : int
        LEVSS rounds (used by ``levss`` and ``alg1``).
    pool_multiplier : float
        Elimination pool size is ``ceil(pool_multiplier * k)``, capped at n.
    rng_seed
        Seed for ``random`` and for the ``alg1`` subsampling fallback.
    z_variant : str
        Passed to :func:`deletion_costs` by ``alg2``.
    """
    t0 = time.perf_counter()
    X = d.X if isinstance(d, DataMatrix) else np.asarray(d, dtype=float)
    n, p = X.shape
    algorithm = algorithm.lower()
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    if k <= p:
        raise ValueError(f"k must exceed the number of columns ({p}), got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of rows {n}")
    if pool_multiplier < 1.1:
        raise ValueError("pool_multiplier must be at least 1.1")

    if algorithm == "random":
        rng = np.random.default_rng(rng_seed)
        idx = np.sort(rng.choice(n, size=k, replace=False))
        return SelectionResult(idx, algorithm, elapsed=time.perf_counter() - t0)

    Xs, _ = scale_to_unit_interval(DataMatrix(X))
    Xs = Xs.X
    if algorithm == "levss":
        idx = levss_select(Xs, k, T)
        return SelectionResult(idx, algorithm, elapsed=time.perf_counter() - t0)

    pool_size = min(n, math.ceil(pool_multiplier * k))
    if algorithm == "alg1":
        pool = eliminate_alg1(Xs, k, T, rng_seed, pool_size=pool_size)
    else:
        pool = eliminate_alg2(Xs, k, pool_size=pool_size, z_variant=z_variant)
    res = greedy_a_prune(pool, k, algorithm=algorithm)
    res.elapsed = time.perf_counter() - t0
    return res


def selection_trace(X, indices) -> float:
    """A-criterion of the rows ``indices`` of ``X`` after ``[-1, 1]`` scaling of ``X``."""
    Xs, _ = scale_to_unit_interval(DataMatrix(np.asarray(X, dtype=float)))
    return inverse_info(Xs.X[np.asarray(indices)]).trace

