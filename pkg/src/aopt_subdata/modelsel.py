"""
Least-squares fitting and BIC model selection on (sub)data.

Models are fitted without an intercept on data that were centered with the
full-data means; the intercept is recovered afterwards with
:func:`adjusted_intercept`. Predictor sets are tuples of 0-based column
indices.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, RankDeficient, TooManyPredictors
from .preprocess import DataMatrix

ModelId = Tuple[int, ...]

#: Largest accepted condition number of a design matrix in :func:`ols_fit`.
MAX_COND = 1e12
#: Residual norms below this fraction of ``||y||`` are treated as exact fits.
PERFECT_FIT_RTOL = 1e-10
MAX_ALL_SUBSET_P = 20


@dataclass
class FitResult:
    model: ModelId
    beta: np.ndarray
    rss: float
    bic: float
    n_used: int
    intercept: Optional[float] = None

    @property
    def p_r(self) -> int:
        return len(self.model)

    def predict(self, X) -> np.ndarray:
        """Predictions on uncentered covariates (needs ``intercept``)."""
        if self.intercept is None:
            raise ValueError("fit has no intercept; pass means when fitting")
        X = np.asarray(X, dtype=float)
        return self.intercept + X[:, list(self.model)] @ self.beta


@dataclass
class CandidateSetReport:
    """All fits evaluated by a search and the BIC-minimal model.

    ``path`` lists the accepted models of a forward search, starting from the
    empty model; it is empty for all-subset search.
    """

    fits: List[FitResult]
    selected: ModelId
    skipped: List[ModelId] = field(default_factory=list)
    path: List[ModelId] = field(default_factory=list)
    path_bic: List[float] = field(default_factory=list)

    @property
    def best(self) -> Optional[FitResult]:
        for f in self.fits:
            if f.model == self.selected:
                return f
        return None

    @property
    def n_additions(self) -> int:
        return max(len(self.path) - 1, 0)

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bitmask", "p_r", "rss", "bic", "selected"])
            for f in self.fits:
                mask = sum(1 << j for j in f.model)
                w.writerow([mask, f.p_r, repr(f.rss), repr(f.bic), int(f.model == self.selected)])


def ols_fit(Xr, y) -> Tuple[np.ndarray, float]:
    """Least squares without intercept. Returns ``(beta, rss)``.

    Raises
    ------
    RankDeficient
        If ``Xr`` has no more rows than columns or condition number >= 1e12.
    """
    Xr = np.asarray(Xr, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if Xr.ndim == 1:
        Xr = Xr[:, None]
    n, p = Xr.shape
    if y.shape[0] != n:
        raise DimensionMismatch(f"y has {y.shape[0]} entries, Xr has {n} rows")
    if n <= p:
        raise RankDeficient(f"need more rows than columns, got {n} x {p}")
    U, s, Vt = np.linalg.svd(Xr, full_matrices=False)
    if s[-1] == 0.0 or s[0] / s[-1] >= MAX_COND:
        raise RankDeficient("design matrix is numerically rank deficient")
    beta = Vt.T @ ((U.T @ y) / s)
    resid = y - Xr @ beta
    rss = float(resid @ resid)
    if rss <= (PERFECT_FIT_RTOL**2) * float(y @ y):
        rss = 0.0
    return beta, rss


def bic_score(rss: float, n: int, p_r: int) -> float:
    """``n log(rss / n) + p_r log(n)``; ``-inf`` signals a perfect fit."""
    if n <= p_r:
        raise ValueError(f"need n > p_r, got n={n}, p_r={p_r}")
    if rss <= 1e-300:
        return -math.inf
    return n * math.log(rss / n) + p_r * math.log(n)


def adjusted_intercept(y_mean: float, x_means, beta) -> float:
    """Intercept ``y_mean - x_means . beta`` for a fit on centered data."""
    return float(y_mean - np.dot(np.asarray(x_means, dtype=float), np.asarray(beta, dtype=float)))


def _selection_key(f: FitResult):
    return (f.bic, len(f.model), f.model)


def fit_model(X, y, model: Sequence[int], x_means=None, y_mean=None) -> FitResult:
    """Fit one candidate model on the rows given.

    ``x_means``/``y_mean`` are the full-data means used for centering; when
    supplied the adjusted intercept is stored on the result.
    """
    model = tuple(sorted(int(j) for j in model))
    n = len(y)
    beta, rss = ols_fit(X[:, list(model)], y)
    intercept = None
    if x_means is not None and y_mean is not None:
        intercept = adjusted_intercept(y_mean, np.asarray(x_means)[list(model)], beta)
    return FitResult(model, beta, rss, bic_score(rss, n, len(model)), n, intercept)


def _unpack(d):
    if isinstance(d, DataMatrix):
        if d.y is None:
            raise ValueError("model selection needs a response")
        return d.X, d.y
    X, y = d
    return np.asarray(X, dtype=float), np.asarray(y, dtype=float)


def all_subset_bic(d, exclude: Iterable[int] = (), x_means=None, y_mean=None,
                   max_p: int = MAX_ALL_SUBSET_P) -> CandidateSetReport:
    """Fit every non-empty predictor subset and pick the smallest BIC.

    Ties go to fewer predictors, then to the lexicographically smaller set.
    Rank-deficient subsets are skipped and listed in ``report.skipped``.
    """
    X, y = _unpack(d)
    excluded = set(exclude)
    cols = [j for j in range(X.shape[1]) if j not in excluded]
    if len(cols) > max_p:
        raise TooManyPredictors(f"{len(cols)} predictors exceed the limit of {max_p}")
    fits: List[FitResult] = []
    skipped: List[ModelId] = []
    for size in range(1, len(cols) + 1):
        for model in itertools.combinations(cols, size):
            try:
                fits.append(fit_model(X, y, model, x_means, y_mean))
            except RankDeficient:
                skipped.append(model)
    if not fits:
        raise RankDeficient("every candidate model is rank deficient")
    best = min(fits, key=_selection_key)
    return CandidateSetReport(fits, best.model, skipped)


def empty_model_bic(y) -> float:
    """BIC of the model with no predictors on a centered response."""
    y = np.asarray(y, dtype=float)
    return bic_score(float(y @ y), len(y), 0)


def forward_bic(d, exclude: Iterable[int] = (), x_means=None, y_mean=None) -> CandidateSetReport:
    """Forward selection by BIC, starting from the empty model.

    At each step the predictor whose addition gives the lowest BIC is added;
    the search stops when no addition lowers BIC.
    """
    X, y = _unpack(d)
    excluded = set(exclude)
    cols = [j for j in range(X.shape[1]) if j not in excluded]
    current: ModelId = ()
    current_bic = empty_model_bic(y)
    path = [current]
    path_bic = [current_bic]
    fits: List[FitResult] = []
    skipped: List[ModelId] = []
    while np.isfinite(current_bic) and len(current) < len(cols):
        step: List[FitResult] = []
        for j in cols:
            if j in current:
                continue
            model = tuple(sorted(current + (j,)))
            try:
                step.append(fit_model(X, y, model, x_means, y_mean))
            except RankDeficient:
                skipped.append(model)
        if not step:
            break
        fits.extend(step)
        cand = min(step, key=_selection_key)
        if not cand.bic < current_bic:
            break
        current, current_bic = cand.model, cand.bic
        path.append(current)
        path_bic.append(current_bic)
    return CandidateSetReport(fits, current, skipped, path, path_bic)
