"""
Synthetic regression data: six covariate distributions, random slopes with
four active predictors, and Gaussian noise.

Cases
-----
1. ``N(0, S1)`` with ``S1[i, j] = 0.5 ** |i - j|``
2. ``N(0, S2)`` with ``S2[i, j] = 0.5`` off the diagonal, 1 on it
3. per-row fair-coin mixture of cases 1 and 2
4. multivariate t with 3 degrees of freedom, scale ``S1``
5. multivariate t with 3 degrees of freedom, scale ``S2``
6. componentwise ``exp`` of ``N(0, S2)``

Random streams are derived from a seed plus a named stream key, so the
covariates, slopes, and noise of one replicate never share state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

import numpy as np

CASES = (1, 2, 3, 4, 5, 6)

STREAMS = {
    "covariates": 0,
    "beta": 1,
    "noise": 2,
    "select": 3,
    "split": 4,
    "test": 5,
}


def stream(seed, name: str) -> np.random.Generator:
    """Independent generator for ``name`` derived from ``seed``.

    ``seed`` may be an int or a tuple of ints (e.g. ``(master, case, rep)``).
    """
    entropy = list(seed) if isinstance(seed, (tuple, list)) else seed
    ss = np.random.SeedSequence(entropy, spawn_key=(STREAMS[name],))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class CaseSpec:
    case_id: int
    n: int
    p: int = 7
    seed: object = 0

    def __post_init__(self):
        if self.case_id not in CASES:
            raise ValueError(f"case_id must be one of {CASES}, got {self.case_id}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.p < 1:
            raise ValueError("p must be at least 1")


@dataclass(frozen=True)
class TrueModelSpec:
    beta: np.ndarray
    beta0: float = 0.25
    sigma: float = 1.0

    @property
    def active_set(self) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.beta))

    def mean(self, X) -> np.ndarray:
        return self.beta0 + np.asarray(X, dtype=float) @ self.beta

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            "beta0": self.beta0,
            "sigma": self.sigma,
            "active_set": list(self.active_set),
        }


def covariance_sigma1(p: int) -> np.ndarray:
    idx = np.arange(p)
    return 0.5 ** np.abs(idx[:, None] - idx[None, :])


def covariance_sigma2(p: int) -> np.ndarray:
    return np.where(np.eye(p, dtype=bool), 1.0, 0.5)


def _mvn(rng, n, cov):
    L = np.linalg.cholesky(cov)
    return rng.standard_normal((n, cov.shape[0])) @ L.T


def _mvt3(rng, n, scale):
    z = _mvn(rng, n, scale)
    w = rng.chisquare(3, size=n)
    return z / np.sqrt(w / 3.0)[:, None]


def gen_covariates(spec: CaseSpec) -> np.ndarray:
    """Draw the ``n x p`` covariate matrix for ``spec``."""
    rng = stream(spec.seed, "covariates")
    n, p = spec.n, spec.p
    s1, s2 = covariance_sigma1(p), covariance_sigma2(p)
    c = spec.case_id
    if c == 1:
        return _mvn(rng, n, s1)
    if c == 2:
        return _mvn(rng, n, s2)
    if c == 3:
        a, b = _mvn(rng, n, s1), _mvn(rng, n, s2)
        coin = rng.random(n) < 0.5
        return np.where(coin[:, None], a, b)
    if c == 4:
        return _mvt3(rng, n, s1)
    if c == 5:
        return _mvt3(rng, n, s2)
    return np.exp(_mvn(rng, n, s2))


def gen_true_model(seed, p: int = 7) -> TrueModelSpec:
    """Slopes: two from U(0.5, 1), two from U(0.05, 0.1), three zeros."""
    if p != 7:
        raise ValueError("the simulation design has exactly 7 predictors")
    rng = stream(seed, "beta")
    beta = np.zeros(p)
    beta[0:2] = rng.uniform(0.5, 1.0, size=2)
    beta[2:4] = rng.uniform(0.05, 0.1, size=2)
    return TrueModelSpec(beta=beta)


def gen_response(X, spec: TrueModelSpec, seed) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(y, mu)`` with ``mu = beta0 + X beta`` and Gaussian noise."""
    X = np.asarray(X, dtype=float)
    if X.shape[1] != len(spec.beta):
        raise ValueError(f"X has {X.shape[1]} columns, beta has {len(spec.beta)}")
    mu = spec.mean(X)
    if spec.sigma == 0:
        return mu.copy(), mu
    eps = stream(seed, "noise").normal(0.0, spec.sigma, size=X.shape[0])
    return mu + eps, mu


def write_metadata(path, case: CaseSpec, model: TrueModelSpec, **extra) -> None:
    seed = list(case.seed) if isinstance(case.seed, (tuple, list)) else case.seed
    meta = {"case": case.case_id, "n": case.n, "p": case.p, "seed": seed, **model.to_dict()}
    meta.update(extra)
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True))
