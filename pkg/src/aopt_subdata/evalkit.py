"""
Evaluation harness: selection accuracy, mean squared prediction error,
replicated sweeps over cases x algorithms x subdata sizes, and timing.

One sweep replicate generates a full dataset once and reuses it for every
(algorithm, k) cell, so differences between cells are not blurred by
independent data draws.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, SubdataError
from .modelsel import FitResult, ModelId, all_subset_bic, forward_bic
from .preprocess import DataMatrix, centralize
from .simgen import CaseSpec, gen_covariates, gen_response, gen_true_model, stream
from .subselect import ALGORITHMS, select_subdata

log = logging.getLogger(__name__)

SEARCHES = {"all-subset": all_subset_bic, "forward": forward_bic}


@dataclass
class ReplicateOutcome:
    case: str
    replicate: int
    algorithm: str
    k: int
    selected_model: ModelId
    true_model: ModelId
    mspe: float
    seconds: float

    @property
    def correct(self) -> bool:
        return set(self.selected_model) == set(self.true_model)


@dataclass
class ReplicateFailure:
    case: str
    replicate: int
    algorithm: str
    k: int
    message: str


@dataclass
class SweepConfig:
    """Parameters of a replicated sweep.

    ``cases`` holds simulation case ids; ignored when a real dataset is
    passed to :func:`run_sweep`.
    """

    cases: Tuple[int, ...] = (1,)
    algorithms: Tuple[str, ...] = ("levss", "alg1", "alg2")
    ks: Tuple[int, ...] = (300, 500, 700, 1000)
    replicates: int = 100
    n: int = 10_000
    p: int = 7
    n_test: int = 500
    T: int = 10
    pool_multiplier: float = 2.0
    search: str = "all-subset"
    master_seed: int = 0
    z_variant: str = "inverse"
    test_fraction: float = 0.1

    def __post_init__(self):
        self.cases = tuple(int(c) for c in self.cases)
        self.algorithms = tuple(a.lower() for a in self.algorithms)
        self.ks = tuple(sorted(int(k) for k in self.ks))
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        if self.search not in SEARCHES:
            raise ValueError(f"search must be one of {sorted(SEARCHES)}")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepCell:
    case: str
    algorithm: str
    k: int
    accuracy: float
    mean_mspe: float
    mean_seconds: float
    failures: int
    replicates: int


@dataclass
class SweepSummary:
    cells: List[SweepCell]
    outcomes: List[ReplicateOutcome] = field(default_factory=list)
    failures: List[ReplicateFailure] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def cell(self, case, algorithm: str, k: int) -> SweepCell:
        for c in self.cells:
            if c.case == str(case) and c.algorithm == algorithm and c.k == k:
                return c
        raise KeyError((case, algorithm, k))

    def curve(self, case, algorithm: str, metric: str = "accuracy") -> Tuple[np.ndarray, np.ndarray]:
        cells = sorted(
            (c for c in self.cells if c.case == str(case) and c.algorithm == algorithm),
            key=lambda c: c.k,
        )
        return (np.array([c.k for c in cells]),
                np.array([getattr(c, metric) for c in cells], dtype=float))

    @property
    def cases(self) -> List[str]:
        return list(dict.fromkeys(c.case for c in self.cells))

    @property
    def algorithms(self) -> List[str]:
        return list(dict.fromkeys(c.algorithm for c in self.cells))

    def to_csv(self, path) -> None:
        cols = ["case", "algorithm", "k", "accuracy", "mean_mspe", "mean_seconds", "failures", "replicates"]
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for c in self.cells:
                w.writerow([getattr(c, name) for name in cols])

    @classmethod
    def from_csv(cls, path) -> "SweepSummary":
        cells = []
        with Path(path).open(newline="") as fh:
            for row in csv.DictReader(fh):
                cells.append(SweepCell(
                    case=row["case"],
                    algorithm=row["algorithm"],
                    k=int(row["k"]),
                    accuracy=float(row["accuracy"]),
                    mean_mspe=float(row["mean_mspe"]),
                    mean_seconds=float(row["mean_seconds"]),
                    failures=int(row["failures"]),
                    replicates=int(row["replicates"]),
                ))
        return cls(cells)


def accuracy(outcomes: Sequence[ReplicateOutcome]) -> float:
    """Fraction of outcomes whose selected model equals the true model."""
    if not outcomes:
        raise ValueError("accuracy of an empty outcome list")
    return sum(o.correct for o in outcomes) / len(outcomes)


def mspe(test_mu, test_X, fit: FitResult) -> float:
    """Mean squared difference between ``test_mu`` and the fit's predictions."""
    test_mu = np.asarray(test_mu, dtype=float).ravel()
    test_X = np.asarray(test_X, dtype=float)
    if test_X.ndim != 2 or test_X.shape[0] != test_mu.shape[0]:
        raise DimensionMismatch(
            f"{test_mu.shape[0]} targets for a test matrix of shape {test_X.shape}"
        )
    if fit.model and max(fit.model) >= test_X.shape[1]:
        raise DimensionMismatch("fit uses a column absent from test_X")
    if fit.model:
        pred = fit.predict(test_X)
    else:
        pred = np.full(test_mu.shape, fit.intercept)
    r = test_mu - pred
    return float(r @ r) / len(r)


def _empty_fit(y_mean: float, n: int) -> FitResult:
    return FitResult((), np.zeros(0), float("nan"), float("nan"), n, y_mean)


def _evaluate_cells(config: SweepConfig, case_label: str, rep: int, seed,
                    X, Xc, yc, cmap, true_model, test_X, test_mu):
    search = SEARCHES[config.search]
    outcomes, failures = [], []
    for ai, alg in enumerate(config.algorithms):
        for k in config.ks:
            try:
                sel = select_subdata(
                    X, k, alg, T=config.T, pool_multiplier=config.pool_multiplier,
                    rng_seed=[*seed, ai, k], z_variant=config.z_variant,
                )
                rows = sel.indices
                report = search((Xc[rows], yc[rows]), x_means=cmap.x_means, y_mean=cmap.y_mean)
                fit = report.best if report.selected else _empty_fit(cmap.y_mean, len(rows))
                err = mspe(test_mu, test_X, fit)
            except (SubdataError, ValueError, np.linalg.LinAlgError) as exc:
                failures.append(ReplicateFailure(case_label, rep, alg, k, repr(exc)))
                continue
            outcomes.append(ReplicateOutcome(
                case_label, rep, alg, k, report.selected, tuple(true_model), err, sel.elapsed,
            ))
    return outcomes, failures


def simulate_replicate(config: SweepConfig, case: int, rep: int):
    """Run every (algorithm, k) cell for one simulated replicate."""
    seed = (config.master_seed, case, rep)
    X = gen_covariates(CaseSpec(case, config.n, config.p, seed))
    model = gen_true_model(seed, config.p)
    y, _ = gen_response(X, model, seed)
    test_X = gen_covariates(CaseSpec(case, config.n_test, config.p, (*seed, 1)))
    test_mu = model.mean(test_X)
    dc, cmap = centralize(DataMatrix(X, y))
    return _evaluate_cells(config, str(case), rep, seed, X, dc.X, dc.y, cmap,
                           model.active_set, test_X, test_mu)


def full_data_model(d: DataMatrix, search: str = "all-subset", exclude=()) -> ModelId:
    """Model chosen by BIC on the full (centered) data; the reference for real data."""
    dc, _ = centralize(d)
    return SEARCHES[search](dc, exclude=exclude).selected


def real_data_replicate(config: SweepConfig, d: DataMatrix, true_model: ModelId, rep: int,
                        label: str = "data"):
    """One seeded train/test split of a real dataset.

    The observed test response stands in for the unobservable conditional
    mean when computing MSPE.
    """
    seed = (config.master_seed, 0, rep)
    rng = stream(seed, "split")
    perm = rng.permutation(d.n)
    n_test = max(1, int(round(config.test_fraction * d.n)))
    test, train = np.sort(perm[:n_test]), np.sort(perm[n_test:])
    dc, cmap = centralize(d.subset(train))
    return _evaluate_cells(config, label, rep, seed, d.X[train], dc.X, dc.y, cmap,
                           true_model, d.X[test], d.y[test])


def summarize(outcomes: Iterable[ReplicateOutcome], failures: Iterable[ReplicateFailure],
              config: Optional[SweepConfig] = None) -> SweepSummary:
    outcomes = list(outcomes)
    failures = list(failures)
    groups: Dict[tuple, List[ReplicateOutcome]] = {}
    for o in outcomes:
        groups.setdefault((o.case, o.algorithm, o.k), []).append(o)
    nfail: Dict[tuple, int] = {}
    for f in failures:
        key = (f.case, f.algorithm, f.k)
        nfail[key] = nfail.get(key, 0) + 1
        groups.setdefault(key, [])
    cells = []
    for key in sorted(groups, key=lambda t: (t[0], t[1], t[2])):
        group = groups[key]
        if group:
            acc = accuracy(group)
            m = float(np.mean([o.mspe for o in group]))
            s = float(np.mean([o.seconds for o in group]))
        else:
            acc, m, s = float("nan"), float("nan"), float("nan")
        cells.append(SweepCell(*key, acc, m, s, nfail.get(key, 0), len(group)))
    return SweepSummary(cells, outcomes, failures, config.to_dict() if config else {})


def run_sweep(config: SweepConfig, data: Optional[DataMatrix] = None,
              progress: Optional[Callable[[int, int], None]] = None) -> SweepSummary:
    """Run all replicates of ``config`` and aggregate per (case, algorithm, k).

    With ``data`` given, each replicate is a seeded train/test split of that
    dataset and the true model is the full-data BIC choice; otherwise each
    replicate draws fresh synthetic data for every case in ``config.cases``.
    Cells that raise are counted as failures and excluded from the means.
    """
    outcomes: List[ReplicateOutcome] = []
    failures: List[ReplicateFailure] = []
    if data is not None:
        true_model = full_data_model(data, config.search)
        jobs = [("data", rep) for rep in range(config.replicates)]
    else:
        jobs = [(case, rep) for case in config.cases for rep in range(config.replicates)]
    for i, (case, rep) in enumerate(jobs):
        if data is not None:
            o, f = real_data_replicate(config, data, true_model, rep)
        else:
            o, f = simulate_replicate(config, case, rep)
        outcomes.extend(o)
        failures.extend(f)
        if progress is not None:
            progress(i + 1, len(jobs))
    if failures:
        log.warning("%d cell evaluations failed and were excluded", len(failures))
    return summarize(outcomes, failures, config)


@dataclass
class BenchTable:
    ks: Tuple[int, ...]
    algorithms: Tuple[str, ...]
    seconds: Dict[Tuple[str, int], float]
    runs: int

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", *self.algorithms])
            for k in self.ks:
                w.writerow([k, *(repr(self.seconds[(a, k)]) for a in self.algorithms)])


def bench_timing(n: int = 10_000, p: int = 7, ks: Sequence[int] = (300, 1000),
                 algorithms: Sequence[str] = ("levss", "alg1", "alg2"), runs: int = 5,
                 seed: int = 0, case: int = 1, T: int = 10) -> BenchTable:
    """Mean wall-clock seconds of each selector on one simulated dataset.

    A warm-up call precedes the timed runs of every cell.
    """
    if runs < 5:
        raise ValueError("use at least 5 timed runs per cell")
    X = gen_covariates(CaseSpec(case, n, p, seed))
    out: Dict[Tuple[str, int], float] = {}
    for k in ks:
        for a in algorithms:
            select_subdata(X, k, a, T=T, rng_seed=seed)
            times = []
            for r in range(runs):
                t0 = time.perf_counter()
                select_subdata(X, k, a, T=T, rng_seed=[seed, r])
                times.append(time.perf_counter() - t0)
            out[(a, k)] = float(np.mean(times))
    return BenchTable(tuple(ks), tuple(algorithms), out, runs)


def plot_summary(summary: SweepSummary, outdir, prefix: str = "") -> Tuple[Path, Path]:
    """Write accuracy-vs-k and log10(MSPE)-vs-k line plots as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for metric, ylabel, fname in (
        ("accuracy", "accuracy", "accuracy_vs_k.svg"),
        ("mean_mspe", "log10 MSPE", "log10_mspe_vs_k.svg"),
    ):
        cases = summary.cases
        fig, axes = plt.subplots(1, len(cases), figsize=(4 * len(cases), 3.4), squeeze=False)
        for ax, case in zip(axes[0], cases):
            for alg in summary.algorithms:
                ks, vals = summary.curve(case, alg, metric)
                if metric == "mean_mspe":
                    vals = np.log10(vals)
                ax.plot(ks, vals, marker="o", label=alg)
            ax.set_title(f"case {case}")
            ax.set_xlabel("k")
            ax.set_ylabel(ylabel)
        axes[0][0].legend()
        fig.tight_layout()
        path = outdir / f"{prefix}{fname}"
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths.append(path)
    return paths[0], paths[1]


def write_metadata(path, **meta) -> None:
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True, default=str))
