import random

import numpy as np
import pytest

from aopt_subdata.errors import DimensionMismatch
from aopt_subdata.evalkit import (
    ReplicateOutcome,
    SweepConfig,
    SweepSummary,
    accuracy,
    bench_timing,
    mspe,
    plot_summary,
    run_sweep,
    summarize,
)
from aopt_subdata.modelsel import FitResult
from aopt_subdata.preprocess import DataMatrix


def outcome(selected, true=(0, 1, 2, 3), **kw):
    base = dict(case="1", replicate=0, algorithm="alg1", k=300, mspe=0.1, seconds=0.0)
    base.update(kw)
    return ReplicateOutcome(selected_model=tuple(selected), true_model=tuple(true), **base)


class TestAccuracy:
    def test_all_match(self):
        assert accuracy([outcome((0, 1, 2, 3))] * 3) == 1.0

    def test_none_match(self):
        assert accuracy([outcome((0,)), outcome((0, 1, 2, 3, 4))]) == 0.0

    def test_three_of_four(self):
        outs = [outcome((0, 1, 2, 3)), outcome((3, 2, 1, 0)), outcome((0, 1, 2, 3)), outcome((1,))]
        assert accuracy(outs) == 0.75

    def test_permutation_invariant(self):
        rng = random.Random(0)
        outs = [outcome(rng.choice([(0, 1, 2, 3), (0, 1)])) for _ in range(40)]
        a = accuracy(outs)
        rng.shuffle(outs)
        assert accuracy(outs) == a and 0 <= a <= 1

    def test_empty(self):
        with pytest.raises(ValueError):
            accuracy([])


class TestMspe:
    def fit(self, beta, b0, model=(0, 1)):
        return FitResult(tuple(model), np.asarray(beta, float), 1.0, 0.0, 10, b0)

    def test_exact(self):
        X = np.random.default_rng(0).normal(size=(50, 3))
        mu = 0.25 + X[:, :2] @ [1.0, -2.0]
        assert mspe(mu, X, self.fit([1.0, -2.0], 0.25)) == pytest.approx(0.0, abs=1e-28)

    def test_constant(self):
        X = np.random.default_rng(1).normal(size=(20, 2))
        assert mspe(np.full(20, 3.0), X, self.fit([0.0, 0.0], 0.0)) == pytest.approx(9.0)

    def test_matches_loop(self):
        rng = np.random.default_rng(2)
        X, mu = rng.normal(size=(500, 7)), rng.normal(size=500)
        f = self.fit(rng.normal(size=3), 0.3, model=(1, 4, 6))
        total = 0.0
        for i in range(500):
            pred = f.intercept + sum(X[i, j] * b for j, b in zip(f.model, f.beta))
            total += (mu[i] - pred) ** 2
        assert mspe(mu, X, f) == pytest.approx(total / 500, rel=1e-12)

    def test_zero_iff_exact(self):
        X = np.random.default_rng(3).normal(size=(10, 2))
        mu = 0.25 + X @ [1.0, 1.0]
        mu[4] += 1e-3
        assert mspe(mu, X, self.fit([1.0, 1.0], 0.25)) > 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mspe(np.zeros(5), np.zeros((4, 2)), self.fit([1.0, 1.0], 0.0))
        with pytest.raises(DimensionMismatch):
            mspe(np.zeros(4), np.zeros((4, 1)), self.fit([1.0, 1.0], 0.0))


def small_config(**kw):
    base = dict(cases=(1,), algorithms=("alg1",), ks=(300,), replicates=2, n=3000, master_seed=5)
    base.update(kw)
    return SweepConfig(**base)


class TestSweep:
    def test_bookkeeping(self):
        s = run_sweep(small_config())
        assert len(s.cells) == 1
        c = s.cell(1, "alg1", 300)
        assert c.replicates == 2 and c.failures == 0
        assert len(s.outcomes) == 2
        assert c.accuracy == accuracy(s.outcomes)
        assert c.mean_mspe == pytest.approx(np.mean([o.mspe for o in s.outcomes]))

    def test_deterministic(self):
        cfg = small_config(algorithms=("levss", "alg2", "random"), ks=(100, 200), replicates=3)
        a, b = run_sweep(cfg), run_sweep(cfg)
        for ca, cb in zip(a.cells, b.cells):
            assert (ca.case, ca.algorithm, ca.k, ca.accuracy, ca.mean_mspe) == \
                (cb.case, cb.algorithm, cb.k, cb.accuracy, cb.mean_mspe)

    def test_failures_are_counted(self):
        # k above n makes every cell fail validation
        s = run_sweep(small_config(ks=(300, 5000), n=1000))
        bad = s.cell(1, "alg1", 5000)
        assert bad.failures == 2 and bad.replicates == 0
        assert s.cell(1, "alg1", 300).failures == 0
        assert len(s.failures) == 2

    def test_forward_search(self):
        s = run_sweep(small_config(search="forward"))
        assert s.cell(1, "alg1", 300).replicates == 2

    def test_real_data_mode(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(2000, 4))
        y = 1.0 + X @ [1.0, 0.8, 0.0, 0.0] + rng.normal(size=2000)
        cfg = small_config(algorithms=("alg1", "levss"), ks=(50, 150), replicates=3)
        s = run_sweep(cfg, data=DataMatrix(X, y))
        assert s.cases == ["data"]
        assert all(o.true_model == (0, 1) for o in s.outcomes)
        assert len(s.outcomes) == 12

    def test_csv_round_trip(self, tmp_path):
        s = run_sweep(small_config(algorithms=("alg1", "levss"), ks=(100, 300)))
        s.to_csv(tmp_path / "s.csv")
        header = (tmp_path / "s.csv").read_text().splitlines()[0]
        assert header == "case,algorithm,k,accuracy,mean_mspe,mean_seconds,failures,replicates"
        back = SweepSummary.from_csv(tmp_path / "s.csv")
        assert [(c.algorithm, c.k, c.accuracy, c.mean_mspe) for c in back.cells] == \
            [(c.algorithm, c.k, c.accuracy, c.mean_mspe) for c in s.cells]

    def test_plots(self, tmp_path):
        s = run_sweep(small_config(algorithms=("alg1", "levss"), ks=(100, 300)))
        acc, ms = plot_summary(s, tmp_path)
        assert acc.name == "accuracy_vs_k.svg" and ms.name == "log10_mspe_vs_k.svg"
        assert acc.read_text().lstrip().startswith("<?xml") and "<svg" in ms.read_text()

    def test_summarize_groups(self):
        outs = [outcome((0, 1, 2, 3), k=k, algorithm=a) for k in (300, 500) for a in ("alg1", "alg2")]
        s = summarize(outs, [])
        assert [(c.algorithm, c.k) for c in s.cells] == \
            [("alg1", 300), ("alg1", 500), ("alg2", 300), ("alg2", 500)]


def test_bench_table(tmp_path):
    t = bench_timing(n=2000, ks=(50, 100), runs=5)
    assert set(t.seconds) == {(a, k) for a in ("levss", "alg1", "alg2") for k in (50, 100)}
    t.to_csv(tmp_path / "b.csv")
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0] == "k,levss,alg1,alg2" and len(lines) == 3
    with pytest.raises(ValueError):
        bench_timing(n=500, ks=(50,), runs=2)
