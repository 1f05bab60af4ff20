import numpy as np
import pytest

from aopt_subdata.errors import DimensionMismatch, MissingColumn, ParseError
from aopt_subdata.modelsel import adjusted_intercept, ols_fit
from aopt_subdata.preprocess import (
    DataMatrix,
    centralize,
    load_csv,
    load_transform,
    save_transform,
    scale_to_unit_interval,
    write_csv,
)


def col(values):
    return np.asarray(values, dtype=float)[:, None]


def test_scale_midpoint():
    d, _ = scale_to_unit_interval(DataMatrix(col([0, 5, 10])))
    np.testing.assert_allclose(d.X[:, 0], [-1, 0, 1])


def test_scale_extremes_unchanged():
    x = col([-1, 1, 1, -1])
    d, _ = scale_to_unit_interval(DataMatrix(x))
    np.testing.assert_array_equal(d.X, x)


def test_constant_column_flagged():
    d, smap = scale_to_unit_interval(DataMatrix(np.column_stack([[2, 2, 2], [1, 2, 3]])))
    np.testing.assert_array_equal(d.X[:, 0], 0.0)
    assert smap.constant.tolist() == [True, False]
    np.testing.assert_array_equal(smap.inverse(d.X)[:, 0], 2.0)


def test_scale_leaves_response_and_order():
    rng = np.random.default_rng(0)
    X, y = rng.normal(size=(30, 3)), rng.normal(size=30)
    d, _ = scale_to_unit_interval(DataMatrix(X, y))
    np.testing.assert_array_equal(d.y, y)
    # rank order within each column is preserved, so rows were not permuted
    np.testing.assert_array_equal(np.argsort(d.X, axis=0), np.argsort(X, axis=0))


def test_scale_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(100):
        X = rng.normal(size=(50, 4)) * rng.uniform(0.1, 100, 4) + rng.uniform(-50, 50, 4)
        d, smap = scale_to_unit_interval(DataMatrix(X))
        assert np.max(np.abs(smap.inverse(d.X) - X) / np.abs(X).max()) <= 1e-10


def test_centralize_examples():
    d, cmap = centralize(DataMatrix(col([1, 2, 3]), [10, 20, 30]))
    np.testing.assert_allclose(d.X[:, 0], [-1, 0, 1])
    d2, cmap2 = centralize(DataMatrix(col([1, 2]), [10, 20]))
    np.testing.assert_allclose(d2.y, [-5, 5])
    assert cmap2.y_mean == 15


def test_centralize_idempotent_and_zero_mean():
    rng = np.random.default_rng(2)
    d, _ = centralize(DataMatrix(rng.normal(5, 3, size=(100, 3)), rng.normal(size=100)))
    assert np.all(np.abs(d.X.mean(axis=0)) <= 1e-10)
    assert abs(d.y.mean()) <= 1e-10
    d2, _ = centralize(d)
    np.testing.assert_allclose(d2.X, d.X, atol=1e-12)


def test_centered_fit_matches_intercept_fit():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n, p = 60, 4
        X = rng.normal(2, 1.5, size=(n, p))
        y = 1.3 + X @ rng.normal(size=p) + rng.normal(size=n)
        dc, cmap = centralize(DataMatrix(X, y))
        beta, _ = ols_fit(dc.X, dc.y)
        b0 = adjusted_intercept(cmap.y_mean, cmap.x_means, beta)
        coef, *_ = np.linalg.lstsq(np.column_stack([np.ones(n), X]), y, rcond=None)
        np.testing.assert_allclose(beta, coef[1:], atol=1e-8)
        np.testing.assert_allclose(b0 + X @ beta, np.column_stack([np.ones(n), X]) @ coef, atol=1e-8)


def test_load_csv_basic(tmp_path):
    f = tmp_path / "a.csv"
    f.write_text("a,b\n1,2\n3,4\n5,6\n")
    d = load_csv(f)
    assert d.X.shape == (3, 2) and d.y is None
    assert d.column_names == ["a", "b"]


def test_load_csv_response(tmp_path):
    f = tmp_path / "diamonds.csv"
    f.write_text("carat,price,depth\n0.2,326,61.5\n0.3,400,60.0\n")
    d = load_csv(f, "price")
    np.testing.assert_array_equal(d.y, [326, 400])
    assert d.column_names == ["carat", "depth"]
    np.testing.assert_array_equal(d.X, [[0.2, 61.5], [0.3, 60.0]])


def test_load_csv_errors(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("a,b\n1,2\n3,abc\n")
    with pytest.raises(ParseError, match="row 3.*'b'.*abc"):
        load_csv(f)
    f.write_text("a,b\n1,2,3\n")
    with pytest.raises(ParseError, match="fields"):
        load_csv(f)
    f.write_text("a,b\n1,2\n")
    with pytest.raises(MissingColumn):
        load_csv(f, "price")


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    d = DataMatrix(rng.normal(size=(5, 2)), rng.normal(size=5))
    write_csv(tmp_path / "d.csv", d)
    back = load_csv(tmp_path / "d.csv", "y")
    np.testing.assert_array_equal(back.X, d.X)
    np.testing.assert_array_equal(back.y, d.y)


def test_transform_sidecar(tmp_path):
    rng = np.random.default_rng(5)
    train = DataMatrix(rng.normal(size=(20, 3)), rng.normal(size=20))
    test = rng.normal(size=(4, 3))
    _, smap = scale_to_unit_interval(train)
    _, cmap = centralize(train)
    save_transform(tmp_path / "t.json", smap, cmap)
    smap2, cmap2 = load_transform(tmp_path / "t.json")
    np.testing.assert_array_equal(smap2.transform(test), smap.transform(test))
    np.testing.assert_array_equal(cmap2.transform(test), cmap.transform(test))
    assert cmap2.y_mean == cmap.y_mean


def test_datamatrix_validation():
    with pytest.raises(DimensionMismatch):
        DataMatrix(np.zeros((3, 2)), np.zeros(4))
    with pytest.raises(ValueError):
        DataMatrix(np.array([[np.nan, 1.0]]))
