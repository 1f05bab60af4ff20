"""
Dataset ingestion and the two preprocessing conventions used before
selection and fitting: per-column min-max scaling to ``[-1, 1]`` and
centering for intercept-free least squares.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, MissingColumn, ParseError


@dataclass
class DataMatrix:
    """Covariates ``X`` (n x p) with an optional response ``y``."""

    X: np.ndarray
    y: Optional[np.ndarray] = None
    column_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2:
            raise DimensionMismatch(f"X must be 2-D, got shape {self.X.shape}")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("X contains non-finite entries")
        if self.y is not None:
            self.y = np.asarray(self.y, dtype=float).ravel()
            if self.y.shape[0] != self.X.shape[0]:
                raise DimensionMismatch(
                    f"y has {self.y.shape[0]} entries, X has {self.X.shape[0]} rows"
                )
            if not np.all(np.isfinite(self.y)):
                raise ValueError("y contains non-finite entries")
        if not self.column_names:
            self.column_names = [f"x{j + 1}" for j in range(self.X.shape[1])]
        elif len(self.column_names) != self.X.shape[1]:
            raise DimensionMismatch("column_names length differs from X columns")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def subset(self, rows) -> "DataMatrix":
        rows = np.asarray(rows)
        y = None if self.y is None else self.y[rows]
        return DataMatrix(self.X[rows], y, list(self.column_names))


@dataclass
class ScaleMap:
    """Per-column minima and maxima of a ``[-1, 1]`` scaling.

    ``constant`` flags columns with ``max == min``; those map to zero.
    """

    mins: np.ndarray
    maxs: np.ndarray

    @property
    def constant(self) -> np.ndarray:
        return self.maxs == self.mins

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = np.where(self.constant, 1.0, self.maxs - self.mins)
        out = 2.0 * (X - self.mins) / span - 1.0
        out[:, self.constant] = 0.0
        return out

    def inverse(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        out = self.mins + (Z + 1.0) * 0.5 * (self.maxs - self.mins)
        out[:, self.constant] = self.mins[self.constant]
        return out

    def to_dict(self) -> dict:
        return {"kind": "minmax", "mins": self.mins.tolist(), "maxs": self.maxs.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "ScaleMap":
        return cls(np.asarray(d["mins"], dtype=float), np.asarray(d["maxs"], dtype=float))


@dataclass
class CenterMap:
    """Column means of ``X`` and, when available, the mean of ``y``."""

    x_means: np.ndarray
    y_mean: Optional[float] = None

    def transform(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) - self.x_means

    def to_dict(self) -> dict:
        return {"kind": "center", "x_means": self.x_means.tolist(), "y_mean": self.y_mean}

    @classmethod
    def from_dict(cls, d: dict) -> "CenterMap":
        y_mean = d.get("y_mean")
        return cls(np.asarray(d["x_means"], dtype=float), None if y_mean is None else float(y_mean))


def scale_to_unit_interval(d: DataMatrix) -> Tuple[DataMatrix, ScaleMap]:
    """Map every column affinely so its minimum is -1 and its maximum is 1.

    Constant columns become all zeros and are flagged in the returned map.
    The response is left untouched.
    """
    if d.n < 2:
        raise ValueError("need at least two rows to scale")
    smap = ScaleMap(d.X.min(axis=0), d.X.max(axis=0))
    return DataMatrix(smap.transform(d.X), d.y, list(d.column_names)), smap


def centralize(d: DataMatrix) -> Tuple[DataMatrix, CenterMap]:
    """Subtract column means from ``X`` and the mean from ``y``."""
    if d.n < 2:
        raise ValueError("need at least two rows to centralize")
    x_means = d.X.mean(axis=0)
    Xc = d.X - x_means
    # second pass removes the rounding left by the first subtraction
    Xc -= Xc.mean(axis=0)
    y_mean = None
    yc = None
    if d.y is not None:
        y_mean = float(d.y.mean())
        yc = d.y - y_mean
        yc -= yc.mean()
    return DataMatrix(Xc, yc, list(d.column_names)), CenterMap(x_means, y_mean)


def load_csv(path, response_column: Optional[str] = None) -> DataMatrix:
    """Read a numeric CSV file with a header row.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    ParseError
        On a non-numeric cell or a row of the wrong length.
    MissingColumn
        If ``response_column`` is not in the header.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        width = len(header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise ParseError(
                    f"{path}: row {lineno} has {len(row)} fields, header has {width}"
                )
            values = []
            for name, cell in zip(header, row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: row {lineno}, column {name!r}: non-numeric value {cell!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    table = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(table)):
        raise ParseError(f"{path}: non-finite values present")
    if response_column is None:
        return DataMatrix(table, None, header)
    if response_column not in header:
        raise MissingColumn(f"{path}: no column named {response_column!r}")
    j = header.index(response_column)
    keep = [c for c in range(width) if c != j]
    return DataMatrix(table[:, keep], table[:, j], [header[c] for c in keep])


def write_csv(path, d: DataMatrix, response_name: str = "y") -> None:
    """Write ``d`` as CSV; the response, if any, is the last column."""
    header: Sequence[str] = list(d.column_names)
    table = d.X
    if d.y is not None:
        header = header + [response_name]
        table = np.column_stack([d.X, d.y])
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in table:
            w.writerow([repr(float(v)) for v in row])


def save_transform(path, *maps) -> None:
    """Store scale/center maps in a JSON sidecar file."""
    Path(path).write_text(json.dumps([m.to_dict() for m in maps], indent=2))


def load_transform(path) -> list:
    kinds = {"minmax": ScaleMap, "center": CenterMap}
    return [kinds[d["kind"]].from_dict(d) for d in json.loads(Path(path).read_text())]
