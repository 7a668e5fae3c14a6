"""Prediction-interval datasets: validation, ingestion and normalization."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._pykernels import critical_ratios
from .errors import (
    BoundOrderViolation,
    EmptyDataset,
    IngestionError,
    LengthMismatch,
    MissingColumn,
    NegativeBand,
    NonFiniteValue,
    ParseError,
    ZeroVariance,
)

FIELDS = ("y", "y_hat", "z_lower", "z_upper")
COLUMNS = {
    "bands": ("y", "y_hat", "z_lower", "z_upper"),
    "bounds": ("y", "y_hat", "lower", "upper"),
}
NORMALIZATIONS = ("none", "std_units")


@dataclass(frozen=True)
class PredictionRecord:
    """One observation with its point prediction and nonnegative bands."""

    y: float
    y_hat: float
    z_lower: float
    z_upper: float

    @property
    def lower(self) -> float:
        return self.y_hat - self.z_lower

    @property
    def upper(self) -> float:
        return self.y_hat + self.z_upper


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Validated, immutable collection of prediction records.

    Columns are stored as read-only float64 arrays. ``scale`` is the divisor
    applied by :func:`normalize_std` (1.0 when ``normalization == "none"``).
    Construct through :func:`validate`, :func:`from_arrays` or
    :func:`from_bounds`; the constructor itself does not check invariants.
    """

    y: np.ndarray
    y_hat: np.ndarray
    z_lower: np.ndarray
    z_upper: np.ndarray
    name: str = "model"
    normalization: str = "none"
    scale: float = 1.0
    # absolute bounds as ingested, kept so that reconstruction is exact
    bounds: tuple | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return self.y.shape[0]

    def __iter__(self):
        return iter(self.records)

    @property
    def records(self) -> list[PredictionRecord]:
        return [
            PredictionRecord(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(self.y, self.y_hat, self.z_lower, self.z_upper)
        ]

    @property
    def error(self) -> np.ndarray:
        """Signed residual ``y - y_hat``."""
        return self.y - self.y_hat

    @property
    def lower(self) -> np.ndarray:
        if self.bounds is not None:
            return self.bounds[0]
        return self.y_hat - self.z_lower

    @property
    def upper(self) -> np.ndarray:
        if self.bounds is not None:
            return self.bounds[1]
        return self.y_hat + self.z_upper

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.z_lower, self.z_upper))

    @cached_property
    def critical(self) -> np.ndarray:
        # shared by the capture predicate and the curve builder
        out = critical_ratios(self.error, self.z_lower, self.z_upper)
        out.setflags(write=False)
        return out

    def same_base(self, other: "Dataset") -> bool:
        """True when both datasets share ground truth and point predictions."""
        return (
            len(self) == len(other)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.y_hat, other.y_hat)
        )

    def with_bands(self, z_lower, z_upper, name: str | None = None) -> "Dataset":
        """Copy with replaced bands (same ``y``, ``y_hat`` and normalization)."""
        return from_arrays(
            self.y,
            self.y_hat,
            z_lower,
            z_upper,
            name=self.name if name is None else name,
            normalization=self.normalization,
            scale=self.scale,
        )

    def subset(self, mask) -> "Dataset":
        mask = np.asarray(mask)
        ds = from_arrays(
            self.y[mask],
            self.y_hat[mask],
            self.z_lower[mask],
            self.z_upper[mask],
            name=self.name,
            normalization=self.normalization,
            scale=self.scale,
        )
        if self.bounds is None:
            return ds
        lo, hi = (_readonly(b[mask]) for b in self.bounds)
        return Dataset(ds.y, ds.y_hat, ds.z_lower, ds.z_upper, name=ds.name,
                       normalization=ds.normalization, scale=ds.scale, bounds=(lo, hi))

    def renamed(self, name: str) -> "Dataset":
        return Dataset(
            self.y, self.y_hat, self.z_lower, self.z_upper,
            name=name, normalization=self.normalization, scale=self.scale,
            bounds=self.bounds,
        )


def _check(y, y_hat, z_lower, z_upper):
    n = y.shape[0]
    if n == 0:
        raise EmptyDataset()
    cols = (y, y_hat, z_lower, z_upper)
    bad = ~np.isfinite(np.stack(cols))
    if bad.any():
        # first offending record, then first offending field within it
        idx = int(np.nonzero(bad.any(axis=0))[0][0])
        fld = FIELDS[int(np.nonzero(bad[:, idx])[0][0])]
        raise NonFiniteValue(idx, fld)
    neg = (z_lower < 0) | (z_upper < 0)
    if neg.any():
        raise NegativeBand(int(np.nonzero(neg)[0][0]))


def from_arrays(
    y,
    y_hat,
    z_lower,
    z_upper,
    name: str = "model",
    normalization: str = "none",
    scale: float = 1.0,
) -> Dataset:
    """Build a validated :class:`Dataset` from four equal-length columns."""
    cols = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in (y, y_hat, z_lower, z_upper)]
    if any(c.ndim != 1 for c in cols):
        raise IngestionError("columns must be one-dimensional; flatten multi-output data first")
    lengths = [c.shape[0] for c in cols]
    if len(set(lengths)) != 1:
        raise LengthMismatch(lengths)
    _check(*cols)
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if normalization == "std_units" and not scale > 0:
        raise ValueError("std_units normalization requires a positive divisor")
    return Dataset(*(_readonly(c) for c in cols), name=name,
                   normalization=normalization, scale=float(scale))


def validate(records: Iterable, name: str = "model") -> Dataset:
    """Validate a sequence of records.

    Each item may be a :class:`PredictionRecord`, a mapping with the keys
    ``y, y_hat, z_lower, z_upper``, or a 4-tuple in that order.
    """
    rows = []
    for r in records:
        if isinstance(r, PredictionRecord):
            rows.append((r.y, r.y_hat, r.z_lower, r.z_upper))
        elif isinstance(r, dict):
            rows.append(tuple(r[f] for f in FIELDS))
        else:
            rows.append(tuple(r))
    if not rows:
        raise EmptyDataset()
    arr = np.asarray(rows, dtype=np.float64).reshape(len(rows), 4)
    return from_arrays(*arr.T, name=name)


def from_bounds(y, y_hat, lower, upper, name: str = "model") -> Dataset:
    """Convert absolute bounds to bands ``z_lower = y_hat - lower``, ``z_upper = upper - y_hat``."""
    cols = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in (y, y_hat, lower, upper)]
    lengths = [c.shape[0] for c in cols]
    if len(set(lengths)) != 1:
        raise LengthMismatch(lengths)
    y, y_hat, lower, upper = cols
    if y.shape[0] == 0:
        raise EmptyDataset()
    with np.errstate(invalid="ignore"):
        bad = ~((lower <= y_hat) & (y_hat <= upper))
    finite = np.isfinite(np.stack(cols)).all(axis=0)
    bad &= finite  # non-finite values are reported by validation instead
    if bad.any():
        raise BoundOrderViolation(int(np.nonzero(bad)[0][0]))
    ds = from_arrays(y, y_hat, y_hat - lower, upper - y_hat, name=name)
    return Dataset(ds.y, ds.y_hat, ds.z_lower, ds.z_upper, name=name,
                   bounds=(_readonly(lower), _readonly(upper)))


def to_bounds(ds: Dataset) -> tuple[np.ndarray, np.ndarray]:
    return ds.lower, ds.upper


def normalize_std(ds: Dataset) -> Dataset:
    """Express every column in units of the population std deviation of ``y``."""
    sd = float(np.std(ds.y))
    if not sd > 0:
        raise ZeroVariance("y")
    return Dataset(
        _readonly(ds.y / sd),
        _readonly(ds.y_hat / sd),
        _readonly(ds.z_lower / sd),
        _readonly(ds.z_upper / sd),
        name=ds.name,
        normalization="std_units",
        scale=ds.scale * sd,
    )


# -- file formats -----------------------------------------------------------


def _detect_mode(header: Sequence[str]) -> str:
    cols = set(header)
    for mode in ("bands", "bounds"):
        if set(COLUMNS[mode]) <= cols:
            return mode
    for name in ("y", "y_hat"):
        if name not in cols:
            raise MissingColumn(name)
    raise MissingColumn("z_lower" if "lower" not in cols else "upper")


def _assemble(columns: dict, mode: str, name: str) -> Dataset:
    if mode == "bands":
        return from_arrays(columns["y"], columns["y_hat"], columns["z_lower"],
                           columns["z_upper"], name=name)
    return from_bounds(columns["y"], columns["y_hat"], columns["lower"],
                       columns["upper"], name=name)


def load_csv(path, column_mode: str = "bands", name: str | None = None) -> Dataset:
    """Read a dataset from CSV.

    ``column_mode`` is ``"bands"`` (``y,y_hat,z_lower,z_upper``), ``"bounds"``
    (``y,y_hat,lower,upper``) or ``"auto"``. Lines starting with ``#`` are
    comments. Row order is preserved; line numbers in errors are 1-based
    physical lines.
    """
    path = Path(path)
    if name is None:
        name = path.stem
    with path.open(newline="", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    reader = csv.reader(lines)
    header = None
    rows: list[tuple[int, list[str]]] = []
    for lineno, row in enumerate(reader, start=1):
        if not row or not "".join(row).strip():
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if header is None:
            header = [h.strip() for h in row]
            continue
        rows.append((lineno, row))
    if header is None:
        raise IngestionError(f"{path}: no header row")
    mode = _detect_mode(header) if column_mode == "auto" else column_mode
    if mode not in COLUMNS:
        raise ValueError(f"unknown column mode {column_mode!r}")
    for col in COLUMNS[mode]:
        if col not in header:
            raise MissingColumn(col)
    idx = [header.index(c) for c in COLUMNS[mode]]
    values = np.empty((len(rows), 4))
    for r, (lineno, row) in enumerate(rows):
        if len(row) != len(header):
            raise ParseError(lineno, f"expected {len(header)} fields, got {len(row)}")
        try:
            values[r] = [float(row[i]) for i in idx]
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    if not rows:
        raise EmptyDataset()
    return _assemble(dict(zip(COLUMNS[mode], values.T)), mode, name)


def _fmt(v: float) -> str:
    return repr(float(v))


def _columns(ds: Dataset, column_mode: str):
    if column_mode == "bands":
        return ds.y, ds.y_hat, ds.z_lower, ds.z_upper
    return ds.y, ds.y_hat, ds.lower, ds.upper


def format_csv(ds: Dataset, column_mode: str = "bands", comments: Sequence[str] = ()) -> str:
    """CSV text for ``ds``; floats use ``repr`` so a reload is bit-exact in bands mode."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(COLUMNS[column_mode]))
    lines += [",".join(_fmt(v) for v in row) for row in zip(*_columns(ds, column_mode))]
    return "\n".join(lines) + "\n"


def save_csv(ds: Dataset, path, column_mode: str = "bands", comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_csv(ds, column_mode, comments), encoding="utf-8")


def load_json(path, name: str | None = None) -> Dataset:
    """Read a JSON array of objects carrying the bands or bounds keys."""
    path = Path(path)
    try:
        items = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(items, list):
        raise IngestionError(f"{path}: expected a JSON array of objects")
    if not items:
        raise EmptyDataset()
    mode = _detect_mode(list(items[0].keys()))
    columns = {c: [] for c in COLUMNS[mode]}
    for i, obj in enumerate(items):
        for c in COLUMNS[mode]:
            if c not in obj:
                raise MissingColumn(c)
            v = obj[c]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(i + 1, f"{c} is not a number")
            columns[c].append(v)
    return _assemble(columns, mode, path.stem if name is None else name)


def format_json(ds: Dataset, column_mode: str = "bands") -> str:
    cols = COLUMNS[column_mode]
    items = [dict(zip(cols, map(float, row))) for row in zip(*_columns(ds, column_mode))]
    return json.dumps(items, indent=1) + "\n"


def save_json(ds: Dataset, path, column_mode: str = "bands") -> None:
    Path(path).write_text(format_json(ds, column_mode), encoding="utf-8")


def load(path, column_mode: str = "auto", name: str | None = None) -> Dataset:
    """Dispatch on extension: ``.json`` goes to :func:`load_json`, anything else to CSV."""
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"{path}: no such file")
    if path.suffix.lower() == ".json":
        return load_json(path, name=name)
    return load_csv(path, column_mode=column_mode, name=name)
