"""Uncertainty Characteristics Curves.

A curve is traced by sweeping a common scale ``k`` over the bands of a
dataset and recording one (x-cost, y-cost) pair per scale. Only the
per-record critical scales matter: between two consecutive critical scales
the set of captured records does not change, so the curve is fully
described by its values there plus the ``k = 0`` anchor.

Areas are exact integrals of the traced curve. With the miss rate on the
y-axis the curve is a step function and the area is the left-endpoint
rectangle sum, which equals the mean of the x-metric over the records'
critical scales. With the deficit on the y-axis both coordinates are
piecewise linear in ``k``; the area is integrated exactly over the
critical scales refined by the points where a captured record's nearer
bound switches sides.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .data import Dataset
from .errors import (
    AllScalesInfinite,
    InfiniteScalesPresent,
    InvalidRange,
    MismatchedBase,
    TargetUnreachable,
    UnsupportedAxes,
    ZeroReferenceArea,
)

X_METRICS = ("bandwidth", "excess")
Y_METRICS = ("miss_rate", "deficit")
SUPPORTED_AXES = (
    ("bandwidth", "miss_rate"),
    ("excess", "deficit"),
    ("excess", "miss_rate"),
)


@dataclass(frozen=True)
class Axes:
    x: str = "bandwidth"
    y: str = "miss_rate"

    def __post_init__(self):
        if (self.x, self.y) not in SUPPORTED_AXES:
            pairs = ", ".join(f"{a}:{b}" for a, b in SUPPORTED_AXES)
            raise UnsupportedAxes(f"unsupported axis pair {self.x}:{self.y} (supported: {pairs})")

    @classmethod
    def parse(cls, text: "str | Axes | tuple") -> "Axes":
        if isinstance(text, Axes):
            return text
        if isinstance(text, tuple):
            return cls(*text)
        parts = text.split(":")
        if len(parts) != 2:
            raise UnsupportedAxes(f"axes must look like 'x:y', got {text!r}")
        return cls(parts[0].strip(), parts[1].strip())

    def __str__(self) -> str:
        return f"{self.x}:{self.y}"


DEFAULT_AXES = Axes()


@dataclass(frozen=True)
class OperatingPoint:
    k: float
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class CriticalScaleSet:
    scales: np.ndarray

    def __len__(self):
        return self.scales.shape[0]

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.scales)

    @property
    def n_infinite(self) -> int:
        return int(np.count_nonzero(~self.finite))


def critical_scales(ds: Dataset) -> CriticalScaleSet:
    """Per-record critical scales, in record order."""
    return CriticalScaleSet(ds.critical)


@dataclass(frozen=True, eq=False)
class UccCurve:
    """Operating points sorted by scale, anchored at ``k = 0``.

    ``source`` is the dataset the curve was traced from; it is needed for
    exact areas on deficit axes and for comparability checks.
    """

    axes: Axes
    k: np.ndarray
    x: np.ndarray
    y: np.ndarray
    n: int
    n_infinite: int
    source: Dataset
    model: str = "model"
    dataset: str = ""
    backend: str | None = None

    def __len__(self) -> int:
        return self.k.shape[0]

    @property
    def points(self) -> list[OperatingPoint]:
        return [OperatingPoint(float(a), float(b), float(c)) for a, b, c in zip(self.k, self.x, self.y)]

    @property
    def floor(self) -> float:
        """y-value beyond the last finite critical scale."""
        return float(self.y[-1])

    @cached_property
    def polyline(self) -> tuple[np.ndarray, np.ndarray]:
        """Vertices of the traced curve in (x, y), suitable for drawing and integration."""
        if self.axes.y == "miss_rate":
            # horizontal run at y_j up to x_{j+1}, then the drop
            m = len(self)
            xs = np.empty(2 * m - 1)
            ys = np.empty(2 * m - 1)
            xs[0::2] = self.x
            ys[0::2] = self.y
            xs[1::2] = self.x[1:]
            ys[1::2] = self.y[:-1]
            return xs, ys
        ks = _refined_scales(self.source, self.k)
        xs, ys = _evaluate(self.source, ks, self.axes, self.backend)
        return xs, ys

    def finite_part(self) -> "UccCurve":
        """Curve traced over the records with finite critical scale only."""
        if self.n_infinite == 0:
            return self
        mask = np.isfinite(self.source.critical)
        return build_ucc(self.source.subset(mask), self.axes, dataset=self.dataset,
                         backend=self.backend)


def _refined_scales(ds: Dataset, ks: np.ndarray) -> np.ndarray:
    # between critical scales the excess of a captured record is
    # min(err + k*lo, k*up - err); it bends where both sides are equal
    err, lo, up = ds.error, ds.z_lower, ds.z_upper
    crit = ds.critical
    diff = up - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        bend = np.where(diff != 0, 2.0 * err / diff, np.nan)
    kmax = ks[-1]
    ok = np.isfinite(bend) & np.isfinite(crit) & (bend > crit) & (bend < kmax)
    if not ok.any():
        return ks
    return np.union1d(ks, bend[ok])


def _evaluate(ds: Dataset, ks: np.ndarray, axes: Axes, backend=None):
    n = len(ds)
    if axes == DEFAULT_AXES:
        crit_sorted = np.sort(ds.critical)
        n_captured = np.searchsorted(crit_sorted, ks, side="right")
        half_width = float(np.mean((ds.z_lower + ds.z_upper) / 2.0))
        return ks * half_width, (n - n_captured) / n
    n_missed, exc, dfc = _backend.scale_sums(ds.error, ds.z_lower, ds.z_upper, ds.critical,
                                             ks, backend=backend)
    xs = exc / n
    ys = n_missed / n if axes.y == "miss_rate" else dfc / n
    return xs, ys


def build_ucc(
    ds: Dataset,
    axes: "Axes | str" = DEFAULT_AXES,
    *,
    dataset: str = "",
    backend: str | None = None,
) -> UccCurve:
    """Trace the curve of ``ds`` on the given axes.

    One operating point per distinct finite critical scale plus the
    ``k = 0`` anchor; tied scales collapse into a single point at which all
    tied records are captured together. Bandwidth/miss-rate curves take an
    O(N log N) path, the other axis pairs evaluate every record at every
    critical scale (O(N^2)).
    """
    axes = Axes.parse(axes)
    crit = ds.critical
    finite = np.isfinite(crit)
    if not finite.any():
        raise AllScalesInfinite()
    ks = np.unique(crit[finite])
    if ks[0] != 0.0:
        ks = np.concatenate(([0.0], ks))
    xs, ys = _evaluate(ds, ks, axes, backend)
    for a in (ks, xs, ys):
        a.setflags(write=False)
    return UccCurve(
        axes=axes,
        k=ks,
        x=xs,
        y=ys,
        n=len(ds),
        n_infinite=int(np.count_nonzero(~finite)),
        source=ds,
        model=ds.name,
        dataset=dataset,
        backend=backend,
    )


# -- areas -------------------------------------------------------------------


def _check_finite(curve: UccCurve, exclude_infinite: bool) -> UccCurve:
    if curve.n_infinite:
        if not exclude_infinite:
            raise InfiniteScalesPresent(curve.n_infinite)
        return curve.finite_part()
    return curve


def auucc(curve: UccCurve, *, exclude_infinite: bool = False, method: str = "step") -> float:
    """Area under the curve.

    ``method="step"`` (default) integrates the traced curve exactly.
    ``method="right"`` is the right-endpoint rectangle sum over the
    operating points, kept for comparison; it undershoots by O(1/N).
    """
    curve = _check_finite(curve, exclude_infinite)
    if method == "step":
        xs, ys = curve.polyline
        return float(np.sum(np.diff(xs) * (ys[:-1] + ys[1:]) / 2.0))
    if method == "right":
        return float(np.sum(np.diff(curve.x) * curve.y[1:]))
    raise ValueError(f"unknown method {method!r}")


def partial_auucc(curve: UccCurve, y_lo: float, y_hi: float, *,
                  exclude_infinite: bool = False) -> float:
    """Area of the part of the curve whose y-value lies in ``[y_lo, y_hi]``.

    The curve is integrated as traced (steps stay steps); only the
    x-positions at which the curve is inside the band contribute.
    """
    y_lo, y_hi = float(y_lo), float(y_hi)
    upper_limit = 1.0 if curve.axes.y == "miss_rate" else np.inf
    if not (0.0 <= y_lo < y_hi <= upper_limit):
        raise InvalidRange(f"need 0 <= lo < hi <= {upper_limit:g}, got [{y_lo:g}, {y_hi:g}]")
    if curve.n_infinite and y_lo <= curve.floor <= y_hi:
        curve = _check_finite(curve, exclude_infinite)
    elif curve.n_infinite and exclude_infinite:
        curve = curve.finite_part()
    xs, ys = curve.polyline
    x0, x1, y0, y1 = xs[:-1], xs[1:], ys[:-1], ys[1:]
    dx = x1 - x0
    flat = y0 == y1
    with np.errstate(divide="ignore", invalid="ignore"):
        # parameter t in [0, 1] along each sloped segment where y is in range
        ta = (y_lo - y0) / (y1 - y0)
        tb = (y_hi - y0) / (y1 - y0)
    t0 = np.clip(np.minimum(ta, tb), 0.0, 1.0)
    t1 = np.clip(np.maximum(ta, tb), 0.0, 1.0)
    ya = y0 + t0 * (y1 - y0)
    yb = y0 + t1 * (y1 - y0)
    sloped = dx * (t1 - t0) * (ya + yb) / 2.0
    inside = (y0 >= y_lo) & (y0 <= y_hi)
    terms = np.where(flat, np.where(inside, dx * (y0 + y0) / 2.0, 0.0),
                     np.where(t1 > t0, sloped, 0.0))
    return float(np.sum(terms))


def _comparable(model: UccCurve, reference: UccCurve):
    if model.axes != reference.axes:
        raise MismatchedBase(f"axes differ ({model.axes} vs {reference.axes})")
    if model.source.normalization != reference.source.normalization:
        raise MismatchedBase("normalization differs")
    if not model.source.same_base(reference.source):
        raise MismatchedBase()


def auucc_gain(
    model: UccCurve,
    reference: UccCurve,
    *,
    partial: tuple[float, float] | None = None,
    exclude_infinite: bool = False,
) -> float:
    """Percent reduction of the model's area relative to the reference's.

    With ``exclude_infinite`` the records with infinite critical scale in
    either curve are dropped from both before comparing.
    """
    _comparable(model, reference)
    if exclude_infinite and (model.n_infinite or reference.n_infinite):
        keep = np.isfinite(model.source.critical) & np.isfinite(reference.source.critical)
        model = build_ucc(model.source.subset(keep), model.axes, backend=model.backend)
        reference = build_ucc(reference.source.subset(keep), reference.axes,
                              backend=reference.backend)
    if partial is None:
        a_ref, a_mod = auucc(reference), auucc(model)
    else:
        a_ref = partial_auucc(reference, *partial)
        a_mod = partial_auucc(model, *partial)
    if a_ref == 0:
        raise ZeroReferenceArea()
    return (a_ref - a_mod) / a_ref * 100.0


# -- operating points --------------------------------------------------------


def cost(point: OperatingPoint, c: float) -> float:
    """Linear cost ``c*x + (1 - c)*y``."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"cost weight must lie in [0, 1], got {c!r}")
    return c * point.x + (1.0 - c) * point.y


def optimal_operating_point(curve: UccCurve, c: float) -> tuple[OperatingPoint, float]:
    """Curve point of least cost; ties go to the smaller scale."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"cost weight must lie in [0, 1], got {c!r}")
    costs = c * curve.x + (1.0 - c) * curve.y
    j = int(np.argmin(costs))
    return OperatingPoint(float(curve.k[j]), float(curve.x[j]), float(curve.y[j])), float(costs[j])


def op_at_miss_rate(curve: UccCurve, target: float) -> OperatingPoint:
    """Smallest-scale point whose miss rate does not exceed ``target``."""
    if curve.axes.y != "miss_rate":
        raise UnsupportedAxes("op_at_miss_rate needs the miss rate on the y-axis")
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target miss rate must lie in [0, 1], got {target!r}")
    hit = np.nonzero(curve.y <= target)[0]
    if hit.size == 0:
        raise TargetUnreachable(target, curve.floor)
    j = int(hit[0])
    return OperatingPoint(float(curve.k[j]), float(curve.x[j]), float(curve.y[j]))


# -- export ------------------------------------------------------------------


def _fmt(v: float) -> str:
    return repr(float(v))


def curve_header(curve: UccCurve) -> str:
    return f"# axes={curve.axes} n={curve.n} n_infinite={curve.n_infinite}"


def to_csv(curves: "UccCurve | Iterable[UccCurve]") -> str:
    """CSV text: per curve a ``# model=`` line, the axes comment line, ``k,x,y`` and rows."""
    if isinstance(curves, UccCurve):
        curves = [curves]
    out = io.StringIO()
    for curve in curves:
        out.write(f"# model={curve.model}\n")
        out.write(curve_header(curve) + "\n")
        out.write("k,x,y\n")
        for k, x, y in zip(curve.k, curve.x, curve.y):
            out.write(f"{_fmt(k)},{_fmt(x)},{_fmt(y)}\n")
    return out.getvalue()


def to_dict(curve: UccCurve) -> dict:
    return {
        "model": curve.model,
        "dataset": curve.dataset,
        "axes": str(curve.axes),
        "n": curve.n,
        "n_infinite": curve.n_infinite,
        "normalization": curve.source.normalization,
        "points": [{"k": float(k), "x": float(x), "y": float(y)}
                   for k, x, y in zip(curve.k, curve.x, curve.y)],
    }


def to_json(curves: "UccCurve | Sequence[UccCurve]") -> str:
    if isinstance(curves, UccCurve):
        curves = [curves]
    return json.dumps([to_dict(c) for c in curves], indent=2) + "\n"


@dataclass(frozen=True)
class CurveTable:
    """A curve read back from its CSV export (points only, no source data)."""

    model: str
    axes: Axes
    n: int
    n_infinite: int
    k: np.ndarray
    x: np.ndarray
    y: np.ndarray


def read_csv(text: str) -> list[CurveTable]:
    """Parse the output of :func:`to_csv`."""
    tables = []
    cur = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("# model="):
            cur = {"model": line[len("# model="):], "rows": []}
            tables.append(cur)
        elif line.startswith("# axes="):
            if cur is None or "axes" in cur:
                cur = {"model": "curve", "rows": []}
                tables.append(cur)
            fields = dict(tok.split("=", 1) for tok in line[2:].split())
            cur["axes"] = Axes.parse(fields["axes"])
            cur["n"] = int(fields["n"])
            cur["n_infinite"] = int(fields["n_infinite"])
        elif line == "k,x,y" or line.startswith("#"):
            continue
        else:
            if cur is None:
                raise ValueError("curve rows before header")
            cur["rows"].append([float(v) for v in line.split(",")])
    out = []
    for t in tables:
        rows = np.array(t["rows"], dtype=float).reshape(-1, 3)
        out.append(CurveTable(t["model"], t.get("axes", DEFAULT_AXES), t.get("n", 0),
                              t.get("n_infinite", 0), rows[:, 0], rows[:, 1], rows[:, 2]))
    return out
