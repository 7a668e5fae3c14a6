"""Cost metrics of a dataset whose bands are scaled by a common factor.

A :class:`ScaledView` pairs a dataset with a scale ``k``; the bounds it
describes are ``[y_hat - k*z_lower, y_hat + k*z_upper]``. No scaled copy of
the data is ever materialized.

Capture is boundary inclusive. It is decided by comparing each record's
critical scale with ``k`` rather than by recomputing the bounds, which is
the same closed-interval test in exact arithmetic and keeps a record
captured at its own critical scale regardless of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import AsymmetricBands


@dataclass(frozen=True)
class ScaledView:
    base: Dataset
    k: float

    def __post_init__(self):
        k = float(self.k)
        if not (k >= 0 and np.isfinite(k)):
            raise ValueError(f"scale must be finite and nonnegative, got {self.k!r}")
        object.__setattr__(self, "k", k)

    @property
    def lower(self) -> np.ndarray:
        return self.base.y_hat - self.k * self.base.z_lower

    @property
    def upper(self) -> np.ndarray:
        return self.base.y_hat + self.k * self.base.z_upper

    @property
    def captured(self) -> np.ndarray:
        return self.base.critical <= self.k


def view(ds: Dataset, k: float = 1.0) -> ScaledView:
    return ScaledView(ds, k)


def _gaps(v: ScaledView):
    ds = v.base
    err = ds.error
    return err + v.k * ds.z_lower, v.k * ds.z_upper - err


def miss_rate(v: ScaledView) -> float:
    """Fraction of records outside their scaled interval."""
    return float(np.count_nonzero(~v.captured)) / len(v.base)


def bandwidth(v: ScaledView) -> float:
    """Half the mean interval width; exactly ``k`` times the unscaled value."""
    ds = v.base
    return v.k * float(np.mean((ds.z_lower + ds.z_upper) / 2.0))


def excess(v: ScaledView) -> float:
    """Mean slack of the nearer bound over captured records (missed ones add 0)."""
    lo_gap, hi_gap = _gaps(v)
    slack = np.maximum(np.minimum(lo_gap, hi_gap), 0.0)
    return float(np.sum(np.where(v.captured, slack, 0.0))) / len(v.base)


def deficit(v: ScaledView) -> float:
    """Mean distance to the nearer bound over missed records (captured ones add 0)."""
    lo_gap, hi_gap = _gaps(v)
    short = np.minimum(np.abs(lo_gap), np.abs(hi_gap))
    return float(np.sum(np.where(v.captured, 0.0, short))) / len(v.base)


def full_width(v: ScaledView) -> float:
    """Mean interval width, ``2 * bandwidth``."""
    return 2.0 * bandwidth(v)


def mae_at_scale(ds: Dataset, k: float) -> float:
    """Mean of ``| |y - y_hat| - k*z |`` for symmetric bands ``z``."""
    if not ds.symmetric:
        idx = int(np.nonzero(ds.z_lower != ds.z_upper)[0][0])
        raise AsymmetricBands(idx)
    return float(np.mean(np.abs(np.abs(ds.error) - k * ds.z_upper)))


def interval_score(v: ScaledView, alpha: float) -> float:
    """Mean interval score at level ``alpha`` of the scaled bounds.

    ``(u - l) + (2/alpha)(l - y)_+ + (2/alpha)(y - u)_+`` averaged over
    records (Gneiting & Raftery, 2007).
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    y = v.base.y
    lo, hi = v.lower, v.upper
    pen = np.maximum(lo - y, 0.0) + np.maximum(y - hi, 0.0)
    return float(np.mean((hi - lo) + (2.0 / alpha) * pen))


METRICS = {
    "miss_rate": miss_rate,
    "bandwidth": bandwidth,
    "excess": excess,
    "deficit": deficit,
}


def evaluate(v: ScaledView, name: str) -> float:
    try:
        return METRICS[name](v)
    except KeyError:
        raise ValueError(f"unknown metric {name!r}") from None
