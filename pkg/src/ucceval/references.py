"""Reference band constructions sharing the model's ground truth and predictions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ZeroVariance

KINDS = ("constant", "random", "epsilon_perfect")


def constant_band(ds: Dataset, value: float = 1.0) -> Dataset:
    """Same predictions with every band set to ``value``.

    The curve does not depend on ``value`` (any positive constant gives the
    same operating points up to the scale of ``k``).
    """
    if not value > 0:
        raise ValueError("constant band must be positive")
    band = np.full(len(ds), float(value))
    return ds.with_bands(band, band, name=f"{ds.name}:constant")


def random_band(ds: Dataset, seed: int = 0) -> Dataset:
    """Symmetric bands drawn i.i.d. from U(sd/3, 3*sd), sd the std of the predictions."""
    sd = float(np.std(ds.y_hat))
    if not sd > 0:
        raise ZeroVariance("y_hat")
    rng = np.random.default_rng(seed)
    band = rng.uniform(sd / 3.0, 3.0 * sd, size=len(ds))
    return ds.with_bands(band, band, name=f"{ds.name}:random")


def epsilon_perfect_band(ds: Dataset, epsilon: float, seed: int = 0) -> Dataset:
    """Symmetric bands ``|y - y_hat| + u`` with ``u`` uniform on (0, epsilon]."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    rng = np.random.default_rng(seed)
    noise = epsilon - rng.uniform(0.0, epsilon, size=len(ds))  # (0, epsilon]
    band = np.abs(ds.error) + noise
    return ds.with_bands(band, band, name=f"{ds.name}:epsilon_perfect")


@dataclass(frozen=True)
class ReferenceSpec:
    kind: str = "constant"
    epsilon: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown reference kind {self.kind!r}")
        if self.kind == "epsilon_perfect" and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def apply(self, ds: Dataset) -> Dataset:
        if self.kind == "constant":
            return constant_band(ds)
        if self.kind == "random":
            return random_band(ds, self.seed)
        return epsilon_perfect_band(ds, self.epsilon, self.seed)
