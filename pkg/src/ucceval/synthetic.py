"""Seeded synthetic fixtures and a brute-force area oracle.

Two generators are provided:

``xsinx``
    Noisy training samples of ``x*sin(x)`` on ``[0, x_max]`` and a noise-free
    equidistant test grid. The noise is gaussian with a per-sample standard
    deviation ``noise_base + noise_slope*x + noise_spread*U(0, 1)``, i.e. its
    variance is itself random and grows with ``x``. :func:`xsinx_models`
    attaches stand-in interval predictors so no learning library is needed.

``heteroskedastic``
    ``y = f(x) + sigma(x)*eps`` with ``f(x) = x*sin(x)``, ``sigma`` linear from
    ``sigma_lo`` to ``sigma_hi`` over ``[0, x_max]`` and ``eps ~ N(0, 1)``.
    The point prediction is ``f`` itself and the bands are ``sigma(x)``, so
    the intervals are correct by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curve import Axes
from .data import Dataset, from_arrays
from .errors import InfiniteScalesPresent
from .references import constant_band, epsilon_perfect_band, random_band

KINDS = ("xsinx", "heteroskedastic")


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str = "heteroskedastic"
    n_train: int = 5000
    n_test: int = 1000
    seed: int = 0
    x_max: float | None = None  # 20 for xsinx, 10 for heteroskedastic
    noise_base: float = 0.2
    noise_slope: float = 0.1
    noise_spread: float = 1.0
    sigma_lo: float = 0.5
    sigma_hi: float = 2.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown synthetic kind {self.kind!r}")
        if self.n_train < 1 or self.n_test < 1:
            raise ValueError("sizes must be at least 1")
        if self.kind == "xsinx" and not (self.noise_base > 0 and self.noise_spread >= 0
                                         and self.noise_slope >= 0):
            raise ValueError("noise scale must be positive")
        if self.kind == "heteroskedastic" and not (0 < self.sigma_lo and 0 < self.sigma_hi):
            raise ValueError("noise scale must be positive")
        if self.x_max is None:
            object.__setattr__(self, "x_max", 20.0 if self.kind == "xsinx" else 10.0)

    def describe(self) -> str:
        if self.kind == "xsinx":
            return (f"xsinx x in [0,{self.x_max:g}] noise_sd = {self.noise_base:g} + "
                    f"{self.noise_slope:g}*x + {self.noise_spread:g}*U(0,1) seed={self.seed}")
        return (f"heteroskedastic f(x)=x*sin(x) x in [0,{self.x_max:g}] sigma(x) = "
                f"{self.sigma_lo:g} + ({self.sigma_hi:g}-{self.sigma_lo:g})*x/{self.x_max:g} "
                f"seed={self.seed}")


def xsinx(x):
    x = np.asarray(x, dtype=float)
    return x * np.sin(x)


def gen_xsinx(cfg: SyntheticSpec):
    """Return ``((x_train, y_train), (x_test, y_test))``.

    Training inputs are uniform on ``[0, x_max]``; test inputs are
    ``n_test`` equidistant points including both ends, with noise-free
    targets.
    """
    if cfg.kind != "xsinx":
        cfg = replace(cfg, kind="xsinx", x_max=None)
    rng = np.random.default_rng(cfg.seed)
    x_tr = np.sort(rng.uniform(0.0, cfg.x_max, cfg.n_train))
    sd = cfg.noise_base + cfg.noise_slope * x_tr + cfg.noise_spread * rng.random(cfg.n_train)
    y_tr = xsinx(x_tr) + rng.normal(0.0, sd)
    x_te = np.linspace(0.0, cfg.x_max, cfg.n_test)
    return (x_tr, y_tr), (x_te, xsinx(x_te))


def _binned(x, v, edges, stat):
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, len(edges) - 2)
    out = np.empty(len(edges) - 1)
    for b in range(len(edges) - 1):
        sel = v[idx == b]
        out[b] = stat(sel) if sel.size else np.nan
    # empty bins borrow from their neighbours
    good = ~np.isnan(out)
    centers = (edges[:-1] + edges[1:]) / 2
    return centers, np.interp(centers, centers[good], out[good])


def xsinx_models(cfg: SyntheticSpec, fine_bins: int = 100, coarse_bins: int = 4,
                 epsilon: float = 1e-3) -> dict[str, Dataset]:
    """Stand-in interval predictors on the ``x*sin(x)`` test grid.

    All share one point predictor: the piecewise-linear interpolant of
    training-bin means over ``fine_bins`` bins. Bands:

    ``tuned``
        per fine bin, the standard error of the bin mean;
    ``weak``
        the same quantity pooled over ``coarse_bins`` bins;
    ``constant``, ``random``, ``epsilon_perfect``
        the reference constructions.
    """
    (x_tr, y_tr), (x_te, y_te) = gen_xsinx(cfg)
    edges = np.linspace(0.0, cfg.x_max, fine_bins + 1)
    centers, means = _binned(x_tr, y_tr, edges, np.mean)
    y_hat = np.interp(x_te, centers, means)
    resid = y_tr - np.interp(x_tr, centers, means)
    per_bin = max(1.0, cfg.n_train / fine_bins)

    _, sd_fine = _binned(x_tr, resid, edges, np.std)
    tuned = np.interp(x_te, centers, sd_fine) / np.sqrt(per_bin)

    coarse_edges = np.linspace(0.0, cfg.x_max, coarse_bins + 1)
    _, sd_coarse = _binned(x_tr, resid, coarse_edges, np.std)
    idx = np.clip(np.searchsorted(coarse_edges, x_te, side="right") - 1, 0, coarse_bins - 1)
    weak = sd_coarse[idx] / np.sqrt(per_bin)

    base = from_arrays(y_te, y_hat, tuned, tuned, name="tuned")
    return {
        "tuned": base,
        "weak": base.with_bands(weak, weak, name="weak"),
        "constant": constant_band(base).renamed("constant"),
        "random": random_band(base, cfg.seed).renamed("random"),
        "epsilon_perfect": epsilon_perfect_band(base, epsilon, cfg.seed).renamed("epsilon_perfect"),
    }


def gen_heteroskedastic(cfg: SyntheticSpec) -> Dataset:
    """Dataset whose bands are the true noise standard deviation."""
    if cfg.kind != "heteroskedastic":
        cfg = replace(cfg, kind="heteroskedastic", x_max=None)
    rng = np.random.default_rng(cfg.seed)
    x = np.linspace(0.0, cfg.x_max, cfg.n_test)
    sigma = cfg.sigma_lo + (cfg.sigma_hi - cfg.sigma_lo) * x / cfg.x_max
    f = xsinx(x)
    y = f + sigma * rng.standard_normal(cfg.n_test)
    return from_arrays(y, f, sigma, sigma, name="oracle")


def brute_force_auucc(ds: Dataset, axes: "Axes | str" = "bandwidth:miss_rate",
                      grid_size: int = 100_000) -> float:
    """Area under the curve sampled on a uniform scale grid, by the trapezoid rule.

    Independent of the curve builder: the bounds are recomputed at every
    grid scale and compared with ``y`` directly. The grid runs from 0 to the
    largest scale any record needs to be captured.
    """
    axes = Axes.parse(axes)
    if grid_size < 10:
        raise ValueError("grid_size must be at least 10")
    y, y_hat, zl, zu = ds.y, ds.y_hat, ds.z_lower, ds.z_upper
    err = y - y_hat
    active = np.where(err >= 0, zu, zl)
    stuck = (active == 0) & (err != 0)
    if stuck.any():
        raise InfiniteScalesPresent(int(stuck.sum()))
    with np.errstate(divide="ignore", invalid="ignore"):
        need = np.where(active > 0, np.abs(err) / active, 0.0)
    k_max = float(need.max())
    if k_max == 0.0:
        return 0.0
    grid = np.linspace(0.0, k_max, grid_size)
    n = len(ds)
    xs = np.empty(grid_size)
    ys = np.empty(grid_size)
    step = max(1, (1 << 21) // n)
    for s in range(0, grid_size, step):
        k = grid[s:s + step, None]
        lo = y_hat - k * zl
        hi = y_hat + k * zu
        inside = (lo <= y) & (y <= hi)
        if axes.x == "bandwidth":
            xs[s:s + step] = np.mean(hi - lo, axis=1) / 2.0
        else:
            xs[s:s + step] = np.where(inside, np.minimum(y - lo, hi - y), 0.0).sum(axis=1) / n
        if axes.y == "miss_rate":
            ys[s:s + step] = (~inside).sum(axis=1) / n
        else:
            gap = np.minimum(np.abs(y - lo), np.abs(y - hi))
            ys[s:s + step] = np.where(inside, 0.0, gap).sum(axis=1) / n
    return float(np.trapezoid(ys, xs))
