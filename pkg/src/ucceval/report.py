"""Evaluation reports (JSON schema version 1)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .curve import (
    DEFAULT_AXES,
    Axes,
    auucc,
    auucc_gain,
    build_ucc,
    op_at_miss_rate,
    optimal_operating_point,
    partial_auucc,
)
from .data import Dataset
from .errors import AllScalesInfinite, InfiniteScalesPresent
from .metrics import mae_at_scale, view, evaluate as metric_at
from .references import constant_band
from .stats import paired_permutation_test

SCHEMA_VERSION = 1


@dataclass
class ModelEntry:
    name: str
    source: str
    axes: str
    n: int
    n_infinite: int
    infinite_excluded: bool
    normalization: str
    normalization_divisor: float
    auucc: float
    reference_auucc: float
    gain_vs_constant: float
    partial_auucc: dict | None
    cost_c: float
    optimal_k: float
    optimal_x: float
    optimal_y: float
    optimal_cost: float
    cost_at_op: dict | None


@dataclass
class PairEntry:
    model_a: str
    model_b: str
    axes: str
    delta_auucc: float
    p_value: float
    n_permutations: int
    seed: int


@dataclass
class EvaluationReport:
    models: list[ModelEntry] = field(default_factory=list)
    pairwise: list[PairEntry] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "ucceval", "version": __version__},
            "models": [asdict(m) for m in self.models],
            "pairwise": [asdict(p) for p in self.pairwise],
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        cols = ["name", "axes", "n", "n_infinite", "auucc", "reference_auucc",
                "gain_vs_constant", "partial_auucc", "partial_gain", "cost_c",
                "optimal_k", "optimal_cost", "op_k", "op_cost", "op_mae"]
        pvals = {p.model_b: p.p_value for p in self.pairwise}
        if self.pairwise:
            cols.append("p_value_vs_first")
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for m in self.models:
            part = m.partial_auucc or {}
            op = m.cost_at_op or {}
            row = [m.name, m.axes, m.n, m.n_infinite, repr(m.auucc), repr(m.reference_auucc),
                   repr(m.gain_vs_constant), _r(part.get("auucc")), _r(part.get("gain")),
                   repr(m.cost_c), repr(m.optimal_k), repr(m.optimal_cost),
                   _r(op.get("k")), _r(op.get("cost")), _r(op.get("mae"))]
            if self.pairwise:
                row.append(_r(pvals.get(m.name)))
            w.writerow(row)
        return out.getvalue()


def _r(v):
    return "" if v is None else repr(v)


def evaluate_model(
    ds: Dataset,
    axes: "Axes | str" = DEFAULT_AXES,
    *,
    source: str = "",
    partial: tuple[float, float] | None = None,
    cost_c: float = 0.1,
    at_missrate: float | None = None,
    allow_infinite: bool = False,
    backend: str | None = None,
) -> ModelEntry:
    """Summarize one model against its auto-generated constant-band reference."""
    axes = Axes.parse(axes)
    finite = np.isfinite(ds.critical)
    n_inf = int(np.count_nonzero(~finite))
    if n_inf == len(ds):
        raise AllScalesInfinite()
    if n_inf and not allow_infinite:
        raise InfiniteScalesPresent(n_inf)
    eff = ds.subset(finite) if n_inf else ds

    model = build_ucc(eff, axes, backend=backend)
    ref = build_ucc(constant_band(eff), axes, backend=backend)
    a_mod, a_ref = auucc(model), auucc(ref)
    gain = auucc_gain(model, ref)

    part = None
    if partial is not None:
        lo, hi = partial
        part = {
            "lo": lo,
            "hi": hi,
            "auucc": partial_auucc(model, lo, hi),
            "reference_auucc": partial_auucc(ref, lo, hi),
            "gain": auucc_gain(model, ref, partial=(lo, hi)),
        }

    best, best_cost = optimal_operating_point(model, cost_c)

    at_op = None
    if at_missrate is not None:
        # the scale is chosen on the miss-rate curve whatever the report axes
        k = op_at_miss_rate(build_ucc(eff, DEFAULT_AXES), at_missrate).k
        v = view(eff, k)
        x, y = metric_at(v, axes.x), metric_at(v, axes.y)
        at_op = {
            "target": at_missrate,
            "k": k,
            "x": x,
            "y": y,
            "cost": cost_c * x + (1.0 - cost_c) * y,
            "mae": mae_at_scale(eff, k) if eff.symmetric else None,
        }

    return ModelEntry(
        name=ds.name,
        source=source,
        axes=str(axes),
        n=len(ds),
        n_infinite=n_inf,
        infinite_excluded=bool(n_inf),
        normalization=ds.normalization,
        normalization_divisor=ds.scale,
        auucc=a_mod,
        reference_auucc=a_ref,
        gain_vs_constant=gain,
        partial_auucc=part,
        cost_c=cost_c,
        optimal_k=best.k,
        optimal_x=best.x,
        optimal_y=best.y,
        optimal_cost=best_cost,
        cost_at_op=at_op,
    )


def compare_models(a: Dataset, b: Dataset, axes="bandwidth:miss_rate", *, n_perm: int = 999,
                   seed: int = 0, backend: str | None = None) -> PairEntry:
    res = paired_permutation_test(a, b, axes, n_perm=n_perm, seed=seed, backend=backend)
    return PairEntry(a.name, b.name, str(Axes.parse(axes)), res.observed_delta, res.p_value,
                     res.n_permutations, res.seed)
