import numpy as np
import pytest

from ucceval import curve as C
from ucceval import metrics as M
from ucceval.data import from_arrays, normalize_std
from ucceval.errors import (
    AllScalesInfinite,
    InfiniteScalesPresent,
    InvalidRange,
    MismatchedBase,
    TargetUnreachable,
    UnsupportedAxes,
    ZeroReferenceArea,
)
from ucceval.references import constant_band

from conftest import random_dataset


def pts(curve):
    return [(p.k, p.x, p.y) for p in curve.points]


def test_critical_scales_examples():
    ds = from_arrays([2.0, 0.0, 1.0], [1.0, 1.0, 1.0], [0.5, 0.5, 0.3], [0.4, 0.4, 0.0])
    np.testing.assert_allclose(C.critical_scales(ds).scales, [2.5, 2.0, 0.0])


def test_critical_scales_zero_band():
    ds = from_arrays([1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0])
    cs = C.critical_scales(ds)
    assert cs.scales[0] == np.inf and cs.scales[1] == 0.0 and cs.n_infinite == 1


def test_t1_curve(t1):
    assert pts(C.build_ucc(t1)) == [(0, 0, 0.75), (1, 1.125, 0.25), (2, 2.25, 0)]


def test_perfect_predictions_single_point():
    ds = from_arrays([1.0, 2.0], [1.0, 2.0], [1.0, 1.0], [1.0, 1.0])
    assert pts(C.build_ucc(ds)) == [(0, 0, 0)]


def test_all_infinite():
    ds = from_arrays([1.0, 2.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0])
    with pytest.raises(AllScalesInfinite):
        C.build_ucc(ds)


def test_curve_points_match_metrics(rng):
    ds = random_dataset(rng, 60, zero_error_frac=0.2)
    for axes in C.SUPPORTED_AXES:
        c = C.build_ucc(ds, axes)
        for k, x, y in zip(c.k, c.x, c.y):
            v = M.view(ds, k)
            assert x == pytest.approx(M.evaluate(v, c.axes.x), rel=1e-12, abs=1e-14)
            assert y == pytest.approx(M.evaluate(v, c.axes.y), rel=1e-12, abs=1e-14)


def test_axes_validation():
    with pytest.raises(UnsupportedAxes):
        C.Axes.parse("bandwidth:deficit")
    with pytest.raises(UnsupportedAxes):
        C.Axes.parse("nonsense")
    assert str(C.Axes.parse("excess:deficit")) == "excess:deficit"


def test_auucc_t1(t1):
    assert C.auucc(C.build_ucc(t1)) == 1.125


def test_auucc_constant_t1(t1):
    assert C.auucc(C.build_ucc(constant_band(t1))) == 0.875


def test_auucc_right_endpoint_variant(t1):
    # 1.125*0.25 + 1.125*0
    assert C.auucc(C.build_ucc(t1), method="right") == 0.28125
    with pytest.raises(ValueError):
        C.auucc(C.build_ucc(t1), method="midpoint")


def test_auucc_excess_deficit_t1(t1):
    c = C.build_ucc(t1, "excess:deficit")
    assert pts(c) == [(0, 0, 0.875), (1, 0.5, 0.25), (2, 1.375, 0)]
    assert C.auucc(c) == pytest.approx(0.390625, abs=1e-15)


def test_auucc_infinite_handling():
    ds = from_arrays([1.0, 2.0, 0.5], [0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [1.0, 0.0, 1.0])
    c = C.build_ucc(ds)
    assert c.n_infinite == 1 and c.floor == pytest.approx(1 / 3)
    with pytest.raises(InfiniteScalesPresent):
        C.auucc(c)
    finite = from_arrays([1.0, 0.5], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0])
    assert C.auucc(c, exclude_infinite=True) == C.auucc(C.build_ucc(finite))


def test_partial_t1(t1):
    c = C.build_ucc(t1)
    assert C.partial_auucc(c, 0.0, 0.5) == 0.28125
    assert C.partial_auucc(c, 0.0, 1.0) == C.auucc(c)
    assert C.partial_auucc(c, 0.9, 1.0) == 0.0


def test_partial_full_range_random(rng):
    ds = random_dataset(rng, 80)
    c = C.build_ucc(ds)
    assert C.partial_auucc(c, 0.0, 1.0) == pytest.approx(C.auucc(c), rel=1e-12)


def test_partial_additive(rng):
    ds = random_dataset(rng, 80)
    for axes, top in (("bandwidth:miss_rate", 1.0), ("excess:deficit", 50.0)):
        c = C.build_ucc(ds, axes)
        # cut points off the 1/N grid: ranges are closed, so a flat run sitting
        # exactly on a cut would be counted on both sides
        cuts = ((0, 0.1037), (0.1037, 0.4013), (0.4013, top))
        parts = sum(C.partial_auucc(c, a, b) for a, b in cuts)
        assert parts == pytest.approx(C.auucc(c), rel=1e-10)


@pytest.mark.parametrize("lo,hi", [(0.5, 0.5), (0.6, 0.2), (-0.1, 0.5), (0.0, 1.5)])
def test_partial_invalid(t1, lo, hi):
    with pytest.raises(InvalidRange):
        C.partial_auucc(C.build_ucc(t1), lo, hi)


def test_gain_t1(t1):
    g = C.auucc_gain(C.build_ucc(t1), C.build_ucc(constant_band(t1)))
    assert g == pytest.approx(-28.571428571428573, abs=1e-9)


def test_gain_self_zero(rng):
    ds = random_dataset(rng, 50)
    assert C.auucc_gain(C.build_ucc(ds), C.build_ucc(ds)) == 0.0


def test_gain_scaled_reference_zero(rng):
    ds = random_dataset(rng, 50)
    ref = ds.with_bands(3.0 * ds.z_lower, 3.0 * ds.z_upper)
    assert C.auucc_gain(C.build_ucc(ds), C.build_ucc(ref)) == pytest.approx(0.0, abs=1e-12)


def test_gain_errors(t1, rng):
    other = random_dataset(rng, 4)
    with pytest.raises(MismatchedBase):
        C.auucc_gain(C.build_ucc(t1), C.build_ucc(other))
    with pytest.raises(MismatchedBase):
        C.auucc_gain(C.build_ucc(t1), C.build_ucc(t1, "excess:deficit"))
    with pytest.raises(MismatchedBase):
        C.auucc_gain(C.build_ucc(normalize_std(t1)), C.build_ucc(t1))
    perfect = from_arrays([1.0], [1.0], [1.0], [1.0])
    with pytest.raises(ZeroReferenceArea):
        C.auucc_gain(C.build_ucc(perfect), C.build_ucc(perfect))


def test_gain_invariant_to_record_order(rng):
    ds = random_dataset(rng, 70)
    perm = rng.permutation(70)
    shuffled = from_arrays(ds.y[perm], ds.y_hat[perm], ds.z_lower[perm], ds.z_upper[perm])
    g1 = C.auucc_gain(C.build_ucc(ds), C.build_ucc(constant_band(ds)))
    g2 = C.auucc_gain(C.build_ucc(shuffled), C.build_ucc(constant_band(shuffled)))
    assert g1 == pytest.approx(g2, abs=1e-12)


def test_cost_examples(t1):
    p = C.build_ucc(t1).points[1]
    assert C.cost(p, 0.5) == 0.6875
    assert C.cost(p, 0.0) == p.y
    assert C.cost(p, 1.0) == p.x


def test_optimal_op(t1):
    c = C.build_ucc(t1)
    op, best = C.optimal_operating_point(c, 0.5)
    assert (op.k, best) == (0.0, 0.375)
    assert C.optimal_operating_point(c, 0.0)[0].k == 2.0
    assert C.optimal_operating_point(c, 1.0)[0].k == 0.0


def test_optimal_op_tie_goes_to_smaller_k():
    # costs at c=0.5: k=0 -> 0.5, k=1 -> (1 + 0)/2 = 0.5
    ds = from_arrays([1.0], [0.0], [1.0], [1.0])
    op, best = C.optimal_operating_point(C.build_ucc(ds), 0.5)
    assert op.k == 0.0 and best == 0.5


def test_op_at_miss_rate(t1):
    c = C.build_ucc(t1)
    assert C.op_at_miss_rate(c, 0.25).k == 1.0
    assert C.op_at_miss_rate(c, 1.0).k == 0.0
    assert C.op_at_miss_rate(c, 0.3).k == 1.0


def test_op_at_miss_rate_unreachable():
    ds = from_arrays([1.0, 0.5], [0.0, 0.0], [0.0, 1.0], [0.0, 1.0])
    with pytest.raises(TargetUnreachable):
        C.op_at_miss_rate(C.build_ucc(ds), 0.0)


def test_op_at_miss_rate_needs_miss_rate_axis(t1):
    with pytest.raises(UnsupportedAxes):
        C.op_at_miss_rate(C.build_ucc(t1, "excess:deficit"), 0.1)


def test_mae_identity_on_curve(rng):
    ds = random_dataset(rng, 50, symmetric=True)
    c = C.build_ucc(ds, "excess:deficit")
    for p in c.points:
        assert 2 * C.cost(p, 0.5) == pytest.approx(M.mae_at_scale(ds, p.k), abs=1e-12)


def test_csv_export_t1(t1):
    text = C.to_csv(C.build_ucc(t1))
    lines = text.splitlines()
    assert "# axes=bandwidth:miss_rate n=4 n_infinite=0" in lines
    assert lines[lines.index("k,x,y") + 1:] == ["0.0,0.0,0.75", "1.0,1.125,0.25", "2.0,2.25,0.0"]


def test_csv_read_back(t1):
    curves = [C.build_ucc(t1), C.build_ucc(constant_band(t1))]
    tables = C.read_csv(C.to_csv(curves))
    assert [t.model for t in tables] == ["t1", "t1:constant"]
    for t, c in zip(tables, curves):
        np.testing.assert_array_equal(t.x, c.x)
        assert t.axes == c.axes and t.n == 4


def test_json_export(t1):
    import json
    doc = json.loads(C.to_json(C.build_ucc(t1)))
    assert doc[0]["axes"] == "bandwidth:miss_rate"
    assert doc[0]["points"][1] == {"k": 1.0, "x": 1.125, "y": 0.25}
