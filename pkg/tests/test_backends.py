import os
import subprocess
import sys

import numpy as np
import pytest

from ucceval import _backend, _pykernels
from ucceval import curve as C

from conftest import random_dataset

needs_c = pytest.mark.skipif(_backend.BACKEND != "cython", reason="compiled kernels not built")


@needs_c
@pytest.mark.parametrize("n", [1, 7, 300])
def test_kernels_agree(rng, n):
    ds = random_dataset(rng, n, zero_error_frac=0.2)
    ks = np.concatenate(([0.0], np.sort(ds.critical), [3.5]))
    py = _backend.scale_sums(ds.error, ds.z_lower, ds.z_upper, ds.critical, ks, backend="python")
    cy = _backend.scale_sums(ds.error, ds.z_lower, ds.z_upper, ds.critical, ks, backend="cython")
    np.testing.assert_array_equal(py[0], cy[0])
    np.testing.assert_allclose(py[1], cy[1], rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(py[2], cy[2], rtol=1e-12, atol=1e-13)


@needs_c
def test_curves_agree(rng):
    ds = random_dataset(rng, 150)
    for axes in ("excess:deficit", "excess:miss_rate"):
        a = C.build_ucc(ds, axes, backend="python")
        b = C.build_ucc(ds, axes, backend="cython")
        assert C.auucc(a) == pytest.approx(C.auucc(b), rel=1e-12)


def test_unknown_backend(t1):
    with pytest.raises(ValueError):
        C.build_ucc(t1, "excess:deficit", backend="fortran")


def test_pure_python_selected_by_env():
    env = dict(os.environ, UCCEVAL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ucceval; print(ucceval.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_chunking_is_transparent(rng, monkeypatch):
    ds = random_dataset(rng, 64)
    ks = np.sort(ds.critical)
    whole = _pykernels.scale_sums(ds.error, ds.z_lower, ds.z_upper, ds.critical, ks)
    monkeypatch.setattr(_pykernels, "_CHUNK_ELEMS", 100)
    parts = _pykernels.scale_sums(ds.error, ds.z_lower, ds.z_upper, ds.critical, ks)
    for a, b in zip(whole, parts):
        np.testing.assert_array_equal(a, b)
