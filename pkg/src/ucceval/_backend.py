"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``UCCEVAL_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the numpy implementations are used.
"""

import os

import numpy as np

from . import _pykernels

_FORCE_PY = os.environ.get("UCCEVAL_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PY:
    _ckernels = None
else:
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

critical_ratios = _pykernels.critical_ratios


def _as_c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def scale_sums(err, lower, upper, crit, ks, backend=None):
    """Dispatch to the selected (or explicitly requested) kernel backend."""
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _ckernels.scale_sums(_as_c(err), _as_c(lower), _as_c(upper), _as_c(crit), ks)
    if backend != "python":
        raise ValueError(f"unknown backend {backend!r}")
    return _pykernels.scale_sums(err, lower, upper, crit, ks)
