"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them loop for
loop. Both take the signed error ``err = y - y_hat``, the bands and the
per-record critical scales, and evaluate sums over records at many scales.
"""

import numpy as np

# cap on the size of the (scales x records) temporaries
_CHUNK_ELEMS = 1 << 21


def critical_ratios(err, lower, upper):
    """Smallest scale at which each record is captured.

    ``err / upper`` for ``err >= 0`` and ``-err / lower`` otherwise, with
    ``0/0 -> 0`` and ``x/0 -> inf`` for ``x != 0``.
    """
    err = np.asarray(err, dtype=np.float64)
    band = np.where(err >= 0, upper, lower)
    mag = np.abs(err)
    out = np.empty_like(mag)
    pos = band > 0
    np.divide(mag, band, out=out, where=pos)
    out[~pos] = np.where(mag[~pos] == 0, 0.0, np.inf)
    return out


def scale_sums(err, lower, upper, crit, ks):
    """Per-scale totals ``(n_missed, excess_sum, deficit_sum)``.

    A record counts as captured at scale ``k`` iff ``crit <= k``. Captured
    records contribute ``min(err + k*lower, k*upper - err)`` (clamped at 0)
    to the excess; missed ones contribute
    ``min(|err + k*lower|, |err - k*upper|)`` to the deficit.
    """
    ks = np.asarray(ks, dtype=np.float64)
    m = ks.shape[0]
    n = err.shape[0]
    n_missed = np.empty(m, dtype=np.int64)
    exc = np.empty(m)
    dfc = np.empty(m)
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for start in range(0, m, step):
        k = ks[start:start + step, None]
        captured = crit[None, :] <= k
        lo_gap = err + k * lower  # y - lower bound
        hi_gap = k * upper - err  # upper bound - y
        slack = np.maximum(np.minimum(lo_gap, hi_gap), 0.0)
        short = np.minimum(np.abs(lo_gap), np.abs(hi_gap))
        n_missed[start:start + step] = n - captured.sum(axis=1)
        exc[start:start + step] = np.where(captured, slack, 0.0).sum(axis=1)
        dfc[start:start + step] = np.where(captured, 0.0, short).sum(axis=1)
    return n_missed, exc, dfc
