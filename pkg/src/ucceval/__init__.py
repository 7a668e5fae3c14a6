"""Operating-point-agnostic evaluation of regression prediction intervals."""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .curve import (  # noqa: E402
    DEFAULT_AXES,
    Axes,
    OperatingPoint,
    UccCurve,
    auucc,
    auucc_gain,
    build_ucc,
    critical_scales,
    op_at_miss_rate,
    optimal_operating_point,
    partial_auucc,
)
from .data import Dataset, PredictionRecord, from_arrays, from_bounds, load, normalize_std, validate  # noqa: E402
from .errors import ComputationError, IngestionError, UccError  # noqa: E402
from .metrics import bandwidth, deficit, excess, interval_score, miss_rate, view  # noqa: E402
from .references import constant_band, epsilon_perfect_band, random_band  # noqa: E402
from .stats import PermutationResult, paired_permutation_test  # noqa: E402

__all__ = [
    "BACKEND", "DEFAULT_AXES", "Axes", "OperatingPoint", "UccCurve", "auucc", "auucc_gain",
    "build_ucc", "critical_scales", "op_at_miss_rate", "optimal_operating_point", "partial_auucc",
    "Dataset", "PredictionRecord", "from_arrays", "from_bounds", "load", "normalize_std",
    "validate", "ComputationError", "IngestionError", "UccError", "bandwidth", "deficit",
    "excess", "interval_score", "miss_rate", "view", "constant_band", "epsilon_perfect_band",
    "random_band", "PermutationResult", "paired_permutation_test",
]
