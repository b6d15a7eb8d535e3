"""DBSCAN over standardized features.

The labeling kernel is selected at import time: the compiled Cython
extension when available, else the pure numpy implementation. Both produce
identical labels; ``LOCISCAN_PURE_PYTHON=1`` forces the fallback.
"""

import math
import os

import numpy as np

from ..errors import ParameterError
from . import _dbscan_py
from .features import FeatureSpace
from .labeling import ClusterLabeling
from .scaling import ScaledMatrix

try:
    from . import _dbscan_cy
except ImportError:  # pragma: no cover - build-env dependent
    _dbscan_cy = None


def available_kernels() -> list[str]:
    kernels = ["python"]
    if _dbscan_cy is not None:
        kernels.insert(0, "cython")
    return kernels


def active_kernel() -> str:
    if _dbscan_cy is None or os.environ.get("LOCISCAN_PURE_PYTHON") == "1":
        return "python"
    return "cython"


def dbscan(
    scaled,
    epsilon: float,
    min_pts: int,
    feature_space: FeatureSpace | None = None,
    kernel: str | None = None,
) -> ClusterLabeling:
    """Run DBSCAN with Euclidean distance in the scaled feature space.

    Neighborhoods are closed balls (distance <= epsilon) and a point is core
    iff its neighborhood, itself included, holds at least ``min_pts`` points.
    Clusters are numbered in discovery (input) order; unreached points get
    label -1. An empty matrix yields an empty labeling.
    """
    if not (isinstance(epsilon, (int, float)) and math.isfinite(epsilon) and epsilon > 0):
        raise ParameterError(f"epsilon must be a finite positive number, got {epsilon!r}")
    if not (isinstance(min_pts, (int, np.integer)) and min_pts >= 1):
        raise ParameterError(f"min_pts must be an integer >= 1, got {min_pts!r}")

    X = scaled.values if isinstance(scaled, ScaledMatrix) else np.asarray(scaled, dtype=float)
    name = kernel or active_kernel()
    if name == "cython" and _dbscan_cy is None:
        raise ParameterError("compiled kernel requested but not built")
    impl = _dbscan_cy if name == "cython" else _dbscan_py
    try:
        labels = impl.dbscan_labels(X, float(epsilon), int(min_pts))
    except OverflowError:
        # Flat cell keys overflowed in the compiled kernel; the dict-keyed
        # numpy kernel has no such limit.
        labels = _dbscan_py.dbscan_labels(X, float(epsilon), int(min_pts))
    return ClusterLabeling(
        labels=labels,
        params={"epsilon": float(epsilon), "min_pts": int(min_pts)},
        feature_space=feature_space,
    )
