"""Pure numpy DBSCAN kernel (fallback for the compiled extension).

Grid-indexed region queries: cells of side epsilon, candidates gathered
from the 3^d adjacent cells. Core flags are computed in a first pass
(per-cell, chunked to bound memory), then the classic expansion loop runs
over precomputed flags. Labels are independent of neighbor enumeration
order, so this kernel and the compiled one agree bit-for-bit: border
points land in the first cluster (outer input order) whose expansion
reaches them.
"""

from itertools import product

import numpy as np

from ..errors import ParameterError

_CHUNK = 512  # rows per distance block in the core-count pass


def _grid_cells(X: np.ndarray, eps: float) -> dict[tuple, np.ndarray]:
    with np.errstate(over="ignore"):
        scaled = X / eps
    if not np.isfinite(scaled).all() or np.abs(scaled).max(initial=0.0) > 2.0**62:
        raise ParameterError("epsilon is too small relative to the data extent")
    coords = np.floor(scaled).astype(np.int64)
    cells: dict[tuple, list[int]] = {}
    for i, key in enumerate(map(tuple, coords.tolist())):
        cells.setdefault(key, []).append(i)
    return {k: np.asarray(v, dtype=np.int64) for k, v in cells.items()}


def dbscan_labels(X: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Label points with DBSCAN over Euclidean distance; closed ball
    (distance <= eps), a point is core iff its neighborhood (self included)
    has at least min_pts members."""
    X = np.ascontiguousarray(X, dtype=float)
    n = X.shape[0]
    labels = np.full(n, -2, dtype=np.int64)
    if n == 0:
        return labels

    eps2 = eps * eps
    cells = _grid_cells(X, eps)
    dims = X.shape[1]
    offsets = list(product((-1, 0, 1), repeat=dims))

    candidates: dict[tuple, np.ndarray] = {}
    for key, members in cells.items():
        found = [cells[nk] for nk in (tuple(k + o for k, o in zip(key, off)) for off in offsets) if nk in cells]
        candidates[key] = np.concatenate(found)

    point_cell = {}
    for key, members in cells.items():
        for i in members.tolist():
            point_cell[i] = key

    # Pass 1: core flags.
    core = np.zeros(n, dtype=bool)
    for key, members in cells.items():
        cand = candidates[key]
        C = X[cand]
        for lo in range(0, members.size, _CHUNK):
            chunk = members[lo : lo + _CHUNK]
            d2 = ((X[chunk, None, :] - C[None, :, :]) ** 2).sum(axis=2)
            core[chunk] = (d2 <= eps2).sum(axis=1) >= min_pts

    # Pass 2: expansion in input order.
    stack = np.empty(n, dtype=np.int64)
    cid = 0
    for i in range(n):
        if labels[i] != -2:
            continue
        if not core[i]:
            labels[i] = -1
            continue
        labels[i] = cid
        stack[0] = i
        top = 1
        while top:
            top -= 1
            q = stack[top]
            if not core[q]:
                continue
            cand = candidates[point_cell[q]]
            d2 = ((X[cand] - X[q]) ** 2).sum(axis=1)
            nbrs = cand[d2 <= eps2]
            lab = labels[nbrs]
            labels[nbrs[lab == -1]] = cid  # promote previously-noise border points
            fresh = nbrs[lab == -2]
            labels[fresh] = cid
            stack[top : top + fresh.size] = fresh
            top += fresh.size
        cid += 1
    return labels
