"""Lloyd's KMeans with seeded k-means++ initialization.

Deterministic for a fixed seed: ties in assignment go to the lowest center
index, empty clusters are reseeded to the point farthest from the empty
cluster's own center (lowest index on ties), and iteration stops when the
assignment is stable or after ``max_iter`` rounds.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .labeling import ClusterLabeling


@dataclass
class KMeansResult:
    labeling: ClusterLabeling
    centers: np.ndarray
    inertia: float
    inertia_history: list[float]
    n_iter: int


def _squared_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _kmeans_pp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=float)
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))  # all mass on chosen points (duplicates)
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans(
    points,
    k: int,
    seed: int = 0,
    init_centers=None,
    max_iter: int = 300,
) -> KMeansResult:
    """Cluster ``points`` (n x d raw coordinates) into k groups.

    ``init_centers`` overrides k-means++ seeding when given (must hold k
    rows). Inertia is recorded after every assignment step and is
    non-increasing across iterations.
    """
    X = np.ascontiguousarray(points, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ParameterError(f"points must be a non-empty 2-D matrix, got shape {X.shape}")
    n = X.shape[0]
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ParameterError(f"k must be an integer >= 1, got {k!r}")
    if k > n:
        raise ParameterError(f"k={k} exceeds the number of points ({n})")

    if init_centers is not None:
        centers = np.array(init_centers, dtype=float)
        if centers.shape != (k, X.shape[1]):
            raise ParameterError(
                f"init_centers must have shape ({k}, {X.shape[1]}), got {centers.shape}"
            )
    else:
        centers = _kmeans_pp(X, k, np.random.default_rng(seed))

    history: list[float] = []
    prev_labels = None
    labels = None
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        d2 = _squared_distances(X, centers)
        labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(n), labels].sum()))

        # Reseed empty clusters before the update step; stolen points keep
        # later empties from grabbing the same one.
        reseeded = False
        counts = np.bincount(labels, minlength=k)
        if (counts == 0).any():
            stolen: set[int] = set()
            for j in range(k):
                if counts[j] > 0:
                    continue
                dj = ((X - centers[j]) ** 2).sum(axis=1)
                for idx in stolen:
                    dj[idx] = -np.inf
                target = int(dj.argmax())
                centers[j] = X[target]
                counts[labels[target]] -= 1
                labels[target] = j
                counts[j] = 1
                stolen.add(target)
                reseeded = True

        if not reseeded and prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(axis=0)

    labeling = ClusterLabeling(
        labels=labels.astype(np.int64),
        params={"k": int(k), "seed": int(seed), "iterations": n_iter},
    )
    final_d2 = _squared_distances(X, centers)
    inertia = float(final_d2[np.arange(n), labels].sum())
    return KMeansResult(
        labeling=labeling,
        centers=centers,
        inertia=inertia,
        inertia_history=history,
        n_iter=n_iter,
    )
