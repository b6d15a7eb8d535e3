"""Cluster labeling container shared by DBSCAN and KMeans."""

from dataclasses import dataclass

import numpy as np

from .features import FeatureSpace


@dataclass
class ClusterLabeling:
    """Per-point labels: -1 is noise, clusters are numbered 0..k-1 in
    discovery order. ``params`` records the run parameters."""

    labels: np.ndarray
    params: dict
    feature_space: FeatureSpace | None = None

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if (self.labels >= 0).any() else 0

    @property
    def noise_count(self) -> int:
        return int((self.labels == -1).sum())

    def members(self, cluster_id: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster_id)
