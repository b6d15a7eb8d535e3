"""Cluster centroid extraction over raw coordinates."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..tracks import Track
from .features import FeatureSpace
from .labeling import ClusterLabeling


@dataclass(frozen=True)
class CentroidProvenance:
    feature_space: FeatureSpace | None
    fuzzy_enrichment: bool
    dataset_id: str
    individual_id: str


@dataclass(frozen=True)
class Centroid:
    """Arithmetic mean of a cluster's raw lat/lon; 3-D temp-influenced
    clusters project down by averaging location only."""

    lat: float
    lon: float
    cluster_id: int
    member_count: int
    provenance: CentroidProvenance


def extract_centroids(
    track: Track,
    labeling: ClusterLabeling,
    retained: np.ndarray | None = None,
    fuzzy_enrichment: bool = False,
    dataset_id: str = "",
) -> list[Centroid]:
    """One centroid per non-noise cluster; noise points never contribute.

    ``retained`` maps labeling rows back to track point indices when the
    feature build excluded temperature-less points; defaults to identity.
    """
    if retained is None:
        retained = np.arange(len(track))
    else:
        retained = np.asarray(retained)
    if retained.shape[0] != len(labeling):
        raise DomainError(
            f"labeling covers {len(labeling)} points but {retained.shape[0]} were retained"
        )
    provenance = CentroidProvenance(
        feature_space=labeling.feature_space,
        fuzzy_enrichment=fuzzy_enrichment,
        dataset_id=dataset_id,
        individual_id=track.individual_id,
    )
    centroids = []
    for cid in range(labeling.n_clusters):
        members = retained[labeling.labels == cid]
        centroids.append(
            Centroid(
                lat=float(track.lats[members].mean()),
                lon=float(track.lons[members].mean()),
                cluster_id=cid,
                member_count=int(members.size),
                provenance=provenance,
            )
        )
    return centroids
