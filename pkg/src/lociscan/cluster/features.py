"""Feature-space construction for clustering runs."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DomainError
from ..tracks import Track


class FeatureSpace(str, Enum):
    """The two clustering feature spaces: location only, or location plus
    temperature."""

    WITHOUT_TEMP = "without_temp"
    TEMP_INFLUENCED = "temp_influenced"


@dataclass
class FeatureBuild:
    """Raw feature matrix aligned with ``retained`` point indices.

    ``excluded`` counts points dropped for lacking a temperature value under
    the temp-influenced space.
    """

    matrix: np.ndarray
    retained: np.ndarray
    excluded: int
    space: FeatureSpace


def build_features(track: Track, space: FeatureSpace) -> FeatureBuild:
    """Project a track into the requested feature space.

    Without temp: n x 2 (lat, lon) over every point. Temp-influenced:
    m x 3 (lat, lon, temperature) over the points that carry a temperature,
    native or enriched; points without one are excluded and counted.
    """
    space = FeatureSpace(space)
    if space is FeatureSpace.WITHOUT_TEMP:
        matrix = np.column_stack([track.lats, track.lons]).astype(float)
        return FeatureBuild(matrix, np.arange(len(track)), 0, space)

    mask = np.isfinite(track.temps)
    if not mask.any():
        raise DomainError(
            "temp-influenced features need at least one temperature-bearing point; "
            "enrich the track from a weather station first"
        )
    retained = np.flatnonzero(mask)
    matrix = np.column_stack(
        [track.lats[retained], track.lons[retained], track.temps[retained]]
    ).astype(float)
    return FeatureBuild(matrix, retained, int(len(track) - retained.size), space)
