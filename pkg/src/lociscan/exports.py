"""GeoJSON and CSV exports.

All GeoJSON is serialized with sorted keys and compact separators so that
identical runs produce byte-identical payloads.
"""

import csv
import json

import numpy as np

from .cluster.centroids import Centroid
from .cluster.labeling import ClusterLabeling
from .settlements import Settlement
from .tracks import Track


def dumps_geojson(obj: dict) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()


def _point(lon: float, lat: float, properties: dict) -> dict:
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [lon, lat]},
        "properties": properties,
    }


def feature_collection(features: list[dict]) -> dict:
    return {"type": "FeatureCollection", "features": features}


def track_points_geojson(track: Track, every_nth: int = 1) -> dict:
    """Raw fixes as Point features; decimation keeps first and last fix."""
    n = len(track)
    idx = np.arange(0, n, max(1, every_nth))
    if n and idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    features = []
    for i in idx:
        temp = float(track.temps[i])
        features.append(
            _point(
                float(track.lons[i]),
                float(track.lats[i]),
                {
                    "timestamp": int(track.timestamps[i]),
                    "temperature": None if np.isnan(temp) else temp,
                },
            )
        )
    return feature_collection(features)


def labeled_points_geojson(track: Track, labeling: ClusterLabeling, retained=None) -> dict:
    retained = np.arange(len(track)) if retained is None else np.asarray(retained)
    features = []
    for row, i in enumerate(retained):
        temp = float(track.temps[i])
        features.append(
            _point(
                float(track.lons[i]),
                float(track.lats[i]),
                {
                    "label": int(labeling.labels[row]),
                    "temperature": None if np.isnan(temp) else temp,
                },
            )
        )
    return feature_collection(features)


def centroids_geojson(centroids: list[Centroid]) -> dict:
    features = [
        _point(
            c.lon,
            c.lat,
            {
                "cluster_id": c.cluster_id,
                "member_count": c.member_count,
                "feature_space": c.provenance.feature_space.value
                if c.provenance.feature_space
                else None,
                "fuzzy": c.provenance.fuzzy_enrichment,
                "individual_id": c.provenance.individual_id,
            },
        )
        for c in centroids
    ]
    return feature_collection(features)


def settlements_geojson(settlements: list[Settlement]) -> dict:
    features = [
        _point(s.lon, s.lat, {"name": s.name, "place": s.kind}) for s in settlements
    ]
    return feature_collection(features)


def centroids_from_geojson(doc: dict) -> list[Centroid]:
    """Rebuild Centroid values from an exported FeatureCollection."""
    from .cluster.centroids import CentroidProvenance
    from .cluster.features import FeatureSpace
    from .errors import SchemaError

    if doc.get("type") != "FeatureCollection":
        raise SchemaError("centroid file is not a GeoJSON FeatureCollection")
    centroids = []
    for feature in doc.get("features", []):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Point":
            continue
        lon, lat = geom["coordinates"][:2]
        props = feature.get("properties") or {}
        space = props.get("feature_space")
        centroids.append(
            Centroid(
                lat=float(lat),
                lon=float(lon),
                cluster_id=int(props.get("cluster_id", -1)),
                member_count=int(props.get("member_count", 1)),
                provenance=CentroidProvenance(
                    feature_space=FeatureSpace(space) if space else None,
                    fuzzy_enrichment=bool(props.get("fuzzy", False)),
                    dataset_id=str(props.get("dataset_id", "")),
                    individual_id=str(props.get("individual_id", "")),
                ),
            )
        )
    return centroids


def write_labeling_csv(track: Track, labeling: ClusterLabeling, path, retained=None) -> None:
    """Labeled points as CSV: point_index (into the source track), lat, lon,
    temperature (blank when missing), label."""
    retained = np.arange(len(track)) if retained is None else np.asarray(retained)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point_index", "lat", "lon", "temperature", "label"])
        for row, i in enumerate(retained):
            temp = track.temps[i]
            writer.writerow(
                [
                    int(i),
                    repr(float(track.lats[i])),
                    repr(float(track.lons[i])),
                    "" if np.isnan(temp) else repr(float(temp)),
                    int(labeling.labels[row]),
                ]
            )
