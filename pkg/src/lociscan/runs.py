"""Clustering run requests, execution, and result caching.

A run is a pure function of (request, data snapshot): the run id is the
hash of the canonical request, which makes request-hash caching sound and
repeat runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cluster import (
    ClusterLabeling,
    FeatureSpace,
    build_features,
    dbscan,
    extract_centroids,
    standard_scale,
)
from .enrich import (
    JoinReport,
    default_grid_interval,
    find_station,
    fuzzy_tolerance,
    join_temperature,
    normalize_interpolate,
)
from .enrich.stations import StationProvider
from .errors import DataError, DomainError, ParameterError, ProviderError
from .exports import centroids_geojson, dumps_geojson, labeled_points_geojson
from .settlements import SettlementLoad, load_settlements
from .tracks import Track, decimate_track, read_canonical_csv

ENRICHMENT_NATIVE = "native"
ENRICHMENT_STATION = "station"

DEFAULT_POINT_CEILING = 200_000


class InvalidRunRequest(ParameterError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunRequest:
    dataset_id: str
    individual_id: str
    feature_space: FeatureSpace
    epsilon: float
    min_pts: int
    fuzzy: bool = False
    enrichment: str = ENRICHMENT_NATIVE
    decimate: int | None = None

    def validate(self) -> None:
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidRunRequest("invalid_epsilon", "epsilon must be a finite number > 0")
        if not (isinstance(self.min_pts, int) and self.min_pts >= 1):
            raise InvalidRunRequest("invalid_min_pts", "min_pts must be an integer >= 1")
        if self.enrichment not in (ENRICHMENT_NATIVE, ENRICHMENT_STATION):
            raise InvalidRunRequest(
                "invalid_enrichment", f"enrichment must be '{ENRICHMENT_NATIVE}' or '{ENRICHMENT_STATION}'"
            )
        if self.decimate is not None and (not isinstance(self.decimate, int) or self.decimate < 1):
            raise InvalidRunRequest("invalid_decimate", "decimate must be an integer >= 1")

    def canonical(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "individual_id": self.individual_id,
            "feature_space": self.feature_space.value,
            "epsilon": float(self.epsilon),
            "min_pts": int(self.min_pts),
            "fuzzy": bool(self.fuzzy),
            "enrichment": self.enrichment,
            "decimate": self.decimate,
        }

    @property
    def run_id(self) -> str:
        payload = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class RunResult:
    run_id: str
    request: RunRequest
    labeling: ClusterLabeling
    retained: np.ndarray
    track: Track
    centroids: list
    join_report: JoinReport | None
    excluded: int
    timing_ms: float

    @property
    def summary(self) -> dict:
        return {
            "cluster_count": self.labeling.n_clusters,
            "noise_count": self.labeling.noise_count,
            "points_used": len(self.labeling),
            "points_excluded": self.excluded,
            "centroid_count": len(self.centroids),
        }

    def centroids_bytes(self) -> bytes:
        return dumps_geojson(centroids_geojson(self.centroids))

    def clusters_bytes(self) -> bytes:
        return dumps_geojson(labeled_points_geojson(self.track, self.labeling, self.retained))

    def to_json(self, cached: bool) -> dict:
        return {
            "run_id": self.run_id,
            "cached": cached,
            "request": self.request.canonical(),
            "summary": self.summary,
            "join_report": self.join_report.to_dict() if self.join_report else None,
            "timing_ms": self.timing_ms,
        }


class UnknownDataset(DataError):
    pass


class UnknownIndividual(DataError):
    pass


class DataRepository:
    """Read-only view over an ingested data directory:

    tracks/<dataset>/<individual>.csv   canonical tracks
    stations/                           fixture station archives
    settlements.csv|.geojson            settlement layer
    """

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self._track_cache: OrderedDict[tuple, Track] = OrderedDict()
        self._lock = threading.Lock()

    @property
    def tracks_dir(self) -> Path:
        return self.data_dir / "tracks"

    @property
    def stations_dir(self) -> Path:
        return self.data_dir / "stations"

    def datasets(self) -> list[dict]:
        listing = []
        if self.tracks_dir.is_dir():
            for ds in sorted(p for p in self.tracks_dir.iterdir() if p.is_dir()):
                individuals = sorted(p.stem for p in ds.glob("*.csv"))
                listing.append({"dataset_id": ds.name, "individuals": individuals})
        return listing

    def track_path(self, dataset_id: str, individual_id: str) -> Path:
        ds = self.tracks_dir / dataset_id
        if not ds.is_dir():
            raise UnknownDataset(f"unknown dataset '{dataset_id}'")
        path = ds / f"{individual_id}.csv"
        if not path.exists():
            raise UnknownIndividual(f"unknown individual '{individual_id}' in '{dataset_id}'")
        return path

    def load_track(self, dataset_id: str, individual_id: str) -> Track:
        key = (dataset_id, individual_id)
        with self._lock:
            if key in self._track_cache:
                self._track_cache.move_to_end(key)
                return self._track_cache[key]
        track = read_canonical_csv(self.track_path(dataset_id, individual_id))
        with self._lock:
            self._track_cache[key] = track
            while len(self._track_cache) > 16:
                self._track_cache.popitem(last=False)
        return track

    def settlements(self) -> SettlementLoad | None:
        for name in ("settlements.geojson", "settlements.json", "settlements.csv"):
            path = self.data_dir / name
            if path.exists():
                return load_settlements(path)
        return None


def execute_run(
    request: RunRequest,
    repo: DataRepository,
    provider: StationProvider | None = None,
    point_ceiling: int = DEFAULT_POINT_CEILING,
) -> RunResult:
    """Run the full pipeline for one request: load, optionally enrich,
    build features, scale, DBSCAN, extract centroids."""
    request.validate()
    started = time.perf_counter()

    track = repo.load_track(request.dataset_id, request.individual_id)
    if len(track) > point_ceiling and request.decimate is None:
        raise InvalidRunRequest(
            "point_ceiling_exceeded",
            f"track has {len(track)} points (> {point_ceiling}); pass a decimate factor",
        )
    if request.decimate:
        track = decimate_track(track, request.decimate)

    join_report = None
    if request.enrichment == ENRICHMENT_STATION:
        if provider is None:
            raise ProviderError("run requested station enrichment but no provider is configured")
        station = find_station(track, provider)
        t0, t1 = track.time_range
        raw_ts, raw_temps = provider.hourly(station.station_id, t0 - 86400, t1 + 86400)
        if raw_ts.size == 0:
            raise ProviderError(f"station {station.station_id} returned an empty archive")
        series = normalize_interpolate(
            raw_ts,
            raw_temps,
            default_grid_interval(track.sampling_interval_median),
            station_id=station.station_id,
        )
        tolerance = fuzzy_tolerance(track) if request.fuzzy and len(track) >= 2 else 0.0
        track, join_report = join_temperature(track, series, tolerance)
    elif request.feature_space is FeatureSpace.TEMP_INFLUENCED and not track.has_native_temperature():
        raise InvalidRunRequest(
            "temp_requires_station",
            "temp-influenced clustering on a track without native temperature "
            "requires station enrichment",
        )

    try:
        fb = build_features(track, request.feature_space)
    except DomainError as exc:
        raise InvalidRunRequest("empty_features", str(exc)) from exc
    scaled = standard_scale(fb.matrix)
    labeling = dbscan(scaled, request.epsilon, request.min_pts, feature_space=request.feature_space)
    centroids = extract_centroids(
        track,
        labeling,
        retained=fb.retained,
        fuzzy_enrichment=bool(request.fuzzy and request.enrichment == ENRICHMENT_STATION),
        dataset_id=request.dataset_id,
    )
    return RunResult(
        run_id=request.run_id,
        request=request,
        labeling=labeling,
        retained=fb.retained,
        track=track,
        centroids=centroids,
        join_report=join_report,
        excluded=fb.excluded,
        timing_ms=(time.perf_counter() - started) * 1000.0,
    )


class RunCache:
    """Bounded LRU of finished runs, keyed by run id; thread-safe."""

    def __init__(self, capacity: int = 64):
        self.capacity = capacity
        self._entries: OrderedDict[str, RunResult] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, run_id: str) -> RunResult | None:
        with self._lock:
            result = self._entries.get(run_id)
            if result is not None:
                self._entries.move_to_end(run_id)
            return result

    def put(self, result: RunResult) -> None:
        with self._lock:
            self._entries[result.run_id] = result
            self._entries.move_to_end(result.run_id)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)
