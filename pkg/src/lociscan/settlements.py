"""Settlement ingestion and centroid-count ranking."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cluster.centroids import Centroid
from .cluster.kmeans import kmeans
from .errors import DomainError, SchemaError
from .geo import haversine_km

log = logging.getLogger(__name__)

STRATEGY_NEAREST = "nearest"
STRATEGY_KMEANS = "kmeans"


@dataclass(frozen=True)
class Settlement:
    lat: float
    lon: float
    name: str = ""
    kind: str = "other"  # village / hamlet / town / camp / other


@dataclass
class SettlementLoad:
    settlements: list[Settlement]
    skipped: int  # non-point geometries


@dataclass
class RankedSettlement:
    settlement: Settlement
    centroid_count: int


@dataclass
class SettlementRanking:
    """Rows sorted by centroid_count descending, ties by name ascending."""

    rows: list[RankedSettlement]
    strategy: str
    params: dict

    def to_table(self) -> list[dict]:
        return [
            {
                "geometry": f"POINT ({r.settlement.lon!r} {r.settlement.lat!r})",
                "name": r.settlement.name,
                "type": r.settlement.kind,
                "count": r.centroid_count,
            }
            for r in self.rows
        ]


def load_settlements(source) -> SettlementLoad:
    """Read settlements from CSV (name, type, lat, lon) or GeoJSON points.

    Missing names default to empty, missing kinds to "other"; non-point
    GeoJSON geometries are skipped and counted.
    """
    path = Path(source)
    text = path.read_text()
    if path.suffix.lower() in (".geojson", ".json") or text.lstrip().startswith("{"):
        return _load_geojson(text, path)
    return _load_csv(text, path)


def _load_geojson(text: str, path: Path) -> SettlementLoad:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    features = doc.get("features")
    if doc.get("type") != "FeatureCollection" or features is None:
        raise SchemaError(f"{path} is not a GeoJSON FeatureCollection")
    settlements, skipped = [], 0
    for feature in features:
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Point":
            skipped += 1
            continue
        lon, lat = geom["coordinates"][:2]
        props = feature.get("properties") or {}
        settlements.append(
            Settlement(
                lat=float(lat),
                lon=float(lon),
                name=str(props.get("name") or ""),
                kind=str(props.get("place") or props.get("type") or "other"),
            )
        )
    if skipped:
        log.warning("skipped %d non-point geometries in %s", skipped, path)
    return SettlementLoad(settlements, skipped)


def _load_csv(text: str, path: Path) -> SettlementLoad:
    reader = csv.DictReader(text.splitlines())
    fields = set(reader.fieldnames or ())
    if not {"lat", "lon"} <= fields:
        raise SchemaError(f"{path} needs lat,lon columns (plus optional name,type)")
    settlements = []
    for row in reader:
        settlements.append(
            Settlement(
                lat=float(row["lat"]),
                lon=float(row["lon"]),
                name=(row.get("name") or "").strip(),
                kind=(row.get("type") or "other").strip() or "other",
            )
        )
    return SettlementLoad(settlements, 0)


def _canonical_order(settlements: list[Settlement]) -> list[Settlement]:
    # Tie-breaking by (name, lat, lon) keeps results invariant under any
    # permutation of the input settlement list.
    return sorted(settlements, key=lambda s: (s.name, s.lat, s.lon))


def rank_settlements(
    centroids: list[Centroid],
    settlements: list[Settlement],
    strategy: str = STRATEGY_NEAREST,
    radius_cutoff_km: float | None = None,
    seed: int = 0,
) -> SettlementRanking:
    """Rank settlements by how many centroids they attract.

    ``nearest`` assigns each centroid to its great-circle-nearest settlement
    (dropping ones beyond ``radius_cutoff_km`` when set). ``kmeans`` seeds
    Lloyd's algorithm with the settlement coordinates, maps each converged
    cluster to the settlement nearest its final center, and counts cluster
    sizes; settlements claiming no cluster score zero.
    """
    if not settlements:
        raise DomainError("rank_settlements needs at least one settlement")
    if strategy not in (STRATEGY_NEAREST, STRATEGY_KMEANS):
        raise DomainError(f"unknown ranking strategy {strategy!r}")

    ordered = _canonical_order(settlements)
    counts = {id(s): 0 for s in ordered}

    if centroids and strategy == STRATEGY_KMEANS and len(centroids) >= len(ordered):
        counts = _kmeans_counts(centroids, ordered, seed)
    elif centroids:
        # nearest assignment; also the degenerate-kmeans fallback when there
        # are fewer centroids than settlement seeds
        s_lat = np.array([s.lat for s in ordered])
        s_lon = np.array([s.lon for s in ordered])
        for c in centroids:
            dists = haversine_km(c.lat, c.lon, s_lat, s_lon)
            j = int(np.argmin(dists))  # first minimum = lowest canonical index
            if radius_cutoff_km is not None and dists[j] > radius_cutoff_km:
                continue
            counts[id(ordered[j])] += 1

    rows = [RankedSettlement(s, counts[id(s)]) for s in ordered]
    rows.sort(key=lambda r: (-r.centroid_count, r.settlement.name, r.settlement.lat, r.settlement.lon))
    return SettlementRanking(
        rows=rows,
        strategy=strategy,
        params={
            "radius_cutoff_km": radius_cutoff_km,
            "seed": seed,
            "centroids": len(centroids),
            "settlements": len(settlements),
        },
    )


def _kmeans_counts(
    centroids: list[Centroid], ordered: list[Settlement], seed: int
) -> dict[int, int]:
    coords = np.array([[c.lat, c.lon] for c in centroids], dtype=float)
    seeds = np.array([[s.lat, s.lon] for s in ordered], dtype=float)
    result = kmeans(coords, k=len(ordered), seed=seed, init_centers=seeds)
    counts = {id(s): 0 for s in ordered}
    s_lat = seeds[:, 0]
    s_lon = seeds[:, 1]
    sizes = np.bincount(result.labeling.labels, minlength=len(ordered))
    for cluster_id, center in enumerate(result.centers):
        dists = haversine_km(center[0], center[1], s_lat, s_lon)
        j = int(np.argmin(dists))
        counts[id(ordered[j])] += int(sizes[cluster_id])
    return counts


def write_ranking_csv(ranking: SettlementRanking, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["geometry", "name", "type", "count"])
        for row in ranking.to_table():
            writer.writerow([row["geometry"], row["name"], row["type"], row["count"]])


def ranking_json(ranking: SettlementRanking) -> dict:
    return {"strategy": ranking.strategy, "params": ranking.params, "rows": ranking.to_table()}
