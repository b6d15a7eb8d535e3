"""Track ingestion: parse, validate and normalize tracking CSVs.

Tracks are stored column-wise (numpy arrays) so that million-point
datasets stay cheap to slice; ``TrackPoint`` is the per-point view used
at fixture scale.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DomainError, EmptyInputError, SchemaError

# Default column mapping matches Movebank export names.
MOVEBANK_SCHEMA = {
    "timestamp": "timestamp",
    "lat": "location-lat",
    "lon": "location-long",
    "id": "individual-local-identifier",
    "temperature": "external-temperature",
}

# Canonical round-trip format written by write_canonical_csv.
CANONICAL_SCHEMA = {
    "timestamp": "timestamp",
    "lat": "lat",
    "lon": "lon",
    "id": "id",
    "temperature": "temperature",
}

MANDATORY_KEYS = ("timestamp", "lat", "lon", "id")

TEMP_SOURCE_NATIVE = "native"
TEMP_SOURCE_EXACT = "station_exact"
TEMP_SOURCE_FUZZY = "station_fuzzy"


@dataclass(frozen=True)
class TrackPoint:
    """One GPS fix; temperature is None when the sensor value is missing."""

    timestamp: datetime
    lat: float
    lon: float
    temperature: float | None
    individual_id: str


@dataclass
class RejectionReport:
    """Rows dropped during a parse: count plus the first offending lines."""

    total_rows: int = 0
    rejected: int = 0
    line_numbers: list[int] = field(default_factory=list)  # 1-based, header = line 1

    def to_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "rejected": self.rejected,
            "first_rejected_lines": self.line_numbers,
        }


@dataclass
class Track:
    """One individual's fixes, sorted by timestamp (ties keep input order).

    ``timestamps`` are int64 epoch seconds (UTC); ``temps`` is float64 with
    NaN marking missing values. ``temp_source``/``station_id`` are set on
    enriched tracks only.
    """

    individual_id: str
    timestamps: np.ndarray
    lats: np.ndarray
    lons: np.ndarray
    temps: np.ndarray
    temp_source: np.ndarray | None = None
    station_id: str | None = None

    def __len__(self) -> int:
        return int(self.timestamps.shape[0])

    def point(self, i: int) -> TrackPoint:
        temp = float(self.temps[i])
        return TrackPoint(
            timestamp=datetime.fromtimestamp(int(self.timestamps[i]), tz=timezone.utc),
            lat=float(self.lats[i]),
            lon=float(self.lons[i]),
            temperature=None if np.isnan(temp) else temp,
            individual_id=self.individual_id,
        )

    @property
    def points(self) -> list[TrackPoint]:
        return [self.point(i) for i in range(len(self))]

    @property
    def sampling_interval_median(self) -> float | None:
        """Median of consecutive timestamp deltas in seconds; None (flagged)
        for empty/singleton tracks."""
        if len(self) < 2:
            return None
        return float(np.median(np.diff(self.timestamps)))

    @property
    def time_range(self) -> tuple[int, int]:
        if len(self) == 0:
            raise DomainError("empty track has no time range")
        return int(self.timestamps[0]), int(self.timestamps[-1])

    def has_native_temperature(self) -> bool:
        return bool(np.isfinite(self.temps).any())

    @classmethod
    def from_points(cls, points: list[TrackPoint]) -> "Track":
        if not points:
            raise DomainError("cannot build a track from zero points")
        ids = {p.individual_id for p in points}
        if len(ids) != 1:
            raise DomainError(f"points span multiple individuals: {sorted(ids)}")
        ts = np.array([int(p.timestamp.timestamp()) for p in points], dtype=np.int64)
        order = np.argsort(ts, kind="stable")
        return cls(
            individual_id=points[0].individual_id,
            timestamps=ts[order],
            lats=np.array([p.lat for p in points], dtype=float)[order],
            lons=np.array([p.lon for p in points], dtype=float)[order],
            temps=np.array(
                [np.nan if p.temperature is None else p.temperature for p in points], dtype=float
            )[order],
        )


def parse_tracks(
    source,
    schema_map: dict[str, str] | None = None,
    dedup: bool = False,
) -> tuple[list[Track], RejectionReport]:
    """Parse a tracking CSV into one Track per individual.

    ``source`` is a path, bytes, or file-like object holding UTF-8 CSV with a
    header row. ``schema_map`` names the timestamp/lat/lon/id columns (and
    optionally temperature); defaults to Movebank export names. Rows with
    unparseable or out-of-bounds coordinates/timestamps (or an empty id) are
    dropped and counted in the rejection report. Timestamps without zone info
    are assumed UTC. ``dedup`` drops repeated (timestamp, individual) rows,
    keeping the first.
    """
    schema = dict(schema_map or MOVEBANK_SCHEMA)
    for key in MANDATORY_KEYS:
        if key not in schema:
            raise SchemaError(f"schema map lacks required key '{key}'")

    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    df = pd.read_csv(source, dtype=str, na_filter=False)

    missing = [schema[k] for k in MANDATORY_KEYS if schema[k] not in df.columns]
    if missing:
        raise SchemaError(f"missing mandatory column(s): {', '.join(missing)}")

    report = RejectionReport(total_rows=len(df))
    if len(df) == 0:
        return [], report

    ts = pd.to_datetime(df[schema["timestamp"]], utc=True, errors="coerce", format="mixed")
    lat = pd.to_numeric(df[schema["lat"]], errors="coerce")
    lon = pd.to_numeric(df[schema["lon"]], errors="coerce")
    ids = df[schema["id"]].astype(str).str.strip()

    valid = (
        ts.notna()
        & lat.notna()
        & lon.notna()
        & (lat >= -90.0)
        & (lat <= 90.0)
        & (lon >= -180.0)
        & (lon <= 180.0)
        & (ids != "")
    )
    rejected_idx = np.flatnonzero(~valid.to_numpy())
    report.rejected = int(rejected_idx.size)
    report.line_numbers = [int(i) + 2 for i in rejected_idx[:10]]
    if report.rejected == report.total_rows:
        raise EmptyInputError("no valid rows after validation")

    temp_col = schema.get("temperature")
    if temp_col and temp_col in df.columns:
        temps = pd.to_numeric(df[temp_col], errors="coerce").to_numpy(dtype=float)
        temps[~np.isfinite(temps)] = np.nan
    else:
        temps = np.full(len(df), np.nan)

    source_col = df["temp_source"].to_numpy() if "temp_source" in df.columns else None

    keep = valid.to_numpy()
    epoch = (ts.to_numpy(dtype="datetime64[ns]").astype(np.int64) // 1_000_000_000)[keep]
    lats = lat.to_numpy(dtype=float)[keep]
    lons = lon.to_numpy(dtype=float)[keep]
    temps = temps[keep]
    idvals = ids.to_numpy()[keep]
    sources = source_col[keep] if source_col is not None else None

    tracks = []
    for individual in sorted(set(idvals.tolist())):
        sel = idvals == individual
        order = np.argsort(epoch[sel], kind="stable")
        t = epoch[sel][order]
        la = lats[sel][order]
        lo = lons[sel][order]
        te = temps[sel][order]
        src = sources[sel][order] if sources is not None else None
        if dedup:
            first = np.ones(len(t), dtype=bool)
            first[1:] = np.diff(t) != 0
            t, la, lo, te = t[first], la[first], lo[first], te[first]
            src = src[first] if src is not None else None
        tracks.append(
            Track(
                individual_id=individual,
                timestamps=t,
                lats=la,
                lons=lo,
                temps=te,
                temp_source=np.asarray(src, dtype=object) if src is not None else None,
            )
        )
    return tracks, report


def median_coordinate(track: Track) -> tuple[float, float]:
    """Component-wise median of (lat, lon); even counts average the middles."""
    if len(track) == 0:
        raise DomainError("median_coordinate requires a non-empty track")
    return float(np.median(track.lats)), float(np.median(track.lons))


def decimate_track(track: Track, every_nth: int) -> Track:
    """Keep every Nth fix, always retaining the first and last point."""
    if every_nth < 1:
        raise DomainError("decimation factor must be >= 1")
    n = len(track)
    if every_nth == 1 or n <= 2:
        return track
    idx = np.arange(0, n, every_nth)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    return Track(
        individual_id=track.individual_id,
        timestamps=track.timestamps[idx],
        lats=track.lats[idx],
        lons=track.lons[idx],
        temps=track.temps[idx],
        temp_source=track.temp_source[idx] if track.temp_source is not None else None,
        station_id=track.station_id,
    )


def _iso_utc(epoch_s: int) -> str:
    return datetime.fromtimestamp(int(epoch_s), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_canonical_csv(track: Track, path) -> None:
    """Write the canonical round-trip CSV (timestamp ISO-8601 UTC, lat, lon,
    temperature, id, plus temp_source/station_id for enriched tracks)."""
    enriched = track.temp_source is not None
    header = ["timestamp", "lat", "lon", "temperature", "id"]
    if enriched:
        header += ["temp_source", "station_id"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(track)):
            temp = track.temps[i]
            row = [
                _iso_utc(track.timestamps[i]),
                repr(float(track.lats[i])),
                repr(float(track.lons[i])),
                "" if np.isnan(temp) else repr(float(temp)),
                track.individual_id,
            ]
            if enriched:
                src = str(track.temp_source[i])
                row += [src, track.station_id or "" if src.startswith("station") else ""]
            writer.writerow(row)


def read_canonical_csv(path) -> Track:
    """Read a single-individual canonical CSV back into a Track."""
    tracks, _ = parse_tracks(Path(path), schema_map=CANONICAL_SCHEMA)
    if len(tracks) != 1:
        raise DomainError(f"expected one individual in {path}, found {len(tracks)}")
    return tracks[0]
