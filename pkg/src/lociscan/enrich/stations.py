"""Weather-station directory providers and nearest-station lookup.

Two providers share one interface: a local fixture directory (one CSV per
station plus a stations.csv index) used by all tests, and a live
Meteostat-compatible HTTP client that is opt-in. Both are safe for
concurrent queries; archive/response caches are guarded by a lock with
last-write-wins semantics.
"""

from __future__ import annotations

import csv
import os
import threading
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol

import numpy as np
import pandas as pd
import requests

from ..errors import NoStationError, ProviderError, SchemaError
from ..geo import haversine_km
from ..tracks import Track, median_coordinate


@dataclass(frozen=True)
class Station:
    station_id: str
    name: str
    lat: float
    lon: float
    distance_km: float = 0.0
    hourly_start: int | None = None  # epoch seconds of archive coverage
    hourly_end: int | None = None


class StationProvider(Protocol):
    def stations_near(self, lat: float, lon: float, radius_km: float) -> list[Station]:
        """Stations within radius_km, distance filled, sorted by
        (distance, station_id)."""
        ...

    def hourly(self, station_id: str, start_s: int, end_s: int) -> tuple[np.ndarray, np.ndarray]:
        """Raw hourly archive slice as (epoch-second, temp C) arrays."""
        ...


class FixtureStationProvider:
    """Reads stations.csv (id, name, lat, lon) plus one <id>.csv archive
    (timestamp, temp_c) per station from a directory."""

    def __init__(self, directory):
        self.directory = Path(directory)
        index = self.directory / "stations.csv"
        if not index.exists():
            raise ProviderError(f"no stations.csv in {self.directory}")
        self._stations: list[Station] = []
        self._archives: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()
        with open(index, newline="") as fh:
            for row in csv.DictReader(fh):
                try:
                    self._stations.append(
                        Station(
                            station_id=row["id"].strip(),
                            name=row.get("name", "").strip(),
                            lat=float(row["lat"]),
                            lon=float(row["lon"]),
                        )
                    )
                except (KeyError, ValueError) as exc:
                    raise SchemaError(f"bad stations.csv row {row!r}: {exc}") from exc

    def _archive(self, station_id: str) -> tuple[np.ndarray, np.ndarray]:
        with self._lock:
            cached = self._archives.get(station_id)
        if cached is not None:
            return cached
        path = self.directory / f"{station_id}.csv"
        if not path.exists():
            raise ProviderError(f"no archive file for station {station_id}")
        df = pd.read_csv(path)
        if "timestamp" not in df.columns or "temp_c" not in df.columns:
            raise SchemaError(f"{path} must have timestamp,temp_c columns")
        ts = (
            pd.to_datetime(df["timestamp"], utc=True)
            .to_numpy(dtype="datetime64[ns]")
            .astype(np.int64)
            // 1_000_000_000
        )
        temps = pd.to_numeric(df["temp_c"], errors="coerce").to_numpy(dtype=float)
        order = np.argsort(ts, kind="stable")
        archive = (ts[order], temps[order])
        with self._lock:
            self._archives[station_id] = archive  # last write wins
        return archive

    def stations_near(self, lat: float, lon: float, radius_km: float) -> list[Station]:
        found = []
        for st in self._stations:
            d = haversine_km(lat, lon, st.lat, st.lon)
            if d > radius_km:
                continue
            ts, _ = self._archive(st.station_id)
            cov = (int(ts[0]), int(ts[-1])) if ts.size else (None, None)
            found.append(replace(st, distance_km=d, hourly_start=cov[0], hourly_end=cov[1]))
        found.sort(key=lambda s: (s.distance_km, s.station_id))
        return found

    def hourly(self, station_id: str, start_s: int, end_s: int) -> tuple[np.ndarray, np.ndarray]:
        ts, temps = self._archive(station_id)
        mask = (ts >= start_s) & (ts <= end_s)
        return ts[mask], temps[mask]


class LiveStationProvider:
    """Meteostat-compatible HTTP client (station search + hourly archive).

    The API key is read from ``api_key_env`` at request time; requests are
    retried with exponential backoff. Responses are cached per
    (station, date range).
    """

    def __init__(
        self,
        base_url: str = "https://meteostat.p.rapidapi.com",
        api_key_env: str = "METEOSTAT_API_KEY",
        timeout_s: float = 10.0,
        retries: int = 3,
        backoff_s: float = 1.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self.retries = retries
        self.backoff_s = backoff_s
        self._cache: dict[tuple, object] = {}
        self._lock = threading.Lock()

    def _headers(self) -> dict:
        key = os.environ.get(self.api_key_env, "")
        if not key:
            raise ProviderError(f"live provider needs an API key in ${self.api_key_env}")
        return {"x-rapidapi-key": key}

    def _get(self, path: str, params: dict) -> dict:
        url = f"{self.base_url}{path}"
        last_error: Exception | None = None
        for attempt in range(self.retries):
            try:
                resp = requests.get(url, params=params, headers=self._headers(), timeout=self.timeout_s)
                if resp.status_code == 200:
                    return resp.json()
                last_error = ProviderError(f"{url} returned HTTP {resp.status_code}")
            except requests.RequestException as exc:
                last_error = exc
            time.sleep(self.backoff_s * 2**attempt)
        raise ProviderError(f"station API unreachable after {self.retries} attempts: {last_error}")

    def stations_near(self, lat: float, lon: float, radius_km: float) -> list[Station]:
        payload = self._get(
            "/stations/nearby", {"lat": lat, "lon": lon, "limit": 10, "radius": int(radius_km * 1000)}
        )
        found = []
        for entry in payload.get("data", []):
            station = parse_station_entry(entry)
            if station is None:
                continue
            d = haversine_km(lat, lon, station.lat, station.lon)
            if d <= radius_km:
                found.append(replace(station, distance_km=d))
        found.sort(key=lambda s: (s.distance_km, s.station_id))
        return found

    def hourly(self, station_id: str, start_s: int, end_s: int) -> tuple[np.ndarray, np.ndarray]:
        start = datetime.fromtimestamp(start_s, tz=timezone.utc).strftime("%Y-%m-%d")
        end = datetime.fromtimestamp(end_s, tz=timezone.utc).strftime("%Y-%m-%d")
        key = (station_id, start, end)
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            cached = self._get(
                "/stations/hourly", {"station": station_id, "start": start, "end": end, "tz": "UTC"}
            )
            with self._lock:
                self._cache[key] = cached  # last write wins
        return parse_hourly_payload(cached)


def parse_station_entry(entry: dict) -> Station | None:
    """Map one station-search record to a Station; None when malformed."""
    try:
        name = entry.get("name", "")
        if isinstance(name, dict):
            name = name.get("en") or next(iter(name.values()), "")
        inventory = (entry.get("inventory") or {}).get("hourly") or {}
        return Station(
            station_id=str(entry["id"]),
            name=str(name),
            lat=float(entry["latitude"]),
            lon=float(entry["longitude"]),
            hourly_start=_parse_date_s(inventory.get("start")),
            hourly_end=_parse_date_s(inventory.get("end"), end_of_day=True),
        )
    except (KeyError, TypeError, ValueError):
        return None


def parse_hourly_payload(payload: dict) -> tuple[np.ndarray, np.ndarray]:
    rows = payload.get("data") or []
    ts, temps = [], []
    for row in rows:
        when = row.get("time")
        temp = row.get("temp")
        if when is None or temp is None:
            continue
        try:
            parsed = datetime.fromisoformat(str(when).replace(" ", "T"))
        except ValueError:
            continue
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        ts.append(int(parsed.timestamp()))
        temps.append(float(temp))
    order = np.argsort(np.asarray(ts, dtype=np.int64), kind="stable")
    return np.asarray(ts, dtype=np.int64)[order], np.asarray(temps, dtype=float)[order]


def _parse_date_s(value, end_of_day: bool = False) -> int | None:
    if not value:
        return None
    try:
        parsed = datetime.fromisoformat(str(value).replace(" ", "T"))
    except ValueError:
        return None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return int(parsed.timestamp()) + (86399 if end_of_day else 0)


def find_station(track: Track, provider: StationProvider, radius_km: float = 200.0) -> Station:
    """Nearest station (by great-circle distance from the track's median
    coordinate) whose hourly archive overlaps the track's time range; ties
    broken by station_id."""
    lat, lon = median_coordinate(track)
    t0, t1 = track.time_range
    candidates = provider.stations_near(lat, lon, radius_km)
    covered = [
        s
        for s in candidates
        if s.hourly_start is not None
        and s.hourly_end is not None
        and s.hourly_start <= t1
        and s.hourly_end >= t0
    ]
    if not covered:
        raise NoStationError(
            f"no station with hourly coverage overlapping the track within {radius_km:.0f} km "
            f"of ({lat:.4f}, {lon:.4f}); widen the search radius or add fixtures"
        )
    return min(covered, key=lambda s: (s.distance_km, s.station_id))
