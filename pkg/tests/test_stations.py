import threading

import numpy as np
import pytest

from lociscan.enrich import FixtureStationProvider, find_station
from lociscan.enrich.stations import parse_hourly_payload, parse_station_entry
from lociscan.errors import NoStationError, ProviderError
from lociscan.geo import haversine_km
from lociscan.tracks import median_coordinate, parse_tracks

from conftest import make_track
from oracles import haversine_scalar_km


def test_haversine_matches_scalar_oracle():
    rng = np.random.default_rng(2)
    for _ in range(50):
        lat1, lat2 = rng.uniform(-60, 60, 2)
        lon1, lon2 = rng.uniform(-170, 170, 2)
        assert haversine_km(lat1, lon1, lat2, lon2) == pytest.approx(
            haversine_scalar_km(lat1, lon1, lat2, lon2), rel=1e-9
        )


def test_fixture_provider_lists_stations_with_coverage(stations_dir):
    provider = FixtureStationProvider(stations_dir)
    stations = provider.stations_near(-24.42, 31.58, radius_km=200.0)
    assert [s.station_id for s in stations] == ["KMP1", "KMP2"]
    assert stations[0].distance_km < stations[1].distance_km
    assert stations[0].hourly_start is not None and stations[0].hourly_end is not None


def test_fixture_provider_missing_directory():
    with pytest.raises(ProviderError):
        FixtureStationProvider("/nonexistent/stations")


def test_find_station_singleton(tmp_path):
    (tmp_path / "stations.csv").write_text("id,name,lat,lon\nONLY,Sole,-24.0,31.0\n")
    (tmp_path / "ONLY.csv").write_text(
        "timestamp,temp_c\n1970-01-01T00:00:00Z,10\n1970-01-01T01:00:00Z,11\n"
    )
    provider = FixtureStationProvider(tmp_path)
    track = make_track([0, 1800, 3600], lats=[-24.2, -24.2, -24.2], lons=[31.1, 31.1, 31.1])
    station = provider.stations_near(*median_coordinate(track), radius_km=500)[0]
    found = find_station(track, provider, radius_km=500)
    assert found.station_id == "ONLY"
    assert found.distance_km == pytest.approx(
        haversine_scalar_km(-24.2, 31.1, -24.0, 31.0), rel=1e-9
    )
    assert station.distance_km == found.distance_km


def test_find_station_prefers_nearer_of_two(tmp_path):
    (tmp_path / "stations.csv").write_text(
        "id,name,lat,lon\nFAR,Far,-24.45,31.0\nNEAR,Near,-24.09,31.0\n"
    )
    archive = "timestamp,temp_c\n1970-01-01T00:00:00Z,10\n1970-01-01T02:00:00Z,11\n"
    (tmp_path / "FAR.csv").write_text(archive)
    (tmp_path / "NEAR.csv").write_text(archive)
    track = make_track([0, 3600], lats=[-24.0, -24.0], lons=[31.0, 31.0])
    found = find_station(track, FixtureStationProvider(tmp_path))
    assert found.station_id == "NEAR"


def test_find_station_requires_coverage_overlap(tmp_path):
    (tmp_path / "stations.csv").write_text("id,name,lat,lon\nOLD,Old,-24.0,31.0\n")
    (tmp_path / "OLD.csv").write_text(
        "timestamp,temp_c\n1970-01-01T00:00:00Z,10\n1970-01-01T01:00:00Z,11\n"
    )
    # track far in the future relative to the archive
    track = make_track([10**9, 10**9 + 3600], lats=[-24.0, -24.0], lons=[31.0, 31.0])
    with pytest.raises(NoStationError, match="200 km"):
        find_station(track, FixtureStationProvider(tmp_path))


def test_find_station_tie_broken_by_id(tmp_path):
    (tmp_path / "stations.csv").write_text(
        "id,name,lat,lon\nBBB,B,-24.0,31.2\nAAA,A,-24.0,30.8\n"
    )
    archive = "timestamp,temp_c\n1970-01-01T00:00:00Z,10\n1970-01-01T01:00:00Z,11\n"
    (tmp_path / "AAA.csv").write_text(archive)
    (tmp_path / "BBB.csv").write_text(archive)
    track = make_track([0, 3600], lats=[-24.0, -24.0], lons=[31.0, 31.0])
    assert find_station(track, FixtureStationProvider(tmp_path)).station_id == "AAA"


def test_fixture_hourly_slices_by_range(stations_dir):
    provider = FixtureStationProvider(stations_dir)
    ts, temps = provider.hourly("KMP1", 0, 2**40)
    assert ts.size == 96
    sliced_ts, sliced = provider.hourly("KMP1", int(ts[10]), int(ts[19]))
    assert sliced_ts.size == 10
    assert sliced_ts[0] == ts[10]
    assert np.isfinite(sliced).all()


def test_fixture_provider_concurrent_archive_reads(stations_dir):
    provider = FixtureStationProvider(stations_dir)
    results = []

    def worker():
        ts, temps = provider.hourly("KMP2", 0, 2**40)
        results.append((ts.size, float(temps.sum())))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1


def test_parse_station_entry_meteostat_shape():
    entry = {
        "id": "68263",
        "name": {"en": "Skukuza"},
        "latitude": -24.9833,
        "longitude": 31.6,
        "inventory": {"hourly": {"start": "2005-01-01", "end": "2010-12-31"}},
    }
    station = parse_station_entry(entry)
    assert station.station_id == "68263"
    assert station.name == "Skukuza"
    assert station.hourly_start is not None and station.hourly_end > station.hourly_start
    assert parse_station_entry({"id": "x"}) is None  # malformed


def test_parse_hourly_payload_sorted_and_filtered():
    payload = {
        "data": [
            {"time": "2007-08-01 02:00:00", "temp": 12.5},
            {"time": "2007-08-01 00:00:00", "temp": 10.0},
            {"time": "2007-08-01 01:00:00", "temp": None},
            {"time": "garbage", "temp": 11.0},
        ]
    }
    ts, temps = parse_hourly_payload(payload)
    assert temps.tolist() == [10.0, 12.5]
    assert (np.diff(ts) > 0).all()


def test_full_enrichment_against_mini_fixture(kruger_mini_csv, stations_dir):
    from lociscan.enrich import (
        default_grid_interval,
        fuzzy_tolerance,
        join_temperature,
        normalize_interpolate,
    )

    tracks, _ = parse_tracks(kruger_mini_csv)
    track = next(t for t in tracks if t.individual_id == "AM306-mini")
    provider = FixtureStationProvider(stations_dir)
    station = find_station(track, provider)
    assert station.station_id == "KMP1"
    t0, t1 = track.time_range
    raw_ts, raw_temps = provider.hourly(station.station_id, t0 - 86400, t1 + 86400)
    series = normalize_interpolate(
        raw_ts, raw_temps, default_grid_interval(track.sampling_interval_median), station_id="KMP1"
    )
    enriched, report = join_temperature(track, series, fuzzy_tolerance(track))
    assert report.matched_fraction == 100.0  # 30-min track grid nests in the station grid
    assert enriched.station_id == "KMP1"
    assert np.isfinite(enriched.temps).all()
