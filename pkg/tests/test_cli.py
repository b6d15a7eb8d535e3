import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from lociscan.cli import cli
from lociscan.tracks import read_canonical_csv


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(cli, args, catch_exceptions=False)


def test_ingest_writes_canonical_tracks_and_rejections(runner, kruger_mini_csv, tmp_path):
    out = tmp_path / "tracks"
    result = invoke(runner, ["ingest", "--input", str(kruger_mini_csv), "--out-dir", str(out)])
    assert result.exit_code == 0
    files = sorted(p.name for p in out.glob("*.csv"))
    assert files == ["AM105-mini.csv", "AM306-mini.csv"]
    rejections = json.loads((out / "rejections.json").read_text())
    assert rejections["rejected"] == 3
    assert len(rejections["first_rejected_lines"]) == 3


def test_cluster_fig1_style_parameters(runner, kruger_mini_csv, tmp_path):
    out = tmp_path / "tracks"
    invoke(runner, ["ingest", "--input", str(kruger_mini_csv), "--out-dir", str(out)])
    track_file = out / "AM306-mini.csv"
    result = invoke(
        runner,
        ["cluster", "--track", str(track_file), "--features", "lat,lon", "--eps", "0.1", "--min-pts", "35"],
    )
    assert result.exit_code == 0
    centroid_file = out / "AM306-mini.centroids.geojson"
    labels_file = out / "AM306-mini.labels.csv"
    assert centroid_file.exists() and labels_file.exists()
    doc = json.loads(centroid_file.read_text())
    assert doc["type"] == "FeatureCollection"
    for feature in doc["features"]:
        assert feature["geometry"]["type"] == "Point"
        assert feature["properties"]["feature_space"] == "without_temp"


def test_cluster_rejects_zero_eps_with_flag_named(runner, kruger_mini_csv, tmp_path):
    out = tmp_path / "tracks"
    invoke(runner, ["ingest", "--input", str(kruger_mini_csv), "--out-dir", str(out)])
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "lociscan.cli",
            "cluster",
            "--track",
            str(out / "AM306-mini.csv"),
            "--eps",
            "0",
            "--min-pts",
            "5",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "--eps" in proc.stderr


def test_enrich_exact_grid_fixture_matches_100(runner, tmp_path):
    # track on the station's exact hourly grid
    stations = tmp_path / "stations"
    stations.mkdir()
    (stations / "stations.csv").write_text("id,name,lat,lon\nST,Test,-24.0,31.0\n")
    lines = ["timestamp,temp_c"]
    for h in range(24):
        lines.append(f"2007-08-01T{h:02d}:00:00Z,{15 + h % 8}")
    (stations / "ST.csv").write_text("\n".join(lines) + "\n")

    track_csv = tmp_path / "track.csv"
    rows = ["timestamp,lat,lon,temperature,id"]
    for h in range(6, 18):
        rows.append(f"2007-08-01T{h:02d}:00:00Z,-24.1,31.1,,E1")
    track_csv.write_text("\n".join(rows) + "\n")

    result = invoke(
        runner,
        ["enrich", "--track", str(track_csv), "--fuzzy", "--provider", "fixtures", "--fixtures", str(stations)],
    )
    assert result.exit_code == 0
    report = json.loads(track_csv.with_suffix(".report.json").read_text())
    assert report["matched_fraction"] == 100.0
    assert report["fuzzy"] is True
    enriched = read_canonical_csv(track_csv.with_suffix(".enriched.csv"))
    assert np.isfinite(enriched.temps).all()
    assert enriched.temp_source is not None
    assert set(enriched.temp_source.tolist()) == {"station_fuzzy"}


def test_enrich_no_station_exits_4(runner, tmp_path):
    stations = tmp_path / "stations"
    stations.mkdir()
    (stations / "stations.csv").write_text("id,name,lat,lon\nST,Far,40.0,-100.0\n")
    (stations / "ST.csv").write_text("timestamp,temp_c\n2007-08-01T00:00:00Z,10\n2007-08-01T01:00:00Z,11\n")
    track_csv = tmp_path / "track.csv"
    track_csv.write_text(
        "timestamp,lat,lon,temperature,id\n"
        "2007-08-01T00:00:00Z,-24.0,31.0,,E1\n"
        "2007-08-01T01:00:00Z,-24.0,31.0,,E1\n"
    )
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "lociscan.cli",
            "enrich",
            "--track",
            str(track_csv),
            "--provider",
            "fixtures",
            "--fixtures",
            str(stations),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 4
    assert "error:" in proc.stderr


def test_rank_cli_matches_library(runner, etosha_settlements_csv, tmp_path):
    # synthetic centroid file: 3 near Halali, 1 near Okawe
    features = []
    for lat, lon in [(-19.03, 16.47), (-19.04, 16.48), (-19.02, 16.46), (-17.22, 15.91)]:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [lon, lat]},
                "properties": {"cluster_id": 0, "member_count": 5, "feature_space": "without_temp",
                               "fuzzy": False, "individual_id": "X"},
            }
        )
    centroid_file = tmp_path / "c.geojson"
    centroid_file.write_text(json.dumps({"type": "FeatureCollection", "features": features}))

    out_json = tmp_path / "ranking.json"
    out_csv = tmp_path / "ranking.csv"
    result = invoke(
        runner,
        [
            "rank",
            "--centroids",
            str(centroid_file),
            "--settlements",
            str(etosha_settlements_csv),
            "--out-json",
            str(out_json),
            "--out-csv",
            str(out_csv),
        ],
    )
    assert result.exit_code == 0
    doc = json.loads(out_json.read_text())
    assert doc["rows"][0]["name"] == "Halali"
    assert doc["rows"][0]["count"] == 3
    header = out_csv.read_text().splitlines()[0]
    assert header == "geometry,name,type,count"


def test_rank_deterministic_bytes(runner, etosha_settlements_csv, tmp_path):
    centroid_file = tmp_path / "c.geojson"
    centroid_file.write_text(
        json.dumps(
            {
                "type": "FeatureCollection",
                "features": [
                    {
                        "type": "Feature",
                        "geometry": {"type": "Point", "coordinates": [16.47, -19.03]},
                        "properties": {},
                    }
                ],
            }
        )
    )
    outs = []
    for i in range(2):
        out_json = tmp_path / f"r{i}.json"
        invoke(
            runner,
            [
                "rank",
                "--centroids",
                str(centroid_file),
                "--settlements",
                str(etosha_settlements_csv),
                "--strategy",
                "kmeans",
                "--seed",
                "7",
                "--out-json",
                str(out_json),
                "--out-csv",
                str(tmp_path / f"r{i}.csv"),
            ],
        )
        outs.append(out_json.read_bytes())
    assert outs[0] == outs[1]


def test_missing_required_flag_is_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "lociscan.cli", "cluster", "--eps", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2


def test_bad_input_file_is_data_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,lat\n")  # missing columns for canonical schema
    proc = subprocess.run(
        [sys.executable, "-m", "lociscan.cli", "cluster", "--track", str(bad), "--eps", "1", "--min-pts", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert proc.stderr.startswith("error:")
