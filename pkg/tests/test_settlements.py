import json

import numpy as np
import pytest

from lociscan.cluster.centroids import Centroid, CentroidProvenance
from lociscan.errors import DomainError, SchemaError
from lociscan.settlements import (
    Settlement,
    load_settlements,
    rank_settlements,
    ranking_json,
)

from oracles import nearest_settlement_counts

PROV = CentroidProvenance(feature_space=None, fuzzy_enrichment=False, dataset_id="", individual_id="")


def centroid(lat, lon):
    return Centroid(lat=lat, lon=lon, cluster_id=0, member_count=1, provenance=PROV)


def test_load_empty_geojson_collection(tmp_path):
    path = tmp_path / "s.geojson"
    path.write_text(json.dumps({"type": "FeatureCollection", "features": []}))
    load = load_settlements(path)
    assert load.settlements == []
    assert load.skipped == 0


def test_load_csv_fixture(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("name,type,lat,lon\nA,village,-19.0,16.0\nB,,-19.5,16.5\n,camp,-20.0,17.0\n")
    load = load_settlements(path)
    assert len(load.settlements) == 3
    assert load.settlements[0] == Settlement(lat=-19.0, lon=16.0, name="A", kind="village")
    assert load.settlements[1].kind == "other"
    assert load.settlements[2].name == ""


def test_load_geojson_skips_non_points(tmp_path):
    doc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [16.47, -19.03]},
                "properties": {"name": "Halali", "place": "village"},
            },
            {
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]},
                "properties": {"name": "a road"},
            },
        ],
    }
    path = tmp_path / "s.geojson"
    path.write_text(json.dumps(doc))
    load = load_settlements(path)
    assert len(load.settlements) == 1
    assert load.skipped == 1
    assert load.settlements[0].name == "Halali"
    assert load.settlements[0].kind == "village"


def test_load_etosha_fixture_contains_halali(etosha_settlements_csv):
    load = load_settlements(etosha_settlements_csv)
    assert len(load.settlements) == 10
    halali = next(s for s in load.settlements if s.name == "Halali")
    assert halali.lat == pytest.approx(-19.0356338)
    assert halali.lon == pytest.approx(16.4710969)


def test_bad_csv_schema(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("name,x,y\nA,1,2\n")
    with pytest.raises(SchemaError):
        load_settlements(path)


def test_single_settlement_takes_all():
    settlements = [Settlement(lat=0.0, lon=0.0, name="Only")]
    cents = [centroid(0.1 * i, 0.1 * i) for i in range(7)]
    ranking = rank_settlements(cents, settlements)
    assert ranking.rows[0].centroid_count == 7


def test_two_settlement_equator_fixture():
    settlements = [Settlement(lat=0.0, lon=0.0, name="W"), Settlement(lat=0.0, lon=10.0, name="E")]
    cents = [centroid(0.0, lon) for lon in (1.0, 2.0, 8.0, 9.0)]
    ranking = rank_settlements(cents, settlements)
    counts = {r.settlement.name: r.centroid_count for r in ranking.rows}
    assert counts == {"W": 2, "E": 2}


def test_rows_sorted_by_count_then_name():
    settlements = [
        Settlement(lat=0.0, lon=0.0, name="Zeta"),
        Settlement(lat=5.0, lon=5.0, name="Alpha"),
        Settlement(lat=-5.0, lon=-5.0, name="Midd"),
    ]
    cents = [centroid(0.01, 0.01), centroid(5.01, 5.0), centroid(4.99, 5.0)]
    ranking = rank_settlements(cents, settlements)
    assert [(r.settlement.name, r.centroid_count) for r in ranking.rows] == [
        ("Alpha", 2),
        ("Zeta", 1),
        ("Midd", 0),
    ]


def test_nearest_matches_brute_force_oracle_random_layouts():
    rng = np.random.default_rng(13)
    for _ in range(30):
        n_s = int(rng.integers(1, 12))
        n_c = int(rng.integers(0, 40))
        settlements = [
            Settlement(lat=float(rng.uniform(-25, -15)), lon=float(rng.uniform(12, 20)), name=f"S{i}")
            for i in range(n_s)
        ]
        cents = [
            centroid(float(rng.uniform(-25, -15)), float(rng.uniform(12, 20))) for _ in range(n_c)
        ]
        cutoff = float(rng.uniform(5, 400)) if rng.random() < 0.5 else None
        ranking = rank_settlements(cents, settlements, radius_cutoff_km=cutoff)
        oracle = nearest_settlement_counts(
            [(c.lat, c.lon) for c in cents],
            sorted([(s.name, s.lat, s.lon) for s in settlements]),
            radius_cutoff_km=cutoff,
        )
        got = {r.settlement.name: r.centroid_count for r in ranking.rows}
        want_names = sorted([(s.name, s.lat, s.lon) for s in settlements])
        want = {want_names[i][0]: c for i, c in oracle.items()}
        assert got == want
        if cutoff is None:
            assert sum(got.values()) == n_c


def test_permutation_invariance():
    rng = np.random.default_rng(19)
    settlements = [
        Settlement(lat=float(rng.uniform(-25, -15)), lon=float(rng.uniform(12, 20)), name=f"S{i}")
        for i in range(6)
    ]
    cents = [centroid(float(rng.uniform(-25, -15)), float(rng.uniform(12, 20))) for _ in range(25)]
    base = rank_settlements(cents, settlements)
    rows_base = [(r.settlement.name, r.centroid_count) for r in base.rows]
    for seed in (1, 2, 3):
        perm_rng = np.random.default_rng(seed)
        s_perm = [settlements[i] for i in perm_rng.permutation(len(settlements))]
        c_perm = [cents[i] for i in perm_rng.permutation(len(cents))]
        again = rank_settlements(c_perm, s_perm)
        assert [(r.settlement.name, r.centroid_count) for r in again.rows] == rows_base


def test_kmeans_seeded_reproduces_nearest_on_well_separated_data():
    rng = np.random.default_rng(29)
    seeds = [(-19.0, 16.0), (-21.0, 18.0), (-17.0, 14.0)]
    cents = []
    for (lat, lon), count in zip(seeds, (12, 7, 4)):
        for _ in range(count):
            cents.append(centroid(lat + rng.normal(0, 0.01), lon + rng.normal(0, 0.01)))
    settlements = [Settlement(lat=la, lon=lo, name=f"S{i}") for i, (la, lo) in enumerate(seeds)]
    nearest = rank_settlements(cents, settlements, strategy="nearest")
    kmeans_ranked = rank_settlements(cents, settlements, strategy="kmeans", seed=0)
    as_pairs = lambda r: [(row.settlement.name, row.centroid_count) for row in r.rows]
    assert as_pairs(nearest) == as_pairs(kmeans_ranked) == [("S0", 12), ("S1", 7), ("S2", 4)]


def test_kmeans_with_fewer_centroids_than_settlements_degenerates_to_nearest():
    settlements = [Settlement(lat=0.0, lon=float(i), name=f"S{i}") for i in range(5)]
    cents = [centroid(0.0, 0.1), centroid(0.0, 3.9)]
    ranking = rank_settlements(cents, settlements, strategy="kmeans")
    counts = {r.settlement.name: r.centroid_count for r in ranking.rows}
    assert counts == {"S0": 1, "S4": 1, "S1": 0, "S2": 0, "S3": 0}


def test_empty_centroids_rank_all_zero(etosha_settlements_csv):
    load = load_settlements(etosha_settlements_csv)
    ranking = rank_settlements([], load.settlements)
    assert all(r.centroid_count == 0 for r in ranking.rows)


def test_no_settlements_is_domain_error():
    with pytest.raises(DomainError):
        rank_settlements([], [])


def test_ranking_table_shape():
    settlements = [Settlement(lat=-19.0356338, lon=16.4710969, name="Halali", kind="village")]
    ranking = rank_settlements([centroid(-19.03, 16.47)], settlements)
    table = ranking_json(ranking)
    assert table["rows"] == [
        {"geometry": "POINT (16.4710969 -19.0356338)", "name": "Halali", "type": "village", "count": 1}
    ]
