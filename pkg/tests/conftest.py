import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from lociscan.tracks import Track

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def kruger_mini_csv() -> Path:
    return DATA_DIR / "kruger_mini.csv"


@pytest.fixture
def stations_dir() -> Path:
    return DATA_DIR / "stations"


@pytest.fixture
def etosha_settlements_csv() -> Path:
    return DATA_DIR / "etosha_settlements.csv"


def make_track(
    timestamps,
    lats=None,
    lons=None,
    temps=None,
    individual_id="T1",
) -> Track:
    ts = np.asarray(timestamps, dtype=np.int64)
    n = ts.size
    return Track(
        individual_id=individual_id,
        timestamps=ts,
        lats=np.asarray(lats if lats is not None else np.zeros(n), dtype=float),
        lons=np.asarray(lons if lons is not None else np.zeros(n), dtype=float),
        temps=np.asarray(temps if temps is not None else np.full(n, np.nan), dtype=float),
    )


@pytest.fixture
def service_data_dir(tmp_path, kruger_mini_csv, stations_dir, etosha_settlements_csv) -> Path:
    """Assembled service data directory: ingested tracks + station fixtures
    + settlement layer."""
    import shutil

    from lociscan.tracks import parse_tracks, write_canonical_csv

    root = tmp_path / "data"
    tracks_dir = root / "tracks" / "kruger-mini"
    tracks_dir.mkdir(parents=True)
    tracks, _ = parse_tracks(kruger_mini_csv)
    for track in tracks:
        write_canonical_csv(track, tracks_dir / f"{track.individual_id}.csv")
    shutil.copytree(stations_dir, root / "stations")
    shutil.copy(etosha_settlements_csv, root / "settlements.csv")
    return root
