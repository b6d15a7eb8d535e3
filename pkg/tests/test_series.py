import numpy as np
import pytest

from lociscan.enrich import default_grid_interval, normalize_interpolate
from lociscan.errors import DomainError

H = 3600


def test_half_hour_grid_interpolates_midpoint():
    series = normalize_interpolate([12 * H, 13 * H], [20.0, 22.0], 1800.0)
    assert series.timestamps.tolist() == [12 * H, 12.5 * H, 13 * H]
    assert series.temps.tolist() == [20.0, 21.0, 22.0]
    assert series.interpolated.tolist() == [False, True, False]


def test_single_sample_grid_is_that_sample():
    series = normalize_interpolate([5 * H], [17.25], 600.0)
    assert series.timestamps.tolist() == [5 * H]
    assert series.temps.tolist() == [17.25]
    assert series.interpolated.tolist() == [False]


def test_gap_beyond_cap_leaves_hole():
    # 08:00 -> 14:00 is a 6 h raw gap: nothing strictly inside it
    ts = [6 * H, 7 * H, 8 * H, 14 * H, 15 * H]
    vals = [10.0, 11.0, 12.0, 18.0, 19.0]
    series = normalize_interpolate(ts, vals, 1800.0)
    inside = (series.timestamps > 8 * H) & (series.timestamps < 14 * H)
    assert not inside.any()
    # the raw samples themselves are all on the grid, exact
    for raw_t, raw_v in zip(ts, vals):
        idx = np.flatnonzero(series.timestamps == raw_t)
        assert idx.size == 1
        assert series.temps[idx[0]] == raw_v
        assert not series.interpolated[idx[0]]


def test_raw_samples_on_grid_pass_through_unchanged():
    rng = np.random.default_rng(6)
    ts = np.arange(0, 48 * H, H)
    vals = 15 + 10 * np.sin(ts / (24 * H) * 2 * np.pi) + rng.normal(0, 0.3, ts.size)
    series = normalize_interpolate(ts, vals, 900.0)
    on_grid = np.isin(series.timestamps, ts)
    raw_positions = {int(t): v for t, v in zip(ts, vals)}
    for t, v, flag in zip(series.timestamps[on_grid], series.temps[on_grid], series.interpolated[on_grid]):
        assert v == raw_positions[int(t)]
        assert not flag


def test_linear_interpolation_matches_oracle_between_samples():
    ts = [0, H, 2 * H]
    vals = [0.0, 10.0, -2.0]
    series = normalize_interpolate(ts, vals, 600.0)
    for t, v, flag in zip(series.timestamps, series.temps, series.interpolated):
        if not flag:
            continue
        lo = max(r for r in ts if r < t)
        hi = min(r for r in ts if r > t)
        frac = (t - lo) / (hi - lo)
        expected = vals[ts.index(lo)] + frac * (vals[ts.index(hi)] - vals[ts.index(lo)])
        assert v == pytest.approx(expected, abs=1e-12)


def test_timestamps_strictly_increasing_and_on_grid():
    ts = [0, H, H, 3 * H, 9 * H, 10 * H]  # duplicate + gap
    series = normalize_interpolate(ts, [1.0, 2.0, 99.0, 4.0, 5.0, 6.0], 1200.0)
    assert (np.diff(series.timestamps) > 0).all()
    offsets = (series.timestamps - series.timestamps[0]) / 1200.0
    np.testing.assert_allclose(offsets, np.round(offsets), atol=1e-9)
    # duplicate raw timestamp keeps the first value
    assert series.temps[series.timestamps == H][0] == 2.0


def test_empty_series_is_domain_error():
    with pytest.raises(DomainError):
        normalize_interpolate([], [], 600.0)


def test_descending_series_rejected():
    with pytest.raises(DomainError):
        normalize_interpolate([2 * H, H], [1.0, 2.0], 600.0)


def test_default_grid_interval_floors_at_ten_minutes():
    assert default_grid_interval(1800.0) == 1800.0
    assert default_grid_interval(60.0) == 600.0
    assert default_grid_interval(None) == 3600.0
