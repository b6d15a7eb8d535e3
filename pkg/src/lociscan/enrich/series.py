"""Station time-series normalization onto a regular grid."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

MAX_INTERPOLATION_GAP_S = 3 * 3600.0
MIN_GRID_INTERVAL_S = 600.0


@dataclass
class StationSeries:
    """Temperatures on a regular time grid (holes where the raw archive had
    gaps beyond the interpolation cap). Timestamps are float epoch seconds,
    strictly increasing; ``interpolated`` flags synthesized samples."""

    station_id: str
    timestamps: np.ndarray
    temps: np.ndarray
    grid_interval: float
    interpolated: np.ndarray

    def __len__(self) -> int:
        return int(self.timestamps.shape[0])


def default_grid_interval(track_median_interval: float | None) -> float:
    """Grid step for enrichment: the track's median sampling interval,
    floored at 10 minutes; hourly when the track has no usable cadence."""
    if track_median_interval is None or track_median_interval <= 0:
        return 3600.0
    return max(MIN_GRID_INTERVAL_S, float(track_median_interval))


def normalize_interpolate(
    timestamps,
    temps,
    target_interval: float,
    max_gap: float = MAX_INTERPOLATION_GAP_S,
    station_id: str = "",
) -> StationSeries:
    """Resample a raw (usually hourly) series onto a regular grid.

    The grid starts at the first raw timestamp and steps by
    ``target_interval`` seconds. Grid times falling on a raw sample keep its
    exact value (flag False); times between raw samples are linearly
    interpolated (flag True) unless the bracketing raw gap exceeds
    ``max_gap``, which leaves a hole in the grid.
    """
    ts = np.asarray(timestamps, dtype=float)
    vals = np.asarray(temps, dtype=float)
    if ts.size == 0:
        raise DomainError("cannot normalize an empty station series")
    if ts.size != vals.size:
        raise DomainError("timestamps and temperatures differ in length")
    if np.any(np.diff(ts) < 0):
        raise DomainError("raw station series must be time-ascending")
    if target_interval <= 0:
        raise DomainError("target interval must be positive")

    # Repeated raw timestamps keep the first value.
    first = np.ones(ts.size, dtype=bool)
    first[1:] = np.diff(ts) > 0
    ts, vals = ts[first], vals[first]

    finite = np.isfinite(vals)
    ts, vals = ts[finite], vals[finite]
    if ts.size == 0:
        raise DomainError("station series holds no finite temperatures")

    steps = int(np.floor((ts[-1] - ts[0]) / target_interval))
    grid = ts[0] + target_interval * np.arange(steps + 1)

    pos = np.searchsorted(ts, grid, side="left")
    pos = np.clip(pos, 0, ts.size - 1)
    exact = ts[pos] == grid
    left = np.clip(pos - 1, 0, ts.size - 1)

    out_t, out_v, out_flag = [], [], []
    for g, p, le, ex in zip(grid, pos, left, exact):
        if g > ts[-1]:  # float-rounding guard at the grid tail
            continue
        if ex:
            out_t.append(g)
            out_v.append(vals[p])
            out_flag.append(False)
            continue
        gap = ts[p] - ts[le]
        if p == le or gap > max_gap:
            continue
        frac = (g - ts[le]) / gap
        out_t.append(g)
        out_v.append(vals[le] + frac * (vals[p] - vals[le]))
        out_flag.append(True)

    return StationSeries(
        station_id=station_id,
        timestamps=np.asarray(out_t, dtype=float),
        temps=np.asarray(out_v, dtype=float),
        grid_interval=float(target_interval),
        interpolated=np.asarray(out_flag, dtype=bool),
    )
