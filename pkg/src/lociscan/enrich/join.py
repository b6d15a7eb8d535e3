"""Timestamp joins between study tracks and station series, plus fit scoring."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..tracks import (
    TEMP_SOURCE_EXACT,
    TEMP_SOURCE_FUZZY,
    TEMP_SOURCE_NATIVE,
    Track,
)
from .series import StationSeries


@dataclass
class JoinReport:
    """Quality of one enrichment join. Fit fields are None when the track
    carries no native temperature to compare against."""

    matched_fraction: float
    r_squared_zero_centered: float | None
    offset_study_minus_station: float | None
    tolerance_s: float
    fuzzy: bool
    matched: int
    total: int
    station_id: str = ""

    def to_dict(self) -> dict:
        return {
            "matched_fraction": self.matched_fraction,
            "r_squared_zero_centered": self.r_squared_zero_centered,
            "offset_study_minus_station": self.offset_study_minus_station,
            "tolerance_s": self.tolerance_s,
            "fuzzy": self.fuzzy,
            "matched": self.matched,
            "total": self.total,
            "station_id": self.station_id,
        }


def fuzzy_tolerance(track: Track) -> float:
    """Join tolerance in seconds: half the median of the track's consecutive
    timestamp deltas."""
    if len(track) < 2:
        raise DomainError("fuzzy tolerance needs at least two points")
    return float(np.median(np.diff(track.timestamps))) / 2.0


def compute_fit(study_temps, station_temps) -> tuple[float, float]:
    """Zero-centered R-squared and mean offset (study minus station) for
    paired series.

    Both series are mean-centered; R^2 = 1 - sum((s' - t')^2) / sum(s'^2).
    Raises on fewer than two pairs or zero study variance.
    """
    s = np.asarray(study_temps, dtype=float)
    t = np.asarray(station_temps, dtype=float)
    if s.shape != t.shape or s.ndim != 1:
        raise DomainError("fit needs two paired 1-D series")
    if s.size < 2:
        raise DomainError("fit needs at least two pairs")
    offset = float(s.mean() - t.mean())
    sc = s - s.mean()
    tc = t - t.mean()
    denom = float((sc**2).sum())
    if denom == 0.0:
        raise DomainError("study series has zero variance; fit undefined")
    r2 = 1.0 - float(((sc - tc) ** 2).sum()) / denom
    return r2, offset


def join_temperature(
    track: Track,
    series: StationSeries,
    tolerance_s: float,
) -> tuple[Track, JoinReport]:
    """Attach station temperatures to a track by nearest-in-time matching.

    Each study point matches the series sample minimizing |dt| when that
    minimum is within ``tolerance_s`` (ties prefer the earlier sample); one
    sample may serve many points. Native temperatures are kept; only
    temperature-less matched points receive the station value. The report's
    fit fields are filled from matched native-temperature pairs when
    possible.
    """
    if tolerance_s < 0:
        raise DomainError("tolerance must be >= 0")
    n = len(track)
    source = np.array(
        [TEMP_SOURCE_NATIVE if np.isfinite(v) else "" for v in track.temps], dtype=object
    )

    if len(series) == 0 or n == 0:
        report = JoinReport(
            matched_fraction=0.0,
            r_squared_zero_centered=None,
            offset_study_minus_station=None,
            tolerance_s=float(tolerance_s),
            fuzzy=tolerance_s > 0,
            matched=0,
            total=n,
            station_id=series.station_id,
        )
        enriched = Track(
            individual_id=track.individual_id,
            timestamps=track.timestamps.copy(),
            lats=track.lats.copy(),
            lons=track.lons.copy(),
            temps=track.temps.copy(),
            temp_source=source,
            station_id=series.station_id,
        )
        return enriched, report

    t = track.timestamps.astype(float)
    st = series.timestamps
    pos = np.searchsorted(st, t)
    left = np.clip(pos - 1, 0, len(series) - 1)
    right = np.clip(pos, 0, len(series) - 1)
    dl = np.where(pos > 0, np.abs(t - st[left]), np.inf)
    dr = np.where(pos < len(series), np.abs(st[right] - t), np.inf)
    nearest = np.where(dl <= dr, left, right)  # tie -> earlier sample
    dt = np.minimum(dl, dr)
    matched = dt <= tolerance_s

    station_temp = series.temps[nearest]
    temps = track.temps.copy()
    fill = matched & ~np.isfinite(temps)
    temps[fill] = station_temp[fill]
    source[fill] = TEMP_SOURCE_FUZZY if tolerance_s > 0 else TEMP_SOURCE_EXACT

    r2 = offset = None
    native_pairs = matched & np.isfinite(track.temps)
    if native_pairs.sum() >= 2:
        try:
            r2, offset = compute_fit(track.temps[native_pairs], station_temp[native_pairs])
        except DomainError:
            pass  # degenerate comparison: leave fit fields absent

    report = JoinReport(
        matched_fraction=float(matched.sum()) / n * 100.0,
        r_squared_zero_centered=r2,
        offset_study_minus_station=offset,
        tolerance_s=float(tolerance_s),
        fuzzy=tolerance_s > 0,
        matched=int(matched.sum()),
        total=n,
        station_id=series.station_id,
    )
    enriched = Track(
        individual_id=track.individual_id,
        timestamps=track.timestamps.copy(),
        lats=track.lats.copy(),
        lons=track.lons.copy(),
        temps=temps,
        temp_source=source,
        station_id=series.station_id,
    )
    return enriched, report
