from .join import JoinReport, compute_fit, fuzzy_tolerance, join_temperature
from .series import (
    MAX_INTERPOLATION_GAP_S,
    MIN_GRID_INTERVAL_S,
    StationSeries,
    default_grid_interval,
    normalize_interpolate,
)
from .stations import (
    FixtureStationProvider,
    LiveStationProvider,
    Station,
    StationProvider,
    find_station,
)

__all__ = [
    "FixtureStationProvider",
    "JoinReport",
    "LiveStationProvider",
    "MAX_INTERPOLATION_GAP_S",
    "MIN_GRID_INTERVAL_S",
    "Station",
    "StationProvider",
    "StationSeries",
    "compute_fit",
    "default_grid_interval",
    "find_station",
    "fuzzy_tolerance",
    "join_temperature",
    "normalize_interpolate",
]
