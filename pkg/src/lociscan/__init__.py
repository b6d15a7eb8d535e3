"""lociscan: locations-of-interest analysis for animal GPS tracks.

Clusters timestamped GPS fixes (DBSCAN / KMeans over standardized
location, optionally plus temperature), enriches temperature-less tracks
from historical weather-station archives via exact or fuzzy timestamp
joins, and ranks nearby human settlements by centroid counts.
"""

__version__ = "0.1.0"
