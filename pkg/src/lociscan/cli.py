"""Command-line pipeline driver.

Exit codes: 0 success, 2 usage error, 3 data error, 4 provider error; every
failure prints a one-line diagnosis on stderr.
"""

import json
import sys
from pathlib import Path

import click

from .cluster import FeatureSpace, build_features, dbscan, extract_centroids, standard_scale
from .config import load_config
from .enrich import (
    FixtureStationProvider,
    LiveStationProvider,
    default_grid_interval,
    find_station,
    fuzzy_tolerance,
    join_temperature,
    normalize_interpolate,
)
from .errors import DataError, LociscanError, ParameterError, ProviderError
from .exports import (
    centroids_from_geojson,
    centroids_geojson,
    dumps_geojson,
    write_labeling_csv,
)
from .settlements import load_settlements, rank_settlements, ranking_json, write_ranking_csv
from .tracks import (
    MOVEBANK_SCHEMA,
    TEMP_SOURCE_FUZZY,
    parse_tracks,
    read_canonical_csv,
    write_canonical_csv,
)


def _parse_schema(text: str | None) -> dict:
    if not text:
        return dict(MOVEBANK_SCHEMA)
    schema = {}
    for part in text.split(","):
        key, sep, column = part.partition("=")
        if not sep or not key.strip() or not column.strip():
            raise click.BadParameter("schema entries must look like key=column", param_hint="--schema")
        schema[key.strip()] = column.strip()
    return schema


def _positive(name: str):
    def check(ctx, param, value):
        if value is not None and value <= 0:
            raise click.BadParameter("must be > 0", param_hint=name)
        return value

    return check


def _min_one(name: str):
    def check(ctx, param, value):
        if value is not None and value < 1:
            raise click.BadParameter("must be >= 1", param_hint=name)
        return value

    return check


@click.group()
def cli():
    """Locations-of-interest pipeline for animal GPS tracks."""


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--schema", default=None, help="Column map, e.g. timestamp=timestamp,lat=location-lat,...")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--dedup", is_flag=True, help="Drop duplicate (timestamp, individual) rows.")
def ingest(input_path, schema, out_dir, dedup):
    """Parse a tracking CSV into canonical per-individual track files."""
    tracks, report = parse_tracks(Path(input_path), _parse_schema(schema), dedup=dedup)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for track in tracks:
        write_canonical_csv(track, out / f"{track.individual_id}.csv")
    (out / "rejections.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    click.echo(
        f"ingested {len(tracks)} individuals "
        f"({report.total_rows - report.rejected} points, {report.rejected} rejected)"
    )


@cli.command()
@click.option("--track", "track_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--fuzzy", is_flag=True, help="Fuzzy join: tolerance = half the median fix interval.")
@click.option("--provider", type=click.Choice(["fixtures", "live"]), default="fixtures")
@click.option("--fixtures", "fixtures_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--radius-km", default=200.0, show_default=True, callback=_positive("--radius-km"))
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False))
@click.option("--report", "report_path", default=None, type=click.Path(dir_okay=False))
def enrich(track_path, fuzzy, provider, fixtures_dir, radius_km, out_path, report_path):
    """Attach station temperatures to a canonical track file."""
    track = read_canonical_csv(track_path)
    if provider == "fixtures":
        if fixtures_dir is None:
            raise click.BadParameter("fixtures provider needs --fixtures", param_hint="--fixtures")
        station_provider = FixtureStationProvider(fixtures_dir)
    else:
        station_provider = LiveStationProvider()
    station = find_station(track, station_provider, radius_km=radius_km)
    t0, t1 = track.time_range
    raw_ts, raw_temps = station_provider.hourly(station.station_id, t0 - 86400, t1 + 86400)
    if raw_ts.size == 0:
        raise ProviderError(f"station {station.station_id} returned an empty archive")
    series = normalize_interpolate(
        raw_ts,
        raw_temps,
        default_grid_interval(track.sampling_interval_median),
        station_id=station.station_id,
    )
    tolerance = fuzzy_tolerance(track) if fuzzy else 0.0
    enriched, report = join_temperature(track, series, tolerance)

    out = Path(out_path) if out_path else Path(track_path).with_suffix(".enriched.csv")
    write_canonical_csv(enriched, out)
    report_file = Path(report_path) if report_path else Path(track_path).with_suffix(".report.json")
    report_file.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    click.echo(
        f"matched {report.matched_fraction:.2f}% via station {station.station_id} "
        f"({'fuzzy' if report.fuzzy else 'exact'} join) -> {out}"
    )


@cli.command()
@click.option("--track", "track_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--features", default="lat,lon", show_default=True, help="lat,lon or lat,lon,temp")
@click.option("--eps", required=True, type=float, callback=_positive("--eps"))
@click.option("--min-pts", required=True, type=int, callback=_min_one("--min-pts"))
@click.option("--dataset-id", default="", help="Recorded in centroid provenance.")
@click.option("--out-labels", default=None, type=click.Path(dir_okay=False))
@click.option("--out-centroids", default=None, type=click.Path(dir_okay=False))
def cluster(track_path, features, eps, min_pts, dataset_id, out_labels, out_centroids):
    """DBSCAN over a canonical track; writes labeling CSV + centroid GeoJSON."""
    spec = features.replace(" ", "")
    if spec == "lat,lon":
        space = FeatureSpace.WITHOUT_TEMP
    elif spec in ("lat,lon,temp", "lat,lon,temperature"):
        space = FeatureSpace.TEMP_INFLUENCED
    else:
        raise click.BadParameter("expected lat,lon or lat,lon,temp", param_hint="--features")

    track = read_canonical_csv(track_path)
    fb = build_features(track, space)
    labeling = dbscan(standard_scale(fb.matrix), eps, min_pts, feature_space=space)
    fuzzy = bool(
        track.temp_source is not None and (track.temp_source == TEMP_SOURCE_FUZZY).any()
    )
    centroids = extract_centroids(
        track, labeling, retained=fb.retained, fuzzy_enrichment=fuzzy, dataset_id=dataset_id
    )

    stem = Path(track_path)
    labels_file = Path(out_labels) if out_labels else stem.with_suffix(".labels.csv")
    centroid_file = Path(out_centroids) if out_centroids else stem.with_suffix(".centroids.geojson")
    write_labeling_csv(track, labeling, labels_file, retained=fb.retained)
    centroid_file.write_bytes(dumps_geojson(centroids_geojson(centroids)))
    click.echo(
        f"{labeling.n_clusters} clusters, {labeling.noise_count} noise, "
        f"{fb.excluded} excluded -> {centroid_file}"
    )


@cli.command()
@click.option(
    "--centroids",
    "centroid_paths",
    required=True,
    multiple=True,
    type=click.Path(exists=True, dir_okay=False),
)
@click.option("--settlements", "settlements_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", type=click.Choice(["nearest", "kmeans"]), default="nearest", show_default=True)
@click.option("--radius-km", default=None, type=float, callback=_positive("--radius-km"))
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out-csv", default=None, type=click.Path(dir_okay=False))
@click.option("--out-json", default=None, type=click.Path(dir_okay=False))
def rank(centroid_paths, settlements_path, strategy, radius_km, seed, out_csv, out_json):
    """Rank settlements by nearby centroid counts."""
    centroids = []
    for path in centroid_paths:
        centroids.extend(centroids_from_geojson(json.loads(Path(path).read_text())))
    load = load_settlements(settlements_path)
    ranking = rank_settlements(
        centroids, load.settlements, strategy=strategy, radius_cutoff_km=radius_km, seed=seed
    )
    if load.skipped:
        click.echo(f"warning: skipped {load.skipped} non-point settlement geometries", err=True)

    base = Path(settlements_path)
    csv_file = Path(out_csv) if out_csv else base.with_suffix(".ranking.csv")
    json_file = Path(out_json) if out_json else base.with_suffix(".ranking.json")
    write_ranking_csv(ranking, csv_file)
    json_file.write_text(json.dumps(ranking_json(ranking), indent=2, sort_keys=True) + "\n")
    top = ranking.rows[0] if ranking.rows else None
    label = f"{top.settlement.name or '(unnamed)'} ({top.centroid_count})" if top else "none"
    click.echo(f"ranked {len(ranking.rows)} settlements; top: {label} -> {json_file}")


@cli.command()
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=None, type=int)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--provider", default=None, type=click.Choice(["fixtures", "live", "none"]))
def serve(data_dir, port, config_path, provider):
    """Run the HTTP service over an ingested data directory."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path, data_dir=data_dir, port=port, provider=provider)
    app = create_app(config)
    click.echo(f"serving {config.data_dir} on port {config.port}")
    uvicorn.run(app, host="0.0.0.0", port=config.port)


def main():
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:  # --help and friends
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except ParameterError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except ProviderError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(4)
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except LociscanError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
