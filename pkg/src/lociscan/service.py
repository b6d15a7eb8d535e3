"""HTTP service exposing datasets, cluster runs, and rankings to the map UI.

All analytics happen here (or in the CLI); the UI only renders responses.
Error bodies always carry a machine-readable ``code`` plus a human message.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .cluster import FeatureSpace
from .config import ServiceConfig
from .enrich import FixtureStationProvider, LiveStationProvider
from .errors import ProviderError
from .exports import dumps_geojson, settlements_geojson, track_points_geojson
from .runs import (
    DataRepository,
    InvalidRunRequest,
    RunCache,
    RunRequest,
    UnknownDataset,
    UnknownIndividual,
    execute_run,
)
from .settlements import ranking_json, rank_settlements

MAX_TRACK_POINTS = 20_000

GEOJSON_MEDIA = "application/geo+json"


class RunRequestBody(BaseModel):
    dataset_id: str
    individual_id: str
    feature_space: str = Field(pattern="^(without_temp|temp_influenced)$")
    epsilon: float
    min_pts: int
    fuzzy: bool = False
    enrichment: str = "native"
    decimate: int | None = None


class RankingRequestBody(BaseModel):
    run_ids: list[str]
    strategy: str = "nearest"
    radius_km: float | None = None
    seed: int = 0


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(config: ServiceConfig) -> FastAPI:
    repo = DataRepository(config.data_dir)
    cache = RunCache(config.cache_size)
    provider = None
    if config.provider == "fixtures":
        fixtures = config.fixtures_dir or str(repo.stations_dir)
        try:
            provider = FixtureStationProvider(fixtures)
        except ProviderError:
            provider = None  # no fixtures shipped; enrichment runs will 503
    elif config.provider == "live":
        provider = LiveStationProvider(
            base_url=config.live_base_url,
            api_key_env=config.api_key_env,
            timeout_s=config.request_timeout_s,
            retries=config.request_retries,
        )

    app = FastAPI(title="lociscan", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin] if config.cors_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(InvalidRunRequest)
    async def _invalid_run(request: Request, exc: InvalidRunRequest):
        return _error(400, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _invalid_body(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        return _error(400, "invalid_request", detail)

    @app.exception_handler(UnknownDataset)
    async def _unknown_dataset(request: Request, exc: UnknownDataset):
        return _error(404, "unknown_dataset", str(exc))

    @app.exception_handler(UnknownIndividual)
    async def _unknown_individual(request: Request, exc: UnknownIndividual):
        return _error(404, "unknown_individual", str(exc))

    @app.exception_handler(ProviderError)
    async def _provider_down(request: Request, exc: ProviderError):
        return _error(503, "provider_unavailable", str(exc))

    @app.get("/api/datasets")
    def list_datasets():
        return {"datasets": repo.datasets()}

    @app.get("/api/tracks/{dataset_id}/{individual_id}")
    def get_track(dataset_id: str, individual_id: str, decimate: int | None = None):
        track = repo.load_track(dataset_id, individual_id)
        if decimate is not None and decimate < 1:
            return _error(400, "invalid_decimate", "decimate must be >= 1")
        if decimate is None:
            decimate = max(1, math.ceil(len(track) / MAX_TRACK_POINTS))
        payload = dumps_geojson(track_points_geojson(track, decimate))
        return Response(content=payload, media_type=GEOJSON_MEDIA)

    @app.post("/api/runs")
    def post_run(body: RunRequestBody):
        request = RunRequest(
            dataset_id=body.dataset_id,
            individual_id=body.individual_id,
            feature_space=FeatureSpace(body.feature_space),
            epsilon=body.epsilon,
            min_pts=body.min_pts,
            fuzzy=body.fuzzy,
            enrichment=body.enrichment,
            decimate=body.decimate,
        )
        request.validate()
        cached = cache.get(request.run_id)
        if cached is not None:
            return cached.to_json(cached=True)
        result = execute_run(request, repo, provider, point_ceiling=config.point_ceiling)
        cache.put(result)
        return result.to_json(cached=False)

    @app.get("/api/runs/{run_id}/clusters")
    def get_clusters(run_id: str):
        result = cache.get(run_id)
        if result is None:
            return _error(404, "unknown_run", f"no cached run {run_id}")
        return Response(content=result.clusters_bytes(), media_type=GEOJSON_MEDIA)

    @app.get("/api/runs/{run_id}/centroids")
    def get_centroids(run_id: str):
        result = cache.get(run_id)
        if result is None:
            return _error(404, "unknown_run", f"no cached run {run_id}")
        return Response(content=result.centroids_bytes(), media_type=GEOJSON_MEDIA)

    @app.get("/api/settlements")
    def get_settlements():
        load = repo.settlements()
        if load is None:
            return _error(404, "no_settlements", "data directory has no settlements layer")
        return Response(
            content=dumps_geojson(settlements_geojson(load.settlements)), media_type=GEOJSON_MEDIA
        )

    @app.post("/api/rankings")
    def post_rankings(body: RankingRequestBody):
        load = repo.settlements()
        if load is None:
            return _error(404, "no_settlements", "data directory has no settlements layer")
        centroids = []
        for run_id in body.run_ids:
            result = cache.get(run_id)
            if result is None:
                return _error(404, "unknown_run", f"no cached run {run_id}")
            centroids.extend(result.centroids)
        if body.strategy not in ("nearest", "kmeans"):
            return _error(400, "invalid_strategy", "strategy must be 'nearest' or 'kmeans'")
        ranking = rank_settlements(
            centroids,
            load.settlements,
            strategy=body.strategy,
            radius_cutoff_km=body.radius_km,
            seed=body.seed,
        )
        return ranking_json(ranking)

    return app
