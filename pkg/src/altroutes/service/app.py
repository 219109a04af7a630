"""HTTP+JSON surface over the query service."""

from __future__ import annotations

from pathlib import Path as FsPath

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..errors import (
    EmptyCohortError,
    InvalidInputError,
    NoRouteError,
    OutOfAreaError,
)
from ..geo import GeoPoint
from ..network import load_network
from .config import ServiceConfig
from .core import QueryService
from .provider import ReplayStubProvider
from .store import RatingStore


class PointModel(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class RoutesRequest(BaseModel):
    source: PointModel
    target: PointModel
    k: int | None = Field(default=None, ge=1, le=5)
    engines: list[str] | None = None


class RatingRequest(BaseModel):
    query_id: str
    scores: dict[str, int]
    resident: bool


def build_service(config: ServiceConfig) -> QueryService:
    net = load_network(config.network_path)
    store = RatingStore(config.rating_store_path)
    provider = ReplayStubProvider(config.provider_fixtures_path, net)
    return QueryService(net, config, store, provider)


def create_app(service: QueryService) -> FastAPI:
    app = FastAPI(title="altroutes", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "vertices": service.net.vertex_count}

    @app.post("/api/routes")
    def routes(req: RoutesRequest):
        try:
            return service.handle_query(
                GeoPoint(req.source.lat, req.source.lon),
                GeoPoint(req.target.lat, req.target.lon),
                k=req.k,
                engines=req.engines,
            )
        except OutOfAreaError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except NoRouteError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InvalidInputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/api/ratings")
    def ratings(req: RatingRequest):
        try:
            return service.record_rating(req.query_id, req.scores, req.resident)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InvalidInputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/api/stats")
    def stats(
        city: str | None = None,
        residents: bool = False,
        category: str | None = None,
        anova: bool = False,
    ):
        try:
            return service.stats(city=city, residents_only=residents, category=category, anova=anova)
        except EmptyCohortError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (InvalidInputError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    dist = service.config.frontend_dist
    if dist and FsPath(dist).is_dir():
        index = FsPath(dist) / "index.html"

        @app.get("/")
        def root():
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=dist), name="static")

    return app


def serve(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(build_service(config))
    uvicorn.run(app, host=config.listen_host, port=config.listen_port)
