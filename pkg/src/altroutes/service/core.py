"""Query handling: snap, fan out to engines, blind, cache, rate.

The core is framework-free; the HTTP layer in app.py is a thin shim over
this class. Payloads sent to clients never contain engine identifiers;
the label-to-engine mapping lives in the query cache and is persisted
with each rating.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from dataclasses import dataclass

from ..analytics import (
    AggregateRow,
    CategoryBoundaries,
    CohortFilter,
    LengthCategory,
    aggregate,
    rm_anova,
)
from ..engines import run_engine
from ..errors import InvalidInputError, NoRouteError, OutOfAreaError
from ..geo import GeoPoint
from ..network import RoadNetwork
from ..sptree import Path
from .blinding import assign_labels
from .config import ServiceConfig
from .provider import ProviderAdapter, UnavailableProvider
from .store import RatingStore


def display_minutes(seconds: float) -> int:
    """Round half up to whole minutes for display."""
    return int(math.floor(seconds / 60.0 + 0.5))


def path_geometry(path: Path, net: RoadNetwork) -> dict:
    """GeoJSON LineString along the route's vertices."""
    coords = [[net.vertex_point(v).lon, net.vertex_point(v).lat] for v in path.vertices()]
    return {"type": "LineString", "coordinates": coords}


@dataclass
class CachedQuery:
    query_id: str
    label_map: dict[str, str]  # label -> engine id
    fastest_time: float
    source: GeoPoint
    target: GeoPoint
    created: float


class QueryService:
    def __init__(
        self,
        net: RoadNetwork,
        config: ServiceConfig,
        store: RatingStore,
        provider: ProviderAdapter | None = None,
        id_factory=None,
        clock=time.time,
    ):
        self.net = net
        self.config = config
        self.store = store
        self.provider = provider if provider is not None else UnavailableProvider()
        self._ids = id_factory or (lambda: uuid.uuid4().hex)
        self._clock = clock
        self._cache: dict[str, CachedQuery] = {}
        self._cache_lock = threading.Lock()
        self.boundaries = CategoryBoundaries(
            config.category_small_max, config.category_medium_max, config.category_long_max
        )

    # -- queries -----------------------------------------------------------

    def handle_query(
        self,
        source: GeoPoint,
        target: GeoPoint,
        k: int | None = None,
        engines: list[str] | None = None,
    ) -> dict:
        k = self.config.k_default if k is None else k
        if not (1 <= k <= 5):
            raise InvalidInputError(f"k must lie in 1..5, got {k}")
        for point, name in ((source, "source"), (target, "target")):
            if not self.net.rect.contains(point):
                raise OutOfAreaError(f"{name} lies outside the served area")
        s = self.net.snap_to_vertex(source)
        t = self.net.snap_to_vertex(target)
        if s == t:
            raise InvalidInputError("source and target snap to the same vertex")

        enabled = engines if engines is not None else list(self.config.engines)
        unknown = [e for e in enabled if e not in self.config.engines]
        if unknown:
            raise InvalidInputError(f"engines not enabled: {unknown}")

        route_groups: dict[str, list[Path]] = {}
        omitted = 0
        fastest: float | None = None
        for engine in enabled:
            try:
                result = run_engine(
                    engine,
                    self.net,
                    s,
                    t,
                    k,
                    penalty_factor=self.config.penalty_factor,
                    stretch_bound=self.config.stretch_bound,
                    theta=self.config.theta,
                )
            except NoRouteError:
                raise
            except Exception:
                omitted += 1
                continue
            route_groups[engine] = result.routes
            if result.routes:
                fastest = result.routes[0].travel_time if fastest is None else min(
                    fastest, result.routes[0].travel_time
                )
        if fastest is None:
            raise NoRouteError("no engine produced a route")

        if self.provider.available:
            try:
                external = self.provider.fetch(source, target, k)
            except Exception:
                external = []
                omitted += 1
            if external:
                route_groups[self.provider.name] = external

        query_id = self._ids()
        label_map = assign_labels(
            list(route_groups),
            policy=self.config.label_policy,
            seed=self.config.shuffle_seed,
            query_id=query_id,
        )
        now = self._clock()
        with self._cache_lock:
            self._evict_expired(now)
            self._cache[query_id] = CachedQuery(query_id, label_map, fastest, source, target, now)

        groups = [
            {
                "label": label,
                "routes": [
                    {
                        "display_minutes": display_minutes(p.travel_time),
                        "travel_time_seconds": p.travel_time,
                        "geometry": path_geometry(p, self.net),
                    }
                    for p in route_groups[engine]
                ],
            }
            for label, engine in sorted(label_map.items())
        ]
        return {
            "schema_version": 1,
            "query_id": query_id,
            "fastest_time_seconds": fastest,
            "fastest_display_minutes": display_minutes(fastest),
            "groups": groups,
            "omitted_groups": omitted,
        }

    # -- ratings -----------------------------------------------------------

    def record_rating(self, query_id: str, scores: dict[str, int], resident: bool) -> dict:
        with self._cache_lock:
            self._evict_expired(self._clock())
            cached = self._cache.get(query_id)
        if cached is None:
            raise KeyError(f"unknown or expired query id {query_id!r}")
        expected = set(cached.label_map)
        got = set(scores)
        if got != expected:
            raise InvalidInputError(
                f"scores must cover exactly the returned labels {sorted(expected)}, got {sorted(got)}"
            )
        for label, value in scores.items():
            if not isinstance(value, int) or not (1 <= value <= 5):
                raise InvalidInputError(f"score for {label} outside 1..5: {value}")
        engine_scores = {cached.label_map[label]: int(v) for label, v in scores.items()}
        record = {
            "query_id": query_id,
            "city": self.config.city,
            "source": [cached.source.lat, cached.source.lon],
            "target": [cached.target.lat, cached.target.lon],
            "fastest_time_seconds": cached.fastest_time,
            "resident": bool(resident),
            "scores": engine_scores,
            "label_map": dict(cached.label_map),
            "timestamp": _iso_utc(self._clock()),
        }
        self.store.append(record)
        return {"ok": True, "query_id": query_id}

    def _evict_expired(self, now: float) -> None:
        ttl = self.config.query_cache_ttl_seconds
        dead = [qid for qid, q in self._cache.items() if now - q.created > ttl]
        for qid in dead:
            del self._cache[qid]

    # -- analytics ---------------------------------------------------------

    def stats(
        self,
        city: str | None = None,
        residents_only: bool = False,
        category: str | None = None,
        anova: bool = False,
    ) -> dict:
        cohort = CohortFilter(
            city=city,
            residents_only=residents_only,
            category=LengthCategory(category) if category else None,
            boundaries=self.boundaries,
        )
        records = self.store.snapshot()
        row: AggregateRow = aggregate(records, cohort)
        payload = {
            "cohort": row.cohort,
            "count": row.count,
            "per_approach": {
                a: {"mean": mean, "sd": sd} for a, (mean, sd) in row.per_approach.items()
            },
            "flags": list(row.flags),
        }
        if anova:
            picked = [r for r in records if cohort.matches(r)]
            result = rm_anova(picked)
            payload["anova"] = {
                "F": result.F if not math.isinf(result.F) else "inf",
                "df_between": result.df_between,
                "df_error": result.df_error,
                "p": result.p,
            }
        return payload


def _iso_utc(epoch: float) -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(epoch))
