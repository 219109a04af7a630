"""External routing provider adapter.

A live commercial integration needs credentials and private traffic data,
so the shipped implementation replays canned routes from a fixture file
keyed by the query's coordinate cell. Any adapter failure makes the
provider unavailable for that query; the rest of the result is unaffected.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import Protocol

from ..geo import GeoPoint
from ..network import RoadNetwork
from ..sptree import Path


class ProviderAdapter(Protocol):
    name: str

    @property
    def available(self) -> bool: ...

    def fetch(self, source: GeoPoint, target: GeoPoint, k: int) -> list[Path]: ...


def cell_key(source: GeoPoint, target: GeoPoint) -> str:
    return f"{source.lat:.3f},{source.lon:.3f}|{target.lat:.3f},{target.lon:.3f}"


class ReplayStubProvider:
    """Replays routes recorded as vertex-id sequences over the served network.

    Travel times come from the network's own edges, never from the fixture,
    mirroring how provider routes are re-timed against the local data.
    """

    name = "external"

    def __init__(self, fixtures_path: str | FsPath | None, net: RoadNetwork):
        self._net = net
        self._cells: dict[str, list[list[int]]] = {}
        self._ok = False
        if fixtures_path is None:
            return
        try:
            raw = json.loads(FsPath(fixtures_path).read_text())
            self._cells = {str(k): v for k, v in raw.get("cells", {}).items()}
            self._ok = True
        except (OSError, ValueError):
            self._ok = False

    @property
    def available(self) -> bool:
        return self._ok

    def fetch(self, source: GeoPoint, target: GeoPoint, k: int) -> list[Path]:
        routes: list[Path] = []
        for vertex_ids in self._cells.get(cell_key(source, target), [])[:k]:
            edges = []
            ok = True
            for u, v in zip(vertex_ids, vertex_ids[1:]):
                e = self._net.edge_between(u, v)
                if e is None:
                    ok = False
                    break
                edges.append(e)
            if ok and edges:
                routes.append(Path.from_edges(edges))
        return routes


class UnavailableProvider:
    name = "external"
    available = False

    def fetch(self, source: GeoPoint, target: GeoPoint, k: int) -> list[Path]:
        return []
