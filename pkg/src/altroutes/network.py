"""Immutable travel-time-weighted road-network graph.

Vertices are dense 0-based ids carrying WGS84 coordinates. Each directed
edge stores physical length, the speed limit, a coarse road class and the
derived travel time in seconds. Construction goes through
:class:`NetworkBuilder`; a built :class:`RoadNetwork` never changes, so it
is safe to share across concurrent queries.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path as FsPath

from .errors import (
    EmptyNetworkError,
    InvalidInputError,
    NetworkFormatError,
    UnknownVertexError,
)
from .geo import METERS_PER_DEG_LAT, BoundingRect, GeoPoint, haversine_m

# Travel-time surcharge for everything that is not a freeway/motorway:
# intersections, lights and turns make the speed-limit estimate too
# optimistic on ordinary roads.
NON_MOTORWAY_FACTOR = 1.3

_SNAP_BUCKET_DEG = 0.005


class RoadClass(Enum):
    MOTORWAY = 0
    OTHER = 1


def edge_travel_time(length: float, max_speed: float, road_class: RoadClass) -> float:
    """Travel time in seconds for an edge of `length` meters at `max_speed` km/h.

    Non-motorway edges are slowed down by ``NON_MOTORWAY_FACTOR``.
    """
    if length <= 0:
        raise InvalidInputError(f"edge length must be positive, got {length}")
    if max_speed <= 0:
        raise InvalidInputError(f"max speed must be positive, got {max_speed}")
    seconds = length / (max_speed / 3.6)
    if road_class is RoadClass.OTHER:
        seconds *= NON_MOTORWAY_FACTOR
    return seconds


@dataclass(frozen=True, slots=True)
class Edge:
    frm: int
    to: int
    length: float
    max_speed: float
    road_class: RoadClass
    travel_time: float

    @property
    def key(self) -> tuple[int, int]:
        return (self.frm, self.to)


class NetworkBuilder:
    """Accumulates vertices and edges, then freezes into a RoadNetwork.

    Vertex ids are assigned densely in insertion order. A duplicate
    directed (from, to) pair keeps the faster edge so that (from, to)
    uniquely identifies an edge in the finished network.
    """

    def __init__(self, rect: BoundingRect):
        self.rect = rect
        self._coords: list[GeoPoint] = []
        self._edges: dict[tuple[int, int], Edge] = {}

    def add_vertex(self, point: GeoPoint) -> int:
        if not self.rect.contains(point):
            raise InvalidInputError(f"vertex {point} outside network rect")
        self._coords.append(point)
        return len(self._coords) - 1

    def add_edge(self, frm: int, to: int, length: float, max_speed: float, road_class: RoadClass) -> None:
        n = len(self._coords)
        if not (0 <= frm < n) or not (0 <= to < n):
            raise UnknownVertexError(f"edge endpoint out of range: ({frm}, {to})")
        if frm == to:
            return  # self-loops carry no routing information
        edge = Edge(frm, to, length, max_speed, road_class, edge_travel_time(length, max_speed, road_class))
        prior = self._edges.get((frm, to))
        if prior is None or (edge.travel_time, edge.length) < (prior.travel_time, prior.length):
            self._edges[(frm, to)] = edge

    def build(self) -> "RoadNetwork":
        if not self._coords:
            raise EmptyNetworkError("network has no vertices")
        return RoadNetwork(self.rect, tuple(self._coords), self._edges)


class RoadNetwork:
    """Directed graph over snapped map geometry. Immutable once built."""

    def __init__(self, rect: BoundingRect, coords: tuple[GeoPoint, ...], edges: dict[tuple[int, int], Edge]):
        self.rect = rect
        self._coords = coords
        # Deterministic edge order: sorted by (from, to).
        self._edges: tuple[Edge, ...] = tuple(edges[k] for k in sorted(edges))
        n = len(coords)
        out_idx: list[list[int]] = [[] for _ in range(n)]
        in_idx: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(self._edges):
            out_idx[e.frm].append(i)
            in_idx[e.to].append(i)
        self._out = tuple(tuple(ix) for ix in out_idx)
        self._in = tuple(tuple(ix) for ix in in_idx)
        # Flat adjacency used by the Dijkstra hot loop: (other endpoint,
        # travel time, edge index), already in lexicographic edge order.
        self._out_adj = tuple(
            tuple((self._edges[i].to, self._edges[i].travel_time, i) for i in ix) for ix in out_idx
        )
        self._in_adj = tuple(
            tuple((self._edges[i].frm, self._edges[i].travel_time, i) for i in ix) for ix in in_idx
        )
        self._snap_grid = self._build_snap_grid()

    # -- topology ---------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._coords)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def vertex_point(self, v: int) -> GeoPoint:
        self._check_vertex(v)
        return self._coords[v]

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        self._check_vertex(v)
        return tuple(self._edges[i] for i in self._out[v])

    def in_edges(self, v: int) -> tuple[Edge, ...]:
        self._check_vertex(v)
        return tuple(self._edges[i] for i in self._in[v])

    def edge_by_index(self, i: int) -> Edge:
        return self._edges[i]

    def edge_between(self, frm: int, to: int) -> Edge | None:
        for i in self._out[frm]:
            if self._edges[i].to == to:
                return self._edges[i]
        return None

    def out_adjacency(self, v: int) -> tuple[tuple[int, float, int], ...]:
        return self._out_adj[v]

    def in_adjacency(self, v: int) -> tuple[tuple[int, float, int], ...]:
        return self._in_adj[v]

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < len(self._coords)):
            raise UnknownVertexError(f"vertex {v} not in network (size {len(self._coords)})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RoadNetwork):
            return NotImplemented
        return (
            self.rect == other.rect
            and self._coords == other._coords
            and self._edges == other._edges
        )

    def __hash__(self) -> int:  # identity hash; instances are immutable
        return id(self)

    # -- snapping ---------------------------------------------------------

    def _build_snap_grid(self) -> dict[tuple[int, int], tuple[int, ...]]:
        buckets: dict[tuple[int, int], list[int]] = {}
        for v, p in enumerate(self._coords):
            key = (int(math.floor(p.lat / _SNAP_BUCKET_DEG)), int(math.floor(p.lon / _SNAP_BUCKET_DEG)))
            buckets.setdefault(key, []).append(v)
        keys = list(buckets) or [(0, 0)]
        self._grid_bounds = (
            min(k[0] for k in keys),
            max(k[0] for k in keys),
            min(k[1] for k in keys),
            max(k[1] for k in keys),
        )
        return {k: tuple(vs) for k, vs in buckets.items()}

    def snap_to_vertex(self, p: GeoPoint) -> int:
        """Vertex closest to `p` by great-circle distance, smallest id on ties.

        Scans grid buckets ring by ring; a ring at Chebyshev offset r can
        only hold points at least (r-1) bucket widths away, which bounds
        how far the search must expand once a candidate is found.
        """
        if not self._coords:
            raise EmptyNetworkError("cannot snap on an empty network")
        center = (int(math.floor(p.lat / _SNAP_BUCKET_DEG)), int(math.floor(p.lon / _SNAP_BUCKET_DEG)))
        min_i, max_i, min_j, max_j = self._grid_bounds
        last_ring = max(
            abs(center[0] - min_i), abs(center[0] - max_i),
            abs(center[1] - min_j), abs(center[1] - max_j),
        )
        # Conservative meters-per-degree lower bound within the rect.
        max_abs_lat = min(89.9, max(abs(self.rect.min_corner.lat), abs(self.rect.max_corner.lat)) + _SNAP_BUCKET_DEG)
        m_per_deg = METERS_PER_DEG_LAT * min(1.0, math.cos(math.radians(max_abs_lat)))
        best: tuple[float, int] | None = None
        for r in range(last_ring + 1):
            if best is not None and (r - 1) * _SNAP_BUCKET_DEG * m_per_deg > best[0]:
                break
            for cell in self._ring_cells(center, r):
                for v in self._snap_grid.get(cell, ()):
                    cand = (haversine_m(p, self._coords[v]), v)
                    if best is None or cand < best:
                        best = cand
        assert best is not None
        return best[1]

    @staticmethod
    def _ring_cells(center: tuple[int, int], r: int) -> list[tuple[int, int]]:
        ci, cj = center
        if r == 0:
            return [(ci, cj)]
        cells = []
        for dj in range(-r, r + 1):
            cells.append((ci - r, cj + dj))
            cells.append((ci + r, cj + dj))
        for di in range(-r + 1, r):
            cells.append((ci + di, cj - r))
            cells.append((ci + di, cj + r))
        return cells


def snap_to_vertex(p: GeoPoint, net: RoadNetwork) -> int:
    return net.snap_to_vertex(p)


# -- binary network file ---------------------------------------------------
#
# Layout (little-endian):
#   8s   magic  b"ALTRNET1"
#   I    format version (1)
#   I    vertex count
#   I    edge count
#   4d   rect: min lat, min lon, max lat, max lon
#   per vertex:  2d  lat, lon
#   per edge:    IIddB  from, to, length, max_speed, road class
# Travel times are recomputed on load; they are a pure function of the
# stored fields, so the round trip is exact.

_MAGIC = b"ALTRNET1"
_VERSION = 1
_HEADER = struct.Struct("<8sIII4d")
_VERTEX = struct.Struct("<2d")
_EDGE = struct.Struct("<IIddB")


def save_network(net: RoadNetwork, path: str | FsPath) -> None:
    with open(path, "wb") as fh:
        fh.write(
            _HEADER.pack(
                _MAGIC,
                _VERSION,
                net.vertex_count,
                net.edge_count,
                net.rect.min_corner.lat,
                net.rect.min_corner.lon,
                net.rect.max_corner.lat,
                net.rect.max_corner.lon,
            )
        )
        for v in range(net.vertex_count):
            p = net.vertex_point(v)
            fh.write(_VERTEX.pack(p.lat, p.lon))
        for e in net.edges:
            fh.write(_EDGE.pack(e.frm, e.to, e.length, e.max_speed, e.road_class.value))


def load_network(path: str | FsPath) -> RoadNetwork:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise NetworkFormatError(f"{path}: truncated header")
    magic, version, n_vertices, n_edges, minlat, minlon, maxlat, maxlon = _HEADER.unpack_from(raw, 0)
    if magic != _MAGIC:
        raise NetworkFormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise NetworkFormatError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + n_vertices * _VERTEX.size + n_edges * _EDGE.size
    if len(raw) != expected:
        raise NetworkFormatError(f"{path}: size {len(raw)} != expected {expected}")
    rect = BoundingRect(GeoPoint(minlat, minlon), GeoPoint(maxlat, maxlon))
    builder = NetworkBuilder(rect)
    off = _HEADER.size
    for _ in range(n_vertices):
        lat, lon = _VERTEX.unpack_from(raw, off)
        off += _VERTEX.size
        builder.add_vertex(GeoPoint(lat, lon))
    for _ in range(n_edges):
        frm, to, length, max_speed, cls = _EDGE.unpack_from(raw, off)
        off += _EDGE.size
        try:
            road_class = RoadClass(cls)
        except ValueError as exc:
            raise NetworkFormatError(f"{path}: bad road class {cls}") from exc
        builder.add_edge(frm, to, length, max_speed, road_class)
    return builder.build()
