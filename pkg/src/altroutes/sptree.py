"""Shortest-path primitives: Dijkstra trees, point-to-point paths.

All ties are broken deterministically. Among equal-cost parents the edge
with the lexicographically smallest (from, to) pair wins, so two runs on
the same network always produce the same trees, and every engine built on
top of them is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from heapq import heappop, heappush
from typing import Sequence

from .errors import InvalidInputError, NoRouteError, UnknownVertexError
from .network import Edge, RoadNetwork

INF = math.inf


class Orientation(Enum):
    FORWARD = "forward"    # distances from the root
    BACKWARD = "backward"  # distances to the root


@dataclass(frozen=True)
class Path:
    """Contiguous directed edge sequence with cached totals."""

    edges: tuple[Edge, ...]
    source: int
    target: int
    travel_time: float
    length: float

    @staticmethod
    def from_edges(edges: Sequence[Edge], source: int | None = None) -> "Path":
        edges = tuple(edges)
        if not edges:
            if source is None:
                raise InvalidInputError("empty path needs an explicit source vertex")
            return Path((), source, source, 0.0, 0.0)
        tt = 0.0
        length = 0.0
        prev_to = edges[0].frm
        for e in edges:
            if e.frm != prev_to:
                raise InvalidInputError(f"edges not contiguous at {e.frm} (expected {prev_to})")
            tt += e.travel_time
            length += e.length
            prev_to = e.to
        return Path(edges, edges[0].frm, edges[-1].to, tt, length)

    def vertices(self) -> list[int]:
        if not self.edges:
            return [self.source]
        return [self.source] + [e.to for e in self.edges]

    @property
    def is_simple(self) -> bool:
        verts = self.vertices()
        return len(verts) == len(set(verts))

    def edge_keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(e.key for e in self.edges)


class ShortestPathTree:
    """Per-root labeling of optimal distance and parent edge.

    For a FORWARD tree ``distance(v)`` is the travel time from the root to
    v and ``parent_edge(v)`` is the last edge of that optimal path. For a
    BACKWARD tree ``distance(v)`` is the travel time from v to the root
    and ``parent_edge(v)`` is the first edge of the optimal path toward
    the root.
    """

    def __init__(self, net: RoadNetwork, root: int, orientation: Orientation,
                 dist: list[float], parent: list[int]):
        self.net = net
        self.root = root
        self.orientation = orientation
        self._dist = dist
        self._parent = parent

    def reachable(self, v: int) -> bool:
        return self._dist[v] < INF

    def distance(self, v: int) -> float:
        d = self._dist[v]
        if d == INF:
            raise NoRouteError(f"vertex {v} unreachable in tree rooted at {self.root}")
        return d

    def distance_or_inf(self, v: int) -> float:
        return self._dist[v]

    def parent_edge(self, v: int) -> Edge | None:
        i = self._parent[v]
        return None if i < 0 else self.net.edge_by_index(i)

    def parent_edge_indices(self) -> list[int]:
        return self._parent

    def path_to_root_edges(self, v: int) -> list[Edge]:
        """Edge chain linking v with the root (root-to-v order for FORWARD
        trees, v-to-root order for BACKWARD trees)."""
        if self._dist[v] == INF:
            raise NoRouteError(f"vertex {v} unreachable in tree rooted at {self.root}")
        chain: list[Edge] = []
        cur = v
        while cur != self.root:
            e = self.net.edge_by_index(self._parent[cur])
            chain.append(e)
            cur = e.frm if self.orientation is Orientation.FORWARD else e.to
        if self.orientation is Orientation.FORWARD:
            chain.reverse()
        return chain


def build_tree(
    net: RoadNetwork,
    root: int,
    orientation: Orientation,
    weights: Sequence[float] | None = None,
    stop_at: int | None = None,
) -> ShortestPathTree:
    """Dijkstra from `root`. `weights` overrides per-edge travel times
    (indexed by edge position); `stop_at` ends the search once that vertex
    is settled, leaving the remaining labels best-effort."""
    if not (0 <= root < net.vertex_count):
        raise UnknownVertexError(f"root {root} not in network")
    n = net.vertex_count
    dist = [INF] * n
    parent = [-1] * n
    # For tie-breaking, the varying endpoint of the current parent edge.
    parent_other = [n] * n
    settled = bytearray(n)
    adj_rows = net._out_adj if orientation is Orientation.FORWARD else net._in_adj

    dist[root] = 0.0
    heap: list[tuple[float, int]] = [(0.0, root)]
    push, pop = heappush, heappop
    while heap:
        d, u = pop(heap)
        if settled[u]:
            continue
        settled[u] = 1
        if u == stop_at:
            break
        if weights is None:
            for v, w, eidx in adj_rows[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = eidx
                    parent_other[v] = u
                    push(heap, (nd, v))
                elif nd == dist[v] and u < parent_other[v]:
                    parent[v] = eidx
                    parent_other[v] = u
        else:
            for v, _, eidx in adj_rows[u]:
                nd = d + weights[eidx]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = eidx
                    parent_other[v] = u
                    push(heap, (nd, v))
                elif nd == dist[v] and u < parent_other[v]:
                    parent[v] = eidx
                    parent_other[v] = u
    return ShortestPathTree(net, root, orientation, dist, parent)


def shortest_path(net: RoadNetwork, s: int, t: int) -> Path:
    """Minimum-travel-time simple path from s to t."""
    if not (0 <= t < net.vertex_count):
        raise UnknownVertexError(f"target {t} not in network")
    if s == t:
        net.vertex_point(s)  # validates s
        return Path.from_edges((), source=s)
    tree = build_tree(net, s, Orientation.FORWARD, stop_at=t)
    if not tree.reachable(t):
        raise NoRouteError(f"no route from {s} to {t}")
    return Path.from_edges(tree.path_to_root_edges(t))


def path_from_trees(tf: ShortestPathTree, tb: ShortestPathTree, u: int) -> Path:
    """Concatenate the tree path source->u with the tree path u->target.

    The result can revisit a vertex (a lasso); callers check `is_simple`.
    """
    if tf.orientation is not Orientation.FORWARD or tb.orientation is not Orientation.BACKWARD:
        raise InvalidInputError("path_from_trees needs a forward and a backward tree")
    if tf.net is not tb.net:
        raise InvalidInputError("trees built on different networks")
    if not tf.reachable(u) or not tb.reachable(u):
        raise NoRouteError(f"via vertex {u} unreachable in one of the trees")
    edges = tf.path_to_root_edges(u) + tb.path_to_root_edges(u)
    if not edges:
        return Path.from_edges((), source=u)
    return Path.from_edges(edges)
