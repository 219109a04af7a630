"""Shared graph builders and independent oracles used across the suite."""

from __future__ import annotations

import random
from itertools import count

from altroutes import BoundingRect, GeoPoint, NetworkBuilder, RoadClass, RoadNetwork
from altroutes.network import Edge
from altroutes.sptree import Path

RECT = BoundingRect(GeoPoint(0.0, 0.0), GeoPoint(0.05, 0.05))

# At 3.6 km/h a motorway edge's travel time in seconds equals its length
# in meters, which keeps fixture weights exact.
_UNIT_SPEED = 3.6


def build_network(n_vertices: int, edges: list[tuple[int, int, float]]) -> RoadNetwork:
    """Network whose edge travel times equal the given weights exactly."""
    b = NetworkBuilder(RECT)
    for i in range(n_vertices):
        b.add_vertex(GeoPoint(0.0001 * (i + 1), 0.0002 * (i + 1)))
    for frm, to, w in edges:
        b.add_edge(frm, to, w, _UNIT_SPEED, RoadClass.MOTORWAY)
    return b.build()


# The diamond graph: s=0, a=1, b=2, t=3.
DIAMOND_EDGES = [(0, 1, 2.0), (1, 3, 2.0), (0, 2, 3.0), (2, 3, 2.0), (1, 2, 1.0)]


def diamond() -> RoadNetwork:
    return build_network(4, DIAMOND_EDGES)


def minute_diamond() -> RoadNetwork:
    """Diamond with minute-scale weights (120/180/120/60 s) for display tests."""
    scaled = [(f, t, w * 60.0) for f, t, w in DIAMOND_EDGES]
    return build_network(4, scaled)


def random_network(rng: random.Random, n: int, edge_prob: float = 0.35) -> RoadNetwork:
    """Random directed graph with tie-prone weights from a small pool."""
    pool = [1.0, 1.5, 2.0, 2.5, 3.0]
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < edge_prob:
                edges.append((u, v, rng.choice(pool)))
    return build_network(n, edges)


# -- exhaustive path enumeration oracle -------------------------------------

def enumerate_simple_paths(net: RoadNetwork, s: int, t: int) -> list[tuple[Edge, ...]]:
    """Every simple s->t path, found by DFS."""
    out: list[tuple[Edge, ...]] = []
    if s == t:
        return [()]
    stack: list[Edge] = []
    visited = {s}

    def walk(u: int) -> None:
        for e in net.out_edges(u):
            if e.to in visited:
                continue
            stack.append(e)
            if e.to == t:
                out.append(tuple(stack))
            else:
                visited.add(e.to)
                walk(e.to)
                visited.remove(e.to)
            stack.pop()

    walk(s)
    return out


def path_cost(edges: tuple[Edge, ...]) -> float:
    total = 0.0
    for e in edges:
        total += e.travel_time
    return total


def oracle_shortest(net: RoadNetwork, s: int, t: int) -> tuple[float, tuple[Edge, ...]] | None:
    """Minimum cost and, among cost ties, the path whose reversed edge
    sequence is (from, to)-lexicographically smallest. This mirrors the
    deterministic parent rule: the last edge is minimized first, then the
    one before it, and so on."""
    paths = enumerate_simple_paths(net, s, t)
    if not paths:
        return None
    best_cost = min(path_cost(p) for p in paths)
    winners = [p for p in paths if path_cost(p) == best_cost]
    winners.sort(key=lambda p: tuple((e.frm, e.to) for e in reversed(p)))
    return best_cost, winners[0]


def oracle_distances(net: RoadNetwork, root: int, forward: bool) -> dict[int, float]:
    """Exhaustive-enumeration distances from/to the root."""
    dists: dict[int, float] = {}
    for v in range(net.vertex_count):
        res = oracle_shortest(net, root, v) if forward else oracle_shortest(net, v, root)
        if res is not None:
            dists[v] = res[0]
    return dists


# -- synthetic paths for metric tests ----------------------------------------

_edge_seq = count()


def synthetic_edge(frm: int, to: int, length: float) -> Edge:
    return Edge(frm, to, length, _UNIT_SPEED, RoadClass.MOTORWAY, length)


def synthetic_path(segments: list[tuple[int, int, float]]) -> Path:
    return Path.from_edges([synthetic_edge(f, t, ln) for f, t, ln in segments])
