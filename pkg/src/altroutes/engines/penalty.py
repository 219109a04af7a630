"""Penalty engine: iterated shortest paths with multiplicative penalties.

Each iteration runs Dijkstra on a per-query working copy of the edge
weights, then multiplies the weight of every edge on the path it just
found. Penalties accumulate, so an edge hit twice carries factor^2. Paths
are reported with their original travel times.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError, NoRouteError
from ..network import RoadNetwork
from ..sptree import Orientation, Path, build_tree
from . import AlternativeSet, EngineDiagnostics


@dataclass(frozen=True)
class PenaltyConfig:
    k: int
    penalty_factor: float = 1.4
    max_iterations: int | None = None  # defaults to 4k

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if self.penalty_factor <= 1.0:
            raise InvalidInputError("penalty factor must exceed 1")
        if self.max_iterations is not None and self.max_iterations < self.k:
            raise InvalidInputError("iteration cap must be >= k")

    @property
    def iteration_cap(self) -> int:
        return 4 * self.k if self.max_iterations is None else self.max_iterations


def penalty_routes(net: RoadNetwork, s: int, t: int, cfg: PenaltyConfig) -> AlternativeSet:
    working = [e.travel_time for e in net.edges]
    applications: dict[tuple[int, int], int] = {}
    routes: list[Path] = []
    seen: set[tuple[tuple[int, int], ...]] = set()
    diag = EngineDiagnostics()

    for _ in range(cfg.iteration_cap):
        diag.iterations += 1
        tree = build_tree(net, s, Orientation.FORWARD, weights=working, stop_at=t)
        if not tree.reachable(t):
            if not routes:
                raise NoRouteError(f"no route from {s} to {t}")
            break  # penalties cannot disconnect t; defensive only
        found = Path.from_edges(tree.path_to_root_edges(t)) if s != t else Path.from_edges((), source=s)
        key = found.edge_keys()
        if key in seen:
            diag.rejected += 1
        else:
            seen.add(key)
            routes.append(found)
            if len(routes) >= cfg.k:
                break
        for e in found.edges:
            i = _edge_index(net, e.key)
            working[i] *= cfg.penalty_factor
            applications[e.key] = applications.get(e.key, 0) + 1
        if not found.edges:
            break  # s == t: nothing to penalize, nothing else to find

    diag.partial = len(routes) < cfg.k
    if diag.partial:
        diag.notes.append(f"found {len(routes)} of {cfg.k} routes within {diag.iterations} iterations")
    diag.details["penalty_applications"] = applications
    diag.details["final_penalized_weights"] = {
        key: working[_edge_index(net, key)] for key in applications
    }
    return AlternativeSet("penalty", routes, diag)


def _edge_index(net: RoadNetwork, key: tuple[int, int]) -> int:
    for to, _, eidx in net.out_adjacency(key[0]):
        if to == key[1]:
            return eidx
    raise InvalidInputError(f"edge {key} not in network")
