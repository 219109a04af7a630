"""Dissimilarity engine: via-node sweep with an overlap threshold.

Via vertices are visited in ascending order of the cost of the route
through them; a candidate route joins the result set only when its
dissimilarity to every route already kept exceeds the threshold theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..errors import InvalidInputError, NoRouteError
from ..metrics import dis
from ..network import RoadNetwork
from ..sptree import Orientation, Path, ShortestPathTree, build_tree, path_from_trees
from . import AlternativeSet, EngineDiagnostics

_REL_EPS = 1e-9


@dataclass(frozen=True)
class DissimilarityConfig:
    k: int
    theta: float = 0.5
    stretch_bound: float = 1.4

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if not (0.0 <= self.theta <= 1.0):
            raise InvalidInputError("theta must lie in [0, 1]")
        if self.stretch_bound < 1.0:
            raise InvalidInputError("stretch bound must be >= 1")


def via_candidates(
    tf: ShortestPathTree, tb: ShortestPathTree, stretch_bound: float
) -> Iterator[int]:
    """Vertices whose via-route fits the budget, cheapest via-route first,
    ties by vertex id."""
    if tf.orientation is not Orientation.FORWARD or tb.orientation is not Orientation.BACKWARD:
        raise InvalidInputError("via_candidates needs a forward and a backward tree")
    if tf.net is not tb.net:
        raise InvalidInputError("trees built on different networks")
    fastest = tf.distance_or_inf(tb.root)
    budget = stretch_bound * fastest * (1.0 + _REL_EPS)
    ranked = sorted(
        (tf.distance_or_inf(u) + tb.distance_or_inf(u), u)
        for u in range(tf.net.vertex_count)
        if tf.reachable(u) and tb.reachable(u)
    )
    for via_len, u in ranked:
        if via_len > budget:
            break
        yield u


def dissimilar_routes(
    net: RoadNetwork,
    s: int,
    t: int,
    cfg: DissimilarityConfig,
    trees: tuple[ShortestPathTree, ShortestPathTree] | None = None,
) -> AlternativeSet:
    """`trees` lets callers reuse already-built (forward, backward) trees."""
    tf = trees[0] if trees else build_tree(net, s, Orientation.FORWARD)
    if not tf.reachable(t):
        raise NoRouteError(f"no route from {s} to {t}")
    tb = trees[1] if trees else build_tree(net, t, Orientation.BACKWARD)
    shortest = Path.from_edges(tf.path_to_root_edges(t)) if s != t else Path.from_edges((), source=s)

    kept: list[Path] = [shortest]
    seen = {shortest.edge_keys()}
    diag = EngineDiagnostics()

    for u in via_candidates(tf, tb, cfg.stretch_bound):
        if len(kept) >= cfg.k:
            break
        diag.iterations += 1
        candidate = path_from_trees(tf, tb, u)
        if candidate.edge_keys() in seen:
            continue
        if not candidate.is_simple:
            diag.rejected += 1
            continue
        seen.add(candidate.edge_keys())
        if dis(candidate, kept) > cfg.theta:
            kept.append(candidate)
        else:
            diag.rejected += 1

    diag.partial = len(kept) < cfg.k
    if diag.partial:
        diag.notes.append(f"only {len(kept)} of {cfg.k} sufficiently dissimilar routes")
    diag.details["candidates_seen"] = diag.iterations
    return AlternativeSet("dissimilarity", kept, diag)
