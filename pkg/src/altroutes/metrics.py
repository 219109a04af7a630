"""Route-overlap arithmetic: pairwise Jaccard, set similarity, validation.

Overlap between two routes is the total physical length of the directed
edges they share, counted once per edge. A config flag can merge a street
's two directions into one undirected edge; the default keeps directions
distinct.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SimilarityUndefinedError
from .network import RoadNetwork
from .sptree import Path


def _edge_lengths(p: Path, undirected: bool) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for e in p.edges:
        key = e.key if not undirected else (min(e.frm, e.to), max(e.frm, e.to))
        out.setdefault(key, e.length)
    return out


def overlap_length(x: Path, y: Path, undirected: bool = False) -> float:
    """Total length in meters of edges present in both paths."""
    xs = _edge_lengths(x, undirected)
    ys = _edge_lengths(y, undirected)
    if len(ys) < len(xs):
        xs, ys = ys, xs
    return sum(length for key, length in xs.items() if key in ys)


def jaccard(x: Path, y: Path, undirected: bool = False) -> float:
    """Shared length over union length; 1.0 when both paths are empty."""
    if not x.edges and not y.edges:
        return 1.0
    shared = overlap_length(x, y, undirected)
    union = x.length + y.length - shared
    return shared / union if union > 0 else 1.0


@dataclass(frozen=True)
class SimilarityReport:
    sim: float
    argmax_pair: tuple[int, int]
    pairwise: tuple[tuple[float, ...], ...]


def set_similarity(routes: list[Path] | tuple[Path, ...], undirected: bool = False) -> SimilarityReport:
    """Maximum pairwise Jaccard over a route set, with the attaining pair."""
    n = len(routes)
    if n < 2:
        raise SimilarityUndefinedError(f"set similarity needs >= 2 routes, got {n}")
    matrix = [[1.0] * n for _ in range(n)]
    best = -1.0
    best_pair = (0, 1)
    for i in range(n):
        for j in range(i + 1, n):
            v = jaccard(routes[i], routes[j], undirected)
            matrix[i][j] = v
            matrix[j][i] = v
            if v > best:
                best = v
                best_pair = (i, j)
    return SimilarityReport(best, best_pair, tuple(tuple(row) for row in matrix))


def dis(p: Path, pool: list[Path] | tuple[Path, ...], undirected: bool = False) -> float:
    """Dissimilarity of a candidate to a set: 1 - max Jaccard; 1 for an empty set."""
    if not pool:
        return 1.0
    return 1.0 - max(jaccard(p, q, undirected) for q in pool)


def validate_route(p: Path, net: RoadNetwork, rel_tol: float = 1e-6) -> list[str]:
    """Structural checks; returns a list of violations (empty = valid)."""
    violations: list[str] = []
    prev_to = p.source
    for e in p.edges:
        if e.frm != prev_to:
            violations.append(f"discontinuity at {e.frm}, expected {prev_to}")
        prev_to = e.to
        known = net.edge_between(e.frm, e.to)
        if known is None or known != e:
            violations.append(f"edge {e.key} not in network")
    if p.edges and p.target != p.edges[-1].to:
        violations.append("target does not match last edge")
    if not p.is_simple:
        violations.append("path revisits a vertex")
    tt = sum(e.travel_time for e in p.edges)
    length = sum(e.length for e in p.edges)
    if abs(tt - p.travel_time) > rel_tol * max(1.0, abs(tt)):
        violations.append(f"cached travel time {p.travel_time} != recomputed {tt}")
    if abs(length - p.length) > rel_tol * max(1.0, abs(length)):
        violations.append(f"cached length {p.length} != recomputed {length}")
    return violations
