"""Plateau engine: alternatives from branches common to both search trees.

A forward tree rooted at the source and a backward tree rooted at the
target are joined; maximal chains of edges that are parent edges in both
trees ("plateaus") are ranked by travel time, and each plateau pl(u, v)
expands into the route  source->u  + plateau +  v->target  taken from the
two trees. Candidates that revisit a vertex or exceed the stretch bound
are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError, NoRouteError
from ..network import Edge, RoadNetwork
from ..sptree import Orientation, Path, ShortestPathTree, build_tree
from . import AlternativeSet, EngineDiagnostics

_REL_EPS = 1e-9  # slack for float-order differences between tree sums and path sums


@dataclass(frozen=True)
class Plateau:
    vertices: tuple[int, ...]   # ordered, first end nearer the source
    edges: tuple[Edge, ...]
    plateau_length: float       # seconds, sum of member travel times

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]


@dataclass(frozen=True)
class PlateauConfig:
    k: int
    stretch_bound: float = 1.4

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if self.stretch_bound < 1.0:
            raise InvalidInputError("stretch bound must be >= 1")


def find_plateaus(tf: ShortestPathTree, tb: ShortestPathTree) -> list[Plateau]:
    """All maximal common branches, longest first (ties by first vertex id)."""
    plateaus, _ = _join_trees(tf, tb)
    return plateaus


def _join_trees(tf: ShortestPathTree, tb: ShortestPathTree) -> tuple[list[Plateau], int]:
    if tf.orientation is not Orientation.FORWARD or tb.orientation is not Orientation.BACKWARD:
        raise InvalidInputError("find_plateaus needs a forward and a backward tree")
    if tf.net is not tb.net:
        raise InvalidInputError("trees built on different networks")
    net = tf.net
    ops = 0

    # An edge (u, v) is common when it is v's parent in the forward tree
    # and u's parent in the backward tree. Each vertex then has at most
    # one common in-edge and one common out-edge, so common edges form
    # vertex-disjoint chains; positive weights rule out cycles.
    fwd_parents = tf.parent_edge_indices()
    bwd_parents = tb.parent_edge_indices()
    n = net.vertex_count
    common_out = [-1] * n  # vertex u -> common edge index leaving u
    common_in = [-1] * n   # vertex v -> common edge index entering v
    for v in range(n):
        ops += 1
        eidx = fwd_parents[v]
        if eidx >= 0 and bwd_parents[net.edge_by_index(eidx).frm] == eidx:
            e = net.edge_by_index(eidx)
            common_out[e.frm] = eidx
            common_in[v] = eidx

    plateaus: list[Plateau] = []
    for u in range(n):
        ops += 1
        if common_out[u] < 0 or common_in[u] >= 0:
            continue  # not a chain head
        verts = [u]
        edges: list[Edge] = []
        tt = 0.0
        cur = u
        while common_out[cur] >= 0:
            ops += 1
            e = net.edge_by_index(common_out[cur])
            edges.append(e)
            tt += e.travel_time
            cur = e.to
            verts.append(cur)
        plateaus.append(Plateau(tuple(verts), tuple(edges), tt))

    plateaus.sort(key=lambda p: (-p.plateau_length, p.start))
    return plateaus, ops


def plateau_routes(
    net: RoadNetwork,
    s: int,
    t: int,
    cfg: PlateauConfig,
    trees: tuple[ShortestPathTree, ShortestPathTree] | None = None,
) -> AlternativeSet:
    """`trees` lets callers reuse already-built (forward, backward) trees."""
    tf = trees[0] if trees else build_tree(net, s, Orientation.FORWARD)
    if not tf.reachable(t):
        raise NoRouteError(f"no route from {s} to {t}")
    tb = trees[1] if trees else build_tree(net, t, Orientation.BACKWARD)
    fastest = tf.distance(t)
    shortest = Path.from_edges(tf.path_to_root_edges(t)) if s != t else Path.from_edges((), source=s)

    plateaus, join_ops = _join_trees(tf, tb)
    diag = EngineDiagnostics(details={"join_ops": join_ops, "plateau_count": len(plateaus)})

    routes: list[Path] = [shortest]
    seen = {shortest.edge_keys()}
    budget = cfg.stretch_bound * fastest * (1.0 + _REL_EPS)
    for pl in plateaus:
        if len(routes) >= cfg.k:
            break
        diag.iterations += 1
        candidate = _expand(tf, tb, pl)
        if candidate.edge_keys() in seen:
            continue  # the shortest path's own plateau, or a tie duplicate
        if not candidate.is_simple or candidate.travel_time > budget:
            diag.rejected += 1
            continue
        seen.add(candidate.edge_keys())
        routes.append(candidate)

    diag.partial = len(routes) < cfg.k
    if diag.partial:
        diag.notes.append(f"only {len(routes)} of {cfg.k} plateau routes available")
    return AlternativeSet("plateaus", routes, diag)


def _expand(tf: ShortestPathTree, tb: ShortestPathTree, pl: Plateau) -> Path:
    edges = tf.path_to_root_edges(pl.start) + list(pl.edges) + tb.path_to_root_edges(pl.end)
    if not edges:
        return Path.from_edges((), source=pl.start)
    return Path.from_edges(edges)
