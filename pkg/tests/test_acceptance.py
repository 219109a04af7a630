"""Acceptance gate: every release criterion, one pass/fail line each.

The batch criteria share a single 1,000-query sweep over a synthetic
10,000-vertex extract (session fixture) so the suite stays in the
minutes range. Queries are vertex pairs with a fastest time of at least
two minutes: sub-minute hops are not meaningful trips for a rating study
and are excluded from the workload.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path as FsPath

import pytest

from altroutes import (
    DissimilarityConfig,
    GeoPoint,
    LengthCategory,
    NoRouteError,
    PenaltyConfig,
    PlateauConfig,
    RatingRecord,
    build_tree,
    categorize,
    find_plateaus,
    jaccard,
    rm_anova,
    set_similarity,
    shortest_path,
)
from altroutes.engines import dissimilar_routes, penalty_routes, plateau_routes
from altroutes.service import QueryService, RatingStore, ReplayStubProvider, ServiceConfig
from altroutes.service.app import create_app
from altroutes.sptree import Orientation, Path
from helpers import diamond, minute_diamond, oracle_shortest, random_network, synthetic_edge
from gridmaps import grid_network

DATA = FsPath(__file__).parent / "data"

QUERY_COUNT = 1000
MIN_TRIP_SECONDS = 120.0
STRETCH = 1.4
THETA = 0.5


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"{status}: {criterion}" + (f" ({detail})" if detail else ""))
    assert ok, f"{criterion}: {detail}"


# ---------------------------------------------------------------------------
# shared 1,000-query batch

@dataclass
class BatchReport:
    queries: int = 0
    stretch_violations: int = 0
    threshold_violations: int = 0
    sim_over_threshold: int = 0
    plateau_membership_violations: int = 0
    longest_plateau_mismatches: int = 0
    penalty_first_route_mismatches: int = 0
    penalty_reporting_violations: int = 0
    join_ops: list[int] = field(default_factory=list)


@pytest.fixture(scope="session")
def mid_net():
    return grid_network(100, seed=1)


@pytest.fixture(scope="session")
def batch(mid_net) -> BatchReport:
    rng = random.Random(2026)
    rep = BatchReport()
    n = mid_net.vertex_count
    p_cfg = PenaltyConfig(k=3, penalty_factor=1.4)
    pl_cfg = PlateauConfig(k=3, stretch_bound=STRETCH)
    d_cfg = DissimilarityConfig(k=3, theta=THETA, stretch_bound=STRETCH)

    while rep.queries < QUERY_COUNT:
        s = rng.randrange(n)
        t = rng.randrange(n)
        if s == t:
            continue
        tf = build_tree(mid_net, s, Orientation.FORWARD)
        if not tf.reachable(t) or tf.distance(t) < MIN_TRIP_SECONDS:
            continue
        tb = build_tree(mid_net, t, Orientation.BACKWARD)
        trees = (tf, tb)
        sp_keys = tuple(e.key for e in tf.path_to_root_edges(t))
        fastest = tf.distance(t)

        # plateau structure
        plateaus = find_plateaus(tf, tb)
        for pl in plateaus:
            for e in pl.edges:
                fe = tf.parent_edge(e.to)
                be = tb.parent_edge(e.frm)
                if fe is None or be is None or fe.key != e.key or be.key != e.key:
                    rep.plateau_membership_violations += 1
        top = plateaus[0]
        expanded = tf.path_to_root_edges(top.start) + list(top.edges) + tb.path_to_root_edges(top.end)
        if tuple(e.key for e in expanded) != sp_keys:
            rep.longest_plateau_mismatches += 1

        # engines
        pl_set = plateau_routes(mid_net, s, t, pl_cfg, trees=trees)
        d_set = dissimilar_routes(mid_net, s, t, d_cfg, trees=trees)
        p_set = penalty_routes(mid_net, s, t, p_cfg)
        rep.join_ops.append(pl_set.diagnostics.details["join_ops"])

        limit = STRETCH * fastest * (1.0 + 1e-6)
        for route in itertools.chain(pl_set.routes, d_set.routes):
            if route.travel_time > limit:
                rep.stretch_violations += 1

        for i, x in enumerate(d_set.routes):
            for y in d_set.routes[i + 1 :]:
                if not (jaccard(x, y) < THETA):
                    rep.threshold_violations += 1
        if len(d_set.routes) >= 2 and not (set_similarity(d_set.routes).sim < THETA):
            rep.sim_over_threshold += 1

        if p_set.routes[0].edge_keys() != sp_keys:
            rep.penalty_first_route_mismatches += 1
        for route in p_set.routes:
            recomputed = sum(e.travel_time for e in route.edges)
            if abs(route.travel_time - recomputed) > 1e-9 * max(1.0, recomputed):
                rep.penalty_reporting_violations += 1

        rep.queries += 1
    return rep


# ---------------------------------------------------------------------------
# criteria

class TestOracleEquivalence:
    def test_shortest_path_matches_enumeration_on_200_graphs(self):
        started = time.monotonic()
        rng = random.Random(7)
        graphs = 0
        compared = 0
        while graphs < 200:
            net = random_network(rng, rng.randint(2, 10), edge_prob=0.4)
            s, t = 0, net.vertex_count - 1
            expected = oracle_shortest(net, s, t)
            if expected is None:
                with pytest.raises(NoRouteError):
                    shortest_path(net, s, t)
            else:
                got = shortest_path(net, s, t)
                assert got.travel_time == expected[0], "cost mismatch"
                assert [e.key for e in got.edges] == [e.key for e in expected[1]], "tie-rule mismatch"
                compared += 1
            graphs += 1
        # the diamond fixture, explicitly
        net = diamond()
        expected = oracle_shortest(net, 0, 3)
        got = shortest_path(net, 0, 3)
        assert (got.travel_time, [e.key for e in got.edges]) == (
            expected[0],
            [e.key for e in expected[1]],
        )
        elapsed = time.monotonic() - started
        report(
            "oracle equivalence on 200 random graphs + diamond",
            elapsed < 30.0,
            f"{compared} routed graphs, {elapsed:.1f}s",
        )


class TestStretchBound:
    def test_every_alternative_within_stretch(self, batch):
        report(
            "stretch bound 1.4x on plateaus + dissimilarity routes",
            batch.stretch_violations == 0 and batch.queries == QUERY_COUNT,
            f"{batch.queries} queries, {batch.stretch_violations} violations",
        )


class TestDissimilarityThreshold:
    def test_pairwise_jaccard_below_half(self, batch):
        ok = (
            batch.threshold_violations == 0
            and batch.sim_over_threshold == 0
            and batch.queries == QUERY_COUNT
        )
        report(
            "dissimilarity threshold: pairwise jaccard < 0.5 and Sim(T) < 0.5",
            ok,
            f"{batch.queries} queries, {batch.threshold_violations}+{batch.sim_over_threshold} violations",
        )


class TestPlateauStructure:
    def test_membership_and_longest_plateau(self, batch):
        ok = (
            batch.plateau_membership_violations == 0
            and batch.longest_plateau_mismatches == 0
            and batch.queries == QUERY_COUNT
        )
        report(
            "plateau edges are dual-tree parents; longest plateau = shortest path",
            ok,
            f"membership {batch.plateau_membership_violations}, "
            f"longest-mismatch {batch.longest_plateau_mismatches}",
        )

    def test_tree_join_linear_in_vertices(self):
        ratios = []
        for side in (50, 71, 100):
            net = grid_network(side, seed=1)
            rng = random.Random(5)
            ops = []
            tried = 0
            while len(ops) < 20 and tried < 400:
                tried += 1
                s = rng.randrange(net.vertex_count)
                t = rng.randrange(net.vertex_count)
                if s == t:
                    continue
                tf = build_tree(net, s, Orientation.FORWARD)
                if not tf.reachable(t):
                    continue
                tb = build_tree(net, t, Orientation.BACKWARD)
                result = plateau_routes(net, s, t, PlateauConfig(k=3), trees=(tf, tb))
                ops.append(result.diagnostics.details["join_ops"])
            ratios.append((sum(ops) / len(ops)) / net.vertex_count)
        spread = max(ratios) / min(ratios)
        report(
            "tree-join cost linear in |V| across three extract sizes",
            spread <= 2.0,
            f"ops/|V| ratios {['%.2f' % r for r in ratios]}, spread {spread:.2f}x",
        )


class TestPenaltyContract:
    def test_first_route_and_original_weight_reporting(self, batch):
        ok = (
            batch.penalty_first_route_mismatches == 0
            and batch.penalty_reporting_violations == 0
            and batch.queries == QUERY_COUNT
        )
        report(
            "penalty: routes[0] = shortest path; times re-sum to 1e-9",
            ok,
            f"first-route {batch.penalty_first_route_mismatches}, "
            f"reporting {batch.penalty_reporting_violations}",
        )


class TestOverlapArithmetic:
    def test_worked_example_and_bulk_properties(self):
        x = Path.from_edges([synthetic_edge(0, 1, 2000.0), synthetic_edge(1, 2, 3000.0)])
        y = Path.from_edges([synthetic_edge(0, 1, 2000.0), synthetic_edge(1, 5, 4000.0)])
        assert abs(jaccard(x, y) - 2.0 / 9.0) <= 1e-12

        pool = [synthetic_edge(i, i + 1, 50.0 * (i % 7 + 1)) for i in range(40)]
        rng = random.Random(13)

        def draw():
            start = rng.randrange(0, 36)
            return Path.from_edges(pool[start : start + rng.randint(1, 4)])

        failures = 0
        for _ in range(10_000):
            a, b = draw(), draw()
            v = jaccard(a, b)
            ka = {e.key: e.length for e in a.edges}
            kb = {e.key: e.length for e in b.edges}
            inter = sum(l for k, l in ka.items() if k in kb)
            union = sum(ka.values()) + sum(kb.values()) - inter
            if not (
                v == jaccard(b, a)
                and 0.0 <= v <= 1.0
                and abs(v - inter / union) <= 1e-12
            ):
                failures += 1
        report(
            "overlap arithmetic: 2/9 example + 10,000 random pair properties",
            failures == 0,
            f"{failures} failures",
        )


class TestCategorization:
    def test_interval_boundaries(self):
        expected = {
            600: LengthCategory.SMALL,
            601: LengthCategory.MEDIUM,
            1500: LengthCategory.MEDIUM,
            1501: LengthCategory.LONG,
        }
        mismatches = {s: categorize(s) for s, want in expected.items() if categorize(s) is not want}
        report("route-length categorization boundaries", not mismatches, str(mismatches))


class TestAnova:
    def _records(self, table):
        q = (GeoPoint(0.001, 0.001), GeoPoint(0.002, 0.002))
        return [
            RatingRecord(f"s{i}", "c", q, 600.0, True,
                         {f"c{j}": v for j, v in enumerate(row)}, "2026-01-01T00:00:00Z")
            for i, row in enumerate(table)
        ]

    def test_degenerate_golden_and_shift_invariance(self):
        flat = rm_anova(self._records([[3, 3, 3, 3]] * 6))
        ok = flat.F == 0.0 and flat.p == 1.0

        golden = json.loads((DATA / "anova_golden.json").read_text())
        res = rm_anova(self._records(golden["table"]))
        ok = ok and abs(res.F - golden["F"]) <= 1e-6 * golden["F"]
        ok = ok and abs(res.p - golden["p"]) <= 1e-6 * golden["p"]
        ok = ok and (res.df_between, res.df_error) == (golden["df_between"], golden["df_error"])

        shifts = [-1, 1, -1, 1, -1]
        shifted = [
            [v + shifts[i] for v in row] for i, row in enumerate(golden["table"])
        ]
        res2 = rm_anova(self._records(shifted))
        ok = ok and abs(res2.F - res.F) <= 1e-9 * res.F
        ok = ok and abs(res2.p - res.p) <= 1e-9 * max(res.p, 1e-300)
        report("repeated-measures ANOVA: degenerate, golden 5x4, shift invariance", ok)


class TestServiceContract:
    @pytest.fixture()
    def client_and_service(self, tmp_path):
        from fastapi.testclient import TestClient

        net = minute_diamond()
        config = ServiceConfig(city="testville", rating_store_path=str(tmp_path / "r.jsonl"))
        counter = itertools.count(1)
        service = QueryService(
            net,
            config,
            RatingStore(config.rating_store_path),
            ReplayStubProvider(None, net),
            id_factory=lambda: f"q-{next(counter):04d}",
            clock=lambda: 1767225600.0,
        )
        return TestClient(create_app(service)), service

    def test_golden_files_blinding_and_round_trip(self, client_and_service):
        client, service = client_and_service
        golden = json.loads((DATA / "service_golden.json").read_text())

        resp = client.post("/api/routes", json=golden["request"])
        ok = resp.status_code == 200 and resp.json() == golden["routes_response"]

        lowered = resp.content.lower()
        for name in (b"penalty", b"plateaus", b"dissimilarity", b"external", b"google"):
            ok = ok and name not in lowered

        rating = client.post("/api/ratings", json=golden["rating_request"])
        ok = ok and rating.status_code == 200 and rating.json() == golden["rating_response"]

        stored = service.store.load_latest()[golden["rating_request"]["query_id"]]
        ok = ok and stored == golden["stored_record"]
        # un-blinding round trip: stored mapping explains each label's score
        for label, score in golden["rating_request"]["scores"].items():
            ok = ok and stored["scores"][stored["label_map"][label]] == score
        report("service contract: golden routes/ratings, blinding, round trip", ok)
