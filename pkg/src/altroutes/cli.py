"""Batch front door: extraction, route dumps, similarity evaluation, stats.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass

from .analytics import (
    CategoryBoundaries,
    CohortFilter,
    LengthCategory,
    aggregate,
    categorize,
    rm_anova,
)
from .engines import engine_names, run_engine
from .errors import AltRoutesError, InvalidInputError, NoRouteError
from .geo import BoundingRect, GeoPoint
from .metrics import set_similarity
from .network import RoadNetwork, load_network, save_network
from .osm import parse_extract
from .service import load_config
from .service.core import path_geometry
from .sptree import shortest_path

USAGE_EXIT = 1
DATA_EXIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_EXIT)


def _parse_point(text: str) -> GeoPoint:
    try:
        lat, lon = (float(x) for x in text.split(","))
        return GeoPoint(lat, lon)
    except (ValueError, AltRoutesError) as exc:
        raise InvalidInputError(f"bad coordinate {text!r}: {exc}") from exc


def _parse_rect(text: str) -> BoundingRect:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidInputError(f"rect needs minlat,minlon,maxlat,maxlon, got {text!r}")
    vals = [float(p) for p in parts]
    return BoundingRect(GeoPoint(vals[0], vals[1]), GeoPoint(vals[2], vals[3]))


# -- subcommands -------------------------------------------------------------

def cmd_extract(args) -> int:
    rect = _parse_rect(args.rect)
    with open(args.input, "rb") as fh:
        net = parse_extract(fh, rect)
    save_network(net, args.output)
    print(f"wrote {args.output}: {net.vertex_count} vertices, {net.edge_count} edges")
    return 0


def cmd_route(args) -> int:
    net = load_network(args.net)
    s = net.snap_to_vertex(_parse_point(args.source))
    t = net.snap_to_vertex(_parse_point(args.target))
    result = run_engine(args.engine, net, s, t, args.k)
    features = [
        {
            "type": "Feature",
            "geometry": path_geometry(p, net),
            "properties": {
                "rank": i,
                "travel_time_seconds": p.travel_time,
                "length_meters": p.length,
            },
        }
        for i, p in enumerate(result.routes)
    ]
    print(json.dumps({"type": "FeatureCollection", "features": features}, indent=2))
    return 0


@dataclass
class _QuerySimilarity:
    category: LengthCategory
    sims: dict[str, float]  # engine -> Sim(T); absent when excluded


def _read_queries(path: str) -> list[tuple[GeoPoint, GeoPoint]]:
    queries = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidInputError(f"{path}:{line_no}: expected 'lat,lon lat,lon'")
            queries.append((_parse_point(parts[0]), _parse_point(parts[1])))
    if not queries:
        raise UsageError(f"{path}: no queries")
    return queries


def sample_queries(
    net: RoadNetwork,
    n: int,
    seed: int,
    boundaries: CategoryBoundaries = CategoryBoundaries(),
) -> list[tuple[GeoPoint, GeoPoint]]:
    """Vertex pairs stratified evenly across the three length categories."""
    rng = random.Random(seed)
    per_bucket = max(1, math.ceil(n / 3))
    buckets: dict[LengthCategory, list[tuple[GeoPoint, GeoPoint]]] = {c: [] for c in LengthCategory}
    attempts = 0
    cap = 200 * n
    while attempts < cap and any(len(b) < per_bucket for b in buckets.values()):
        attempts += 1
        s = rng.randrange(net.vertex_count)
        t = rng.randrange(net.vertex_count)
        if s == t:
            continue
        try:
            fastest = shortest_path(net, s, t).travel_time
            cat = categorize(fastest, boundaries)
        except (NoRouteError, InvalidInputError):
            continue
        if len(buckets[cat]) < per_bucket:
            buckets[cat].append((net.vertex_point(s), net.vertex_point(t)))
    out = [q for c in LengthCategory for q in buckets[c]]
    if not out:
        raise InvalidInputError("sampler produced no usable queries")
    return out[:n] if len(out) > n else out


def evaluate_queries(
    net: RoadNetwork,
    queries: list[tuple[GeoPoint, GeoPoint]],
    k: int,
    boundaries: CategoryBoundaries = CategoryBoundaries(),
) -> tuple[list[_QuerySimilarity], dict[str, int]]:
    """Per-query Sim(T) for each engine that returns exactly k routes."""
    rows: list[_QuerySimilarity] = []
    exclusions = {e: 0 for e in engine_names()}
    for source, target in queries:
        s = net.snap_to_vertex(source)
        t = net.snap_to_vertex(target)
        if s == t:
            continue
        try:
            fastest = shortest_path(net, s, t).travel_time
            category = categorize(fastest, boundaries)
        except (NoRouteError, InvalidInputError):
            continue
        sims: dict[str, float] = {}
        for engine in engine_names():
            result = run_engine(engine, net, s, t, k)
            if len(result.routes) != k:
                exclusions[engine] += 1
                continue
            sims[engine] = set_similarity(result.routes).sim
        rows.append(_QuerySimilarity(category, sims))
    return rows, exclusions


def _sim_table(rows: list[_QuerySimilarity], exclusions: dict[str, int]) -> dict:
    cohorts: list[tuple[str, list[_QuerySimilarity]]] = [("All", rows)]
    for cat in LengthCategory:
        cohorts.append((cat.value.capitalize(), [r for r in rows if r.category is cat]))
    table: dict = {"engines": list(engine_names()), "exclusions": exclusions, "cohorts": []}
    for name, members in cohorts:
        entry: dict = {"cohort": name, "queries": len(members), "per_engine": {}}
        for engine in engine_names():
            values = [r.sims[engine] for r in members if engine in r.sims]
            if values:
                mean = sum(values) / len(values)
                sd = (
                    math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))
                    if len(values) > 1
                    else 0.0
                )
                entry["per_engine"][engine] = {
                    "avg": mean,
                    "sd": sd,
                    "max": max(values),
                    "queries": len(values),
                }
        table["cohorts"].append(entry)
    return table


def _print_sim_table(table: dict) -> None:
    engines = table["engines"]
    header = f"{'Cohort':<10}" + "".join(f"{e:>24}" for e in engines) + f"{'#Queries':>10}"
    sub = f"{'':<10}" + "".join(f"{'AVG (sd)':>16}{'MAX':>8}" for _ in engines)
    print(header)
    print(sub)
    for entry in table["cohorts"]:
        line = f"{entry['cohort']:<10}"
        for e in engines:
            cell = entry["per_engine"].get(e)
            if cell is None:
                line += f"{'-':>16}{'-':>8}"
            else:
                line += f"{cell['avg']:.3f} ({cell['sd']:.2f})".rjust(16) + f"{cell['max']:.3f}".rjust(8)
        line += f"{entry['queries']:>10}"
        print(line)
    excluded = ", ".join(f"{e}: {n}" for e, n in table["exclusions"].items() if n)
    if excluded:
        print(f"excluded (fewer than k routes): {excluded}")


def cmd_eval(args) -> int:
    net = load_network(args.net)
    if args.queries:
        queries = _read_queries(args.queries)
    elif args.sample:
        queries = sample_queries(net, args.sample, args.seed)
    else:
        raise UsageError("eval needs --queries FILE or --sample N")
    rows, exclusions = evaluate_queries(net, queries, args.k)
    table = _sim_table(rows, exclusions)
    _print_sim_table(table)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(table, fh, indent=2)
    return 0


def cmd_stats(args) -> int:
    from .service.store import RatingStore

    records = RatingStore(args.db).snapshot()
    category = LengthCategory(args.category) if args.category else None
    cohort = CohortFilter(city=args.city, residents_only=args.residents_only, category=category)
    row = aggregate(records, cohort)
    print(f"cohort: {row.cohort}  (n={row.count})")
    for approach, (mean, sd) in sorted(row.per_approach.items()):
        print(f"  {approach:<16} {mean:.2f} ({sd:.2f})")
    if args.anova:
        picked = [r for r in records if cohort.matches(r)]
        res = rm_anova(picked)
        f_text = "inf" if math.isinf(res.F) else f"{res.F:.3f}"
        print(f"  F({res.df_between},{res.df_error})={f_text}, p={res.p:.3g}")
    return 0


def cmd_serve(args) -> int:
    from .service.app import serve

    serve(load_config(args.config))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="altroutes", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="build a network file from an OSM XML extract")
    p.add_argument("--input", required=True)
    p.add_argument("--rect", required=True, help="minlat,minlon,maxlat,maxlon")
    p.add_argument("--output", required=True)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("route", help="alternative routes for one query as GeoJSON")
    p.add_argument("--net", required=True)
    p.add_argument("--source", required=True, help="lat,lon")
    p.add_argument("--target", required=True, help="lat,lon")
    p.add_argument("--engine", choices=engine_names(), default="plateaus")
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(fn=cmd_route)

    p = sub.add_parser("eval", help="route-set similarity report over a query batch")
    p.add_argument("--net", required=True)
    p.add_argument("--queries", help="file with one 'lat,lon lat,lon' pair per line")
    p.add_argument("--sample", type=int, help="sample N queries stratified by length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("stats", help="rating aggregates from a store file")
    p.add_argument("--db", required=True)
    p.add_argument("--city")
    p.add_argument("--residents-only", action="store_true")
    p.add_argument("--category", choices=[c.value for c in LengthCategory])
    p.add_argument("--anova", action="store_true")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_EXIT
    except (AltRoutesError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
