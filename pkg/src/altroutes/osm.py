"""Parse OSM-style XML extracts into a RoadNetwork.

Only drivable highway types are kept. An edge survives only if both of
its endpoint nodes lie inside the requested rectangle; a node becomes a
vertex if it is inside the rectangle and referenced by at least one
drivable way. Vertex ids follow node declaration order in the file, so
parsing the same bytes twice yields identical networks.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import BinaryIO

from .errors import EmptyNetworkError, ExtractParseError
from .geo import BoundingRect, GeoPoint, haversine_m
from .network import NetworkBuilder, RoadClass, RoadNetwork

# highway= values that a car can use.
DRIVABLE_HIGHWAYS = frozenset(
    {
        "motorway",
        "motorway_link",
        "trunk",
        "trunk_link",
        "primary",
        "primary_link",
        "secondary",
        "secondary_link",
        "tertiary",
        "tertiary_link",
        "unclassified",
        "residential",
        "living_street",
        "service",
    }
)

MOTORWAY_HIGHWAYS = frozenset({"motorway", "motorway_link"})

# Fallback speed limits (km/h) when a way has no usable maxspeed tag.
DEFAULT_SPEEDS: dict[str, float] = {
    "motorway": 100.0,
    "motorway_link": 60.0,
    "trunk": 80.0,
    "trunk_link": 50.0,
    "primary": 60.0,
    "primary_link": 40.0,
    "secondary": 60.0,
    "secondary_link": 40.0,
    "tertiary": 50.0,
    "tertiary_link": 40.0,
    "unclassified": 50.0,
    "residential": 50.0,
    "living_street": 20.0,
    "service": 20.0,
}


def _parse_maxspeed(value: str | None) -> float | None:
    if value is None:
        return None
    text = value.strip().lower()
    if not text or text in ("none", "signals", "variable"):
        return None
    mph = text.endswith("mph")
    digits = ""
    for ch in text:
        if ch.isdigit() or ch == ".":
            digits += ch
        elif digits:
            break
    try:
        speed = float(digits)
    except ValueError:
        return None
    if mph:
        speed *= 1.609344
    return speed if speed > 0 else None


def parse_extract(
    source: BinaryIO,
    rect: BoundingRect,
    default_speeds: dict[str, float] | None = None,
) -> RoadNetwork:
    """Build the road network for the part of `source` inside `rect`."""
    speeds = DEFAULT_SPEEDS if default_speeds is None else default_speeds
    node_points: dict[str, GeoPoint] = {}
    node_order: list[str] = []
    # (from osm id, to osm id, speed km/h, road class) per directed edge
    segments: list[tuple[str, str, float, RoadClass]] = []

    try:
        for event, elem in ET.iterparse(source, events=("end",)):
            if elem.tag == "node":
                osm_id = elem.get("id")
                lat_s, lon_s = elem.get("lat"), elem.get("lon")
                if osm_id is None or lat_s is None or lon_s is None:
                    raise ExtractParseError("node missing id/lat/lon", context=f"node id={osm_id}")
                try:
                    point = GeoPoint(float(lat_s), float(lon_s))
                except ValueError as exc:
                    raise ExtractParseError("bad node coordinates", context=f"node id={osm_id}") from exc
                if rect.contains(point) and osm_id not in node_points:
                    node_points[osm_id] = point
                    node_order.append(osm_id)
                elem.clear()
            elif elem.tag == "way":
                _collect_way(elem, segments, speeds)
                elem.clear()
    except ET.ParseError as exc:
        raise ExtractParseError(f"malformed XML: {exc}", context=f"line {exc.position[0]}") from exc

    referenced: set[str] = set()
    for frm, to, _, _ in segments:
        if frm in node_points:
            referenced.add(frm)
        if to in node_points:
            referenced.add(to)

    if not referenced:
        raise EmptyNetworkError("no drivable road segments inside the rectangle")

    builder = NetworkBuilder(rect)
    vertex_ids: dict[str, int] = {}
    for osm_id in node_order:
        if osm_id in referenced:
            vertex_ids[osm_id] = builder.add_vertex(node_points[osm_id])

    for frm, to, speed, road_class in segments:
        u = vertex_ids.get(frm)
        v = vertex_ids.get(to)
        if u is None or v is None:
            continue
        length = haversine_m(node_points[frm], node_points[to])
        if length <= 0:
            continue  # coincident nodes
        builder.add_edge(u, v, length, speed, road_class)

    return builder.build()


def _collect_way(
    elem: ET.Element,
    segments: list[tuple[str, str, float, RoadClass]],
    speeds: dict[str, float],
) -> None:
    tags = {t.get("k"): t.get("v") for t in elem.findall("tag")}
    highway = tags.get("highway")
    if highway not in DRIVABLE_HIGHWAYS:
        return
    refs = [nd.get("ref") for nd in elem.findall("nd")]
    if any(r is None for r in refs):
        raise ExtractParseError("way with nd missing ref", context=f"way id={elem.get('id')}")
    road_class = RoadClass.MOTORWAY if highway in MOTORWAY_HIGHWAYS else RoadClass.OTHER
    speed = _parse_maxspeed(tags.get("maxspeed"))
    if speed is None:
        speed = speeds.get(highway, 50.0)

    oneway = tags.get("oneway", "").strip().lower()
    if oneway in ("yes", "true", "1") or tags.get("junction") == "roundabout":
        direction = 1
    elif oneway == "-1":
        direction = -1
    else:
        direction = 0  # two-way

    for a, b in zip(refs, refs[1:]):
        if direction >= 0:
            segments.append((a, b, speed, road_class))
        if direction <= 0:
            segments.append((b, a, speed, road_class))
