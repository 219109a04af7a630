"""WGS84 points, bounding rectangles and great-circle distance."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError

EARTH_RADIUS_M = 6_371_000.0
METERS_PER_DEG_LAT = 111_320.0


@dataclass(frozen=True, slots=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (-90.0 <= self.lat <= 90.0):
            raise InvalidInputError(f"latitude {self.lat} outside [-90, 90]")
        if not (-180.0 <= self.lon <= 180.0):
            raise InvalidInputError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True, slots=True)
class BoundingRect:
    min_corner: GeoPoint
    max_corner: GeoPoint

    def __post_init__(self) -> None:
        if self.min_corner.lat > self.max_corner.lat:
            raise InvalidInputError("min_corner.lat exceeds max_corner.lat")
        if self.min_corner.lon > self.max_corner.lon:
            raise InvalidInputError("min_corner.lon exceeds max_corner.lon")

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.min_corner.lat <= p.lat <= self.max_corner.lat
            and self.min_corner.lon <= p.lon <= self.max_corner.lon
        )


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in meters."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))
