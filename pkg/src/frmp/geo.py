"""WGS84 points and great-circle (haversine) distances.

All distances are in meters on a sphere of mean Earth radius; no projection
is ever applied, so coordinates stay lon/lat everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6371008.8

__all__ = ["EARTH_RADIUS_M", "GeoPoint", "haversine_m", "polyline_length_m", "ValidationError"]


class ValidationError(ValueError):
    """Raised when a domain invariant is violated."""


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate, longitude first (GeoJSON axis order)."""

    lon: float
    lat: float

    def __post_init__(self) -> None:
        if not (-180.0 <= self.lon <= 180.0):
            raise ValidationError(f"longitude {self.lon} outside [-180, 180]")
        if not (-90.0 <= self.lat <= 90.0):
            raise ValidationError(f"latitude {self.lat} outside [-90, 90]")

    @classmethod
    def from_pair(cls, pair) -> "GeoPoint":
        lon, lat = pair[0], pair[1]
        return cls(float(lon), float(lat))

    def as_pair(self) -> list[float]:
        return [self.lon, self.lat]


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points in meters."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlmb = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(h), math.sqrt(max(0.0, 1.0 - h)))


def polyline_length_m(points: list[GeoPoint]) -> float:
    """Sum of consecutive great-circle distances along a polyline.

    Requires at least two points; a degenerate polyline of coincident
    points has length zero.
    """
    if len(points) < 2:
        raise ValidationError(f"polyline needs >=2 points, got {len(points)}")
    return sum(haversine_m(p, q) for p, q in zip(points, points[1:]))
