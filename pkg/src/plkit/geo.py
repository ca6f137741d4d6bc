"""Geodetic helpers for site-local link geometry.

Positions come in as WGS84 latitude/longitude and are projected onto a
local east/north/up tangent plane at the site, which is accurate well below
the 5 m bin resolution for typical macro-cell drive radii (a few km).
Also provides 2D/3D link distances, azimuth/elevation toward a receiver,
square-grid binning, and polygon containment for LOS classification.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_E2 = WGS84_F * (2.0 - WGS84_F)

# max angular offset from the projection origin before the tangent-plane
# approximation is refused
_MAX_OFFSET_DEG = 1.0


@dataclass(frozen=True)
class GeodeticPoint:
    """WGS84 position; altitude is meters above local ground level."""

    latitude: float
    longitude: float
    altitude_agl: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude!r} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude!r} outside [-180, 180]")


@dataclass(frozen=True)
class LocalPoint:
    """East/north/up offset in meters from a projection origin."""

    east: float
    north: float
    up: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.east) and math.isfinite(self.north) and math.isfinite(self.up)):
            raise ValueError("local coordinates must be finite")


@dataclass(frozen=True)
class GridIndex:
    """Index of one square grid cell (ix eastward, iy northward)."""

    ix: int
    iy: int
    grid_size: float = 5.0

    def __post_init__(self):
        if self.grid_size <= 0:
            raise ValueError("grid_size must be > 0")

    @property
    def key(self) -> tuple[int, int]:
        return (self.ix, self.iy)


@dataclass(frozen=True)
class Polygon:
    """Simple (non-self-intersecting) geodetic ring with an LOS/NLOS label.

    The first vertex must not be repeated at the end.
    """

    vertices: tuple[GeodeticPoint, ...]
    label: str = "LOS"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        first, last = self.vertices[0], self.vertices[-1]
        if first.latitude == last.latitude and first.longitude == last.longitude:
            raise ValueError("polygon ring must not repeat its first vertex")
        if self.label not in ("LOS", "NLOS"):
            raise ValueError(f"polygon label must be LOS or NLOS, got {self.label!r}")


def earth_radii(latitude_deg: float) -> tuple[float, float]:
    """Meridional and prime-vertical curvature radii (m) at a latitude."""
    s2 = math.sin(math.radians(latitude_deg)) ** 2
    w = math.sqrt(1.0 - WGS84_E2 * s2)
    meridional = WGS84_A * (1.0 - WGS84_E2) / w**3
    normal = WGS84_A / w
    return meridional, normal


def to_local(origin: GeodeticPoint, p: GeodeticPoint) -> LocalPoint:
    """Project a geodetic point onto the tangent plane at ``origin``.

    Equirectangular projection with the WGS84 curvature radii evaluated at
    the origin latitude; up is the altitude difference. Only valid near the
    origin (refused beyond 1 degree of latitude/longitude offset).
    """
    dlat = p.latitude - origin.latitude
    dlon = p.longitude - origin.longitude
    if abs(dlat) >= _MAX_OFFSET_DEG or abs(dlon) >= _MAX_OFFSET_DEG:
        raise ValueError(
            f"point ({p.latitude}, {p.longitude}) too far from origin "
            f"({origin.latitude}, {origin.longitude}) for tangent-plane projection"
        )
    meridional, normal = earth_radii(origin.latitude)
    north = meridional * math.radians(dlat)
    east = normal * math.cos(math.radians(origin.latitude)) * math.radians(dlon)
    return LocalPoint(east, north, p.altitude_agl - origin.altitude_agl)


def from_local(origin: GeodeticPoint, p: LocalPoint) -> GeodeticPoint:
    """Inverse of :func:`to_local` for the same origin."""
    meridional, normal = earth_radii(origin.latitude)
    lat = origin.latitude + math.degrees(p.north / meridional)
    lon = origin.longitude + math.degrees(
        p.east / (normal * math.cos(math.radians(origin.latitude)))
    )
    return GeodeticPoint(lat, lon, origin.altitude_agl + p.up)


def distance_2d(a: LocalPoint, b: LocalPoint) -> float:
    """Horizontal (ground) distance in meters."""
    return math.hypot(b.east - a.east, b.north - a.north)


def distance_3d(
    a: LocalPoint, b: LocalPoint, height_a: float = 0.0, height_b: float = 0.0
) -> float:
    """Slant distance in meters including antenna heights above each point.

    Heights are added to the points' up coordinates, so ``a`` at height 10
    and ``b`` at height 10 on the same spot are 0 m apart.
    """
    if height_a < 0 or height_b < 0:
        raise ValueError("antenna heights must be >= 0")
    dz = (b.up + height_b) - (a.up + height_a)
    return math.hypot(distance_2d(a, b), dz)


def azimuth_elevation(
    bs: LocalPoint, ue: LocalPoint, bs_height: float = 0.0, ue_height: float = 0.0
) -> tuple[float, float]:
    """Angles from the BS antenna toward the UE antenna.

    Returns (azimuth, elevation) in degrees: azimuth clockwise from true
    north in [0, 360), elevation in [-90, 90] and negative when the UE sits
    below the BS antenna.
    """
    de = ue.east - bs.east
    dn = ue.north - bs.north
    dz = (ue.up + ue_height) - (bs.up + bs_height)
    horiz = math.hypot(de, dn)
    if horiz == 0.0 and dz == 0.0:
        raise ValueError("azimuth/elevation undefined for coincident points")
    azimuth = math.degrees(math.atan2(de, dn)) % 360.0
    elevation = math.degrees(math.atan2(dz, horiz))
    return azimuth, elevation


def bin_index(p: LocalPoint, grid_size: float = 5.0) -> GridIndex:
    """Square-grid cell containing a local point (floor convention)."""
    if grid_size <= 0:
        raise ValueError("grid_size must be > 0")
    return GridIndex(math.floor(p.east / grid_size), math.floor(p.north / grid_size), grid_size)


def _on_segment(x, y, x1, y1, x2, y2, eps=1e-9):
    seg = math.hypot(x2 - x1, y2 - y1)
    if seg == 0.0:
        return math.hypot(x - x1, y - y1) <= eps
    cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
    if abs(cross) / seg > eps:
        return False
    dot = (x - x1) * (x2 - x1) + (y - y1) * (y2 - y1)
    return -eps * seg <= dot <= seg * seg + eps * seg


def point_in_ring(x: float, y: float, ring) -> bool:
    """Even-odd (ray crossing) containment test on planar coordinates.

    ``ring`` is a sequence of (x, y) vertices without the closing repeat.
    Points on the boundary count as inside.
    """
    n = len(ring)
    if n < 3:
        raise ValueError("ring needs at least 3 vertices")
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if _on_segment(x, y, x1, y1, x2, y2):
            return True
    inside = False
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > y) != (yj > y):
            x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < x_cross:
                inside = not inside
        j = i
    return inside


def project_polygon(origin: GeodeticPoint, poly: Polygon) -> list[tuple[float, float]]:
    """Polygon vertices as (east, north) pairs on the tangent plane at origin."""
    return [(lp.east, lp.north) for lp in (to_local(origin, v) for v in poly.vertices)]


def point_in_polygon(p: GeodeticPoint, poly: Polygon) -> bool:
    """Geodetic containment test; projects everything onto one tangent plane."""
    origin = poly.vertices[0]
    ring = project_polygon(origin, poly)
    lp = to_local(origin, p)
    return point_in_ring(lp.east, lp.north, ring)


def load_polygons(path) -> list[Polygon]:
    """Read LOS/NLOS polygons from a GeoJSON FeatureCollection.

    Only the outer ring of each Polygon feature is used. The boolean
    feature property ``los`` selects the label (missing defaults to LOS).
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("type") != "FeatureCollection":
        raise ValueError("polygon file must be a GeoJSON FeatureCollection")
    polygons = []
    for i, feature in enumerate(data.get("features", [])):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Polygon":
            raise ValueError(f"feature {i}: geometry type must be Polygon")
        rings = geom.get("coordinates") or []
        if not rings:
            raise ValueError(f"feature {i}: polygon has no rings")
        outer = rings[0]
        # GeoJSON rings repeat the first coordinate at the end
        if len(outer) >= 2 and outer[0] == outer[-1]:
            outer = outer[:-1]
        vertices = tuple(GeodeticPoint(lat, lon) for lon, lat, *_ in outer)
        los = feature.get("properties", {}).get("los", True)
        polygons.append(Polygon(vertices, "LOS" if los else "NLOS"))
    return polygons
