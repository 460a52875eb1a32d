"""Zone geometry, great-circle distance, map markers, grid hotspot detection.

Pure functions over store snapshots; nothing here mutates state. Cell
indexing uses a local equirectangular projection (111,320 m per degree of
latitude, scaled by cos(origin latitude) along longitude), which is accurate
at barangay scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime
from typing import TYPE_CHECKING, Sequence

from .common import DateWindow, iso_date
from .errors import ConfigInvalid, InvalidLocation, Unzoned

if TYPE_CHECKING:
    from .store import State

EARTH_RADIUS_M = 6_371_000.0
M_PER_DEG_LAT = 111_320.0

ZONE_COUNT = 7
BANDS = ("none", "low", "medium", "high")


def validate_point(lat: float, lon: float) -> tuple[float, float]:
    try:
        lat = float(lat)
        lon = float(lon)
    except (TypeError, ValueError):
        raise InvalidLocation(f"coordinates must be numbers: ({lat!r}, {lon!r})")
    if math.isnan(lat) or math.isnan(lon):
        raise InvalidLocation("coordinates must not be NaN")
    if not -90.0 <= lat <= 90.0:
        raise InvalidLocation(f"latitude {lat} outside [-90, 90]", lat=lat)
    if not -180.0 <= lon <= 180.0:
        raise InvalidLocation(f"longitude {lon} outside [-180, 180]", lon=lon)
    return lat, lon


def haversine(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in meters between two (lat, lon) points."""
    lat1, lon1 = validate_point(*a)
    lat2, lon2 = validate_point(*b)
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


# Polygon primitives. Vertices are (lat, lon) in WGS84 degrees; the closing
# edge from last back to first vertex is implicit.

def _on_segment(lat: float, lon: float, a: Sequence[float], b: Sequence[float],
                eps: float = 1e-9) -> bool:
    cross = (b[0] - a[0]) * (lon - a[1]) - (b[1] - a[1]) * (lat - a[0])
    if abs(cross) > eps:
        return False
    return (min(a[0], b[0]) - eps <= lat <= max(a[0], b[0]) + eps
            and min(a[1], b[1]) - eps <= lon <= max(a[1], b[1]) + eps)


def point_on_boundary(lat: float, lon: float, boundary: Sequence[Sequence[float]]) -> bool:
    n = len(boundary)
    return any(_on_segment(lat, lon, boundary[i], boundary[(i + 1) % n])
               for i in range(n))


def point_in_polygon(lat: float, lon: float, boundary: Sequence[Sequence[float]]) -> bool:
    """Ray-casting even-odd test; boundary points are NOT guaranteed inside
    (callers wanting closed containment check point_on_boundary first)."""
    inside = False
    n = len(boundary)
    for i in range(n):
        a, b = boundary[i], boundary[(i + 1) % n]
        if (a[0] > lat) != (b[0] > lat):
            t = (lat - a[0]) / (b[0] - a[0])
            crossing_lon = a[1] + t * (b[1] - a[1])
            if lon < crossing_lon:
                inside = not inside
    return inside


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _segments_properly_cross(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) \
        and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0


@dataclass(frozen=True)
class Zone:
    zone_id: int
    name: str
    boundary: tuple[tuple[float, float], ...]

    def contains(self, lat: float, lon: float) -> bool:
        return (point_on_boundary(lat, lon, self.boundary)
                or point_in_polygon(lat, lon, self.boundary))

    def to_payload(self) -> dict:
        return {"zone_id": self.zone_id, "name": self.name,
                "boundary": [list(v) for v in self.boundary]}


def _edges(boundary):
    n = len(boundary)
    return [(boundary[i], boundary[(i + 1) % n]) for i in range(n)]


def _validate_polygon(zone_id: int, boundary) -> tuple[tuple[float, float], ...]:
    pts = [tuple(validate_point(v[0], v[1])) for v in boundary]
    if len(pts) > 3 and pts[0] == pts[-1]:
        pts = pts[:-1]
    if len(pts) < 3:
        raise ConfigInvalid(f"zone {zone_id}: polygon needs >=3 vertices")
    edges = _edges(pts)
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if j == i + 1 or (i == 0 and j == len(edges) - 1):
                continue  # adjacent edges share a vertex
            if _segments_properly_cross(*edges[i], *edges[j]):
                raise ConfigInvalid(f"zone {zone_id}: polygon self-intersects")
    return tuple(pts)


class ZoneMap:
    """The configured 7-zone partition of the barangay."""

    def __init__(self, zones: Sequence[Zone]):
        if len(zones) != ZONE_COUNT:
            raise ConfigInvalid(f"expected exactly {ZONE_COUNT} zones, got {len(zones)}")
        ids = sorted(z.zone_id for z in zones)
        if ids != list(range(1, ZONE_COUNT + 1)):
            raise ConfigInvalid(f"zone ids must be 1..{ZONE_COUNT}, got {ids}")
        self.zones = tuple(sorted(zones, key=lambda z: z.zone_id))
        self._check_disjoint_interiors()

    @classmethod
    def from_config(cls, doc: dict) -> "ZoneMap":
        try:
            raw = doc["zones"]
        except (TypeError, KeyError):
            raise ConfigInvalid("zones document must have a top-level 'zones' list")
        zones = []
        for item in raw:
            boundary = _validate_polygon(item.get("zone_id"), item.get("boundary", ()))
            zones.append(Zone(zone_id=int(item["zone_id"]),
                              name=str(item.get("name") or f"Zone {item['zone_id']}"),
                              boundary=boundary))
        return cls(zones)

    def _check_disjoint_interiors(self) -> None:
        def strictly_inside(lat, lon, boundary):
            return point_in_polygon(lat, lon, boundary) \
                and not point_on_boundary(lat, lon, boundary)

        def interior_probe(boundary):
            lat = sum(v[0] for v in boundary) / len(boundary)
            lon = sum(v[1] for v in boundary) / len(boundary)
            return (lat, lon) if strictly_inside(lat, lon, boundary) else None

        for i in range(len(self.zones)):
            for j in range(i + 1, len(self.zones)):
                a, b = self.zones[i], self.zones[j]
                overlap = any(
                    _segments_properly_cross(*e1, *e2)
                    for e1 in _edges(a.boundary) for e2 in _edges(b.boundary))
                overlap = overlap or any(
                    strictly_inside(*v, b.boundary) for v in a.boundary)
                overlap = overlap or any(
                    strictly_inside(*v, a.boundary) for v in b.boundary)
                # coincident/nested polygons have no proper crossings; probe
                # an interior point of each against the other
                for probe, other in ((interior_probe(a.boundary), b.boundary),
                                     (interior_probe(b.boundary), a.boundary)):
                    overlap = overlap or (probe is not None
                                          and strictly_inside(*probe, other))
                if overlap:
                    raise ConfigInvalid(f"zones {a.zone_id} and {b.zone_id} overlap")

    @property
    def zone_ids(self) -> list[int]:
        return [z.zone_id for z in self.zones]

    def assign_zone(self, lat: float, lon: float) -> int:
        """Zone containing the point; boundary points go to the lowest
        touching zone_id (zones are iterated in id order)."""
        lat, lon = validate_point(lat, lon)
        for zone in self.zones:
            if zone.contains(lat, lon):
                return zone.zone_id
        raise Unzoned(f"point ({lat}, {lon}) is outside all zones", lat=lat, lon=lon)

    def bounding_box(self) -> tuple[float, float, float, float]:
        lats = [v[0] for z in self.zones for v in z.boundary]
        lons = [v[1] for z in self.zones for v in z.boundary]
        return min(lats), min(lons), max(lats), max(lons)

    def to_payload(self) -> dict:
        return {"zones": [z.to_payload() for z in self.zones]}


@dataclass(frozen=True)
class Marker:
    kind: str  # crime | health
    lat: float
    lon: float
    occurred_at: date
    label: str
    source_id: str

    def to_payload(self) -> dict:
        return {"kind": self.kind, "lat": self.lat, "lon": self.lon,
                "label": self.label, "at": iso_date(self.occurred_at),
                "source_id": self.source_id}


def build_markers(state: "State", kind: str, window: DateWindow = DateWindow()) -> list[Marker]:
    """One marker per blotter case (crime) or health case (health) in window."""
    markers: list[Marker] = []
    if kind == "crime":
        for case in state.cases.values():
            if window.contains(case.date_filed):
                markers.append(Marker("crime", case.lat, case.lon, case.date_filed,
                                      case.offense_type, case.case_number))
    elif kind == "health":
        for hc in state.health_cases.values():
            d = hc.recorded_at.date()
            if window.contains(d):
                markers.append(Marker("health", hc.lat, hc.lon, d,
                                      hc.condition, hc.health_case_id))
    else:
        raise InvalidLocation(f"unknown marker kind {kind!r}")
    markers.sort(key=lambda m: m.source_id)
    return markers


@dataclass(frozen=True)
class HotspotGrid:
    origin: tuple[float, float]  # SW corner (lat, lon)
    cell_size_m: float
    rows: int
    cols: int
    cells: tuple[tuple[int, ...], ...]
    bands: tuple[tuple[str, ...], ...]
    top: tuple[dict, ...]

    def cell_bounds(self, row: int, col: int) -> tuple[float, float, float, float]:
        return cell_bounds(self.origin, self.cell_size_m, row, col)

    def to_payload(self) -> dict:
        return {
            "origin": list(self.origin),
            "cell_size_m": self.cell_size_m,
            "rows": self.rows,
            "cols": self.cols,
            "counts": [list(r) for r in self.cells],
            "bands": [list(r) for r in self.bands],
            "top": [dict(t) for t in self.top],
        }


def grid_index(lat: float, lon: float, origin: tuple[float, float],
               cell_size_m: float) -> tuple[int, int]:
    """(row, col) of the cell containing the point, via the local projection."""
    dy = (lat - origin[0]) * M_PER_DEG_LAT
    dx = (lon - origin[1]) * M_PER_DEG_LAT * math.cos(math.radians(origin[0]))
    return math.floor(dy / cell_size_m), math.floor(dx / cell_size_m)


def cell_bounds(origin: tuple[float, float], cell_size_m: float,
                row: int, col: int) -> tuple[float, float, float, float]:
    """(south, west, north, east) degree bounds of one grid cell."""
    lat0, lon0 = origin
    dlat = cell_size_m / M_PER_DEG_LAT
    dlon = cell_size_m / (M_PER_DEG_LAT * math.cos(math.radians(lat0)))
    return (lat0 + row * dlat, lon0 + col * dlon,
            lat0 + (row + 1) * dlat, lon0 + (col + 1) * dlon)


def _band_thresholds(nonzero: list[int]) -> tuple[int, int]:
    ranked = sorted(nonzero)
    n = len(ranked)
    p50 = ranked[math.ceil(0.5 * n) - 1]
    p90 = ranked[math.ceil(0.9 * n) - 1]
    return p50, p90


def detect_hotspots(markers: Sequence[Marker], zone_map: ZoneMap,
                    cell_size_m: float, top_k: int) -> HotspotGrid:
    """Count markers into a grid over the zones' bounding box and rank cells.

    Band thresholds are the 50th/90th nearest-rank percentiles of nonzero
    cell counts; a lone nonzero cell is the hotspot and is banded high.
    """
    if cell_size_m <= 0:
        raise InvalidLocation("cell_size_m must be > 0")
    if top_k < 1:
        raise InvalidLocation("top_k must be >= 1")
    min_lat, min_lon, max_lat, max_lon = zone_map.bounding_box()
    origin = (min_lat, min_lon)
    height_m = (max_lat - min_lat) * M_PER_DEG_LAT
    width_m = (max_lon - min_lon) * M_PER_DEG_LAT * math.cos(math.radians(min_lat))
    rows = max(1, math.ceil(height_m / cell_size_m))
    cols = max(1, math.ceil(width_m / cell_size_m))

    counts = [[0] * cols for _ in range(rows)]
    for m in markers:
        r, c = grid_index(m.lat, m.lon, origin, cell_size_m)
        if 0 <= r < rows and 0 <= c < cols:
            counts[r][c] += 1

    nonzero = [c for row in counts for c in row if c > 0]
    if nonzero:
        p50, p90 = _band_thresholds(nonzero)
        lone = len(nonzero) == 1
    bands = []
    for row in counts:
        band_row = []
        for c in row:
            if c == 0:
                band_row.append("none")
            elif lone or c > p90:
                band_row.append("high")
            elif c > p50:
                band_row.append("medium")
            else:
                band_row.append("low")
        bands.append(tuple(band_row))

    ranked = sorted(
        ((r, c) for r in range(rows) for c in range(cols) if counts[r][c] > 0),
        key=lambda rc: (-counts[rc[0]][rc[1]], rc[0], rc[1]))
    top = []
    for r, c in ranked[:top_k]:
        south, west, north, east = cell_bounds(origin, cell_size_m, r, c)
        top.append({"row": r, "col": c, "count": counts[r][c],
                    "band": bands[r][c],
                    "center": [(south + north) / 2.0, (west + east) / 2.0]})

    return HotspotGrid(origin=origin, cell_size_m=float(cell_size_m), rows=rows,
                       cols=cols, cells=tuple(tuple(r) for r in counts),
                       bands=tuple(bands), top=tuple(top))


def geodata_document(zone_map: ZoneMap, markers: Sequence[Marker],
                     grid: HotspotGrid | None = None) -> dict:
    doc = {
        "zones": zone_map.to_payload()["zones"],
        "markers": [m.to_payload() for m in markers],
    }
    if grid is not None:
        doc["hotspots"] = grid.to_payload()
    return doc


def default_zone_map() -> ZoneMap:
    """Synthetic 7-zone layout: four south and three north rectangles over a
    roughly 3 km x 2.5 km box. Real deployments supply their own polygons."""
    south, north = 14.550, 14.572
    mid = 14.561
    west = 121.020
    widths = [0.007, 0.007, 0.007, 0.007]
    zones = []
    lon = west
    for i, w in enumerate(widths, start=1):
        zones.append(Zone(i, f"Zone {i}", (
            (south, lon), (south, lon + w), (mid, lon + w), (mid, lon))))
        lon += w
    lon = west
    for i, w in enumerate([0.010, 0.009, 0.009], start=5):
        zones.append(Zone(i, f"Zone {i}", (
            (mid, lon), (mid, lon + w), (north, lon + w), (north, lon))))
        lon += w
    return ZoneMap(zones)
