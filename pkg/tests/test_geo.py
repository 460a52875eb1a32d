import math
import random
from datetime import date

import pytest
from hypothesis import given, strategies as st

from bgis.common import DateWindow
from bgis.errors import ConfigInvalid, InvalidLocation, Unzoned
from bgis.geo import (EARTH_RADIUS_M, Zone, ZoneMap, build_markers,
                      default_zone_map, detect_hotspots, geodata_document,
                      grid_index, haversine, point_in_polygon,
                      point_on_boundary)
from bgis.casework import CaseworkService

from fixtures import make_store, seed_random_fixture
from oracles import cell_count_oracle, great_circle_oracle

coords = st.tuples(st.floats(-89.0, 89.0), st.floats(-179.0, 179.0))


class TestHaversine:
    def test_zero_distance_to_self(self):
        assert haversine((14.55, 121.02), (14.55, 121.02)) == 0.0

    def test_half_circumference(self):
        d = haversine((0.0, 0.0), (0.0, 180.0))
        assert d == pytest.approx(math.pi * EARTH_RADIUS_M, abs=1e-6)
        assert abs(d - 20_015_086.8) <= 1.0

    def test_agrees_with_independent_great_circle(self):
        a, b = (14.5547, 121.0244), (14.5609, 121.0311)
        mine = haversine(a, b)
        ref = great_circle_oracle(a, b)
        assert mine == pytest.approx(ref, rel=1e-3)  # within 0.1 %
        assert mine == pytest.approx(ref, rel=1e-9)

    @given(a=coords, b=coords)
    def test_symmetry(self, a, b):
        assert haversine(a, b) == pytest.approx(haversine(b, a), rel=1e-12)
        assert haversine(a, b) >= 0.0

    @given(a=coords, b=coords, c=coords)
    def test_triangle_inequality(self, a, b, c):
        ab, bc, ac = haversine(a, b), haversine(b, c), haversine(a, c)
        assert ac <= ab + bc + 1e-6 * max(1.0, ac)

    def test_rejects_bad_coordinates(self):
        with pytest.raises(InvalidLocation):
            haversine((91.0, 0.0), (0.0, 0.0))
        with pytest.raises(InvalidLocation):
            haversine((0.0, 0.0), (0.0, 181.0))


class TestZoneAssignment:
    def setup_method(self):
        self.zone_map = default_zone_map()

    def test_centroid_of_each_zone_maps_to_it(self):
        for zone in self.zone_map.zones:
            lat = sum(v[0] for v in zone.boundary) / len(zone.boundary)
            lon = sum(v[1] for v in zone.boundary) / len(zone.boundary)
            assert self.zone_map.assign_zone(lat, lon) == zone.zone_id

    def test_far_point_is_unzoned(self):
        with pytest.raises(Unzoned):
            self.zone_map.assign_zone(0.0, 0.0)

    def test_shared_edge_resolves_to_lowest_zone_id(self):
        # mid-latitude edge between the south row (zone 2) and north row (zone 5)
        assert self.zone_map.assign_zone(14.561, 121.0285) == 2

    def test_shared_vertex_resolves_to_lowest_zone_id(self):
        # corner shared by zones 1, 2, and 5
        assert self.zone_map.assign_zone(14.561, 121.027) == 1

    def test_assignment_is_deterministic(self, rng):
        min_lat, min_lon, max_lat, max_lon = self.zone_map.bounding_box()
        for _ in range(200):
            lat = rng.uniform(min_lat, max_lat)
            lon = rng.uniform(min_lon, max_lon)
            first = self.zone_map.assign_zone(lat, lon)
            assert all(self.zone_map.assign_zone(lat, lon) == first for _ in range(3))

    def test_interior_point_in_exactly_one_zone(self, rng):
        for _ in range(100):
            zone = rng.choice(self.zone_map.zones)
            lats = [v[0] for v in zone.boundary]
            lons = [v[1] for v in zone.boundary]
            lat = rng.uniform(min(lats) + 1e-4, max(lats) - 1e-4)
            lon = rng.uniform(min(lons) + 1e-4, max(lons) - 1e-4)
            containing = [z.zone_id for z in self.zone_map.zones
                          if point_in_polygon(lat, lon, z.boundary)
                          and not point_on_boundary(lat, lon, z.boundary)]
            assert len(containing) <= 1


class TestZoneMapValidation:
    def test_requires_exactly_seven_zones(self):
        zones = list(default_zone_map().zones)[:5]
        with pytest.raises(ConfigInvalid):
            ZoneMap(zones)

    def test_rejects_overlapping_zones(self):
        zones = list(default_zone_map().zones)
        clone = Zone(zone_id=zones[1].zone_id, name="overlap",
                     boundary=zones[0].boundary)
        with pytest.raises(ConfigInvalid):
            ZoneMap([zones[0], clone] + zones[2:])

    def test_rejects_self_intersecting_polygon(self):
        bowtie = [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
        doc = default_zone_map().to_payload()
        doc["zones"][0]["boundary"] = bowtie
        with pytest.raises(ConfigInvalid):
            ZoneMap.from_config(doc)

    def test_config_round_trip(self):
        doc = default_zone_map().to_payload()
        rebuilt = ZoneMap.from_config(doc)
        assert rebuilt.to_payload() == doc


class TestMarkers:
    def test_empty_stores_give_no_markers(self):
        store = make_store()
        assert build_markers(store.state, "crime") == []
        assert build_markers(store.state, "health") == []

    def test_one_marker_per_blotter_case(self, rng):
        store = make_store()
        seed_random_fixture(store, rng, residents=6, cases=4, health_cases=0)
        markers = build_markers(store.state, "crime")
        assert len(markers) == 4
        assert {m.source_id for m in markers} == set(store.state.cases)

    def test_counts_match_full_scan_per_kind(self, rng):
        store = make_store()
        seed_random_fixture(store, rng, residents=10, cases=12, health_cases=9)
        window = DateWindow(date(2016, 3, 1), date(2016, 9, 30))
        crime = build_markers(store.state, "crime", window)
        health = build_markers(store.state, "health", window)
        assert len(crime) == sum(1 for c in store.state.cases.values()
                                 if window.contains(c.date_filed))
        assert len(health) == sum(1 for h in store.state.health_cases.values()
                                  if window.contains(h.recorded_at.date()))


class TestHotspots:
    def setup_method(self):
        self.store = make_store()
        self.zone_map = self.store.zone_map

    def _grid(self, markers, cell=120.0, k=5):
        return detect_hotspots(markers, self.zone_map, cell, k)

    def test_no_incidents_all_zero_empty_top(self):
        grid = self._grid(build_markers(self.store.state, "crime"))
        assert all(c == 0 for row in grid.cells for c in row)
        assert all(b == "none" for row in grid.bands for b in row)
        assert grid.top == ()

    def test_all_incidents_at_one_point_one_high_cell(self, rng):
        ids = seed_random_fixture(self.store, rng, residents=5, cases=0,
                                  health_cases=0)
        casework = CaseworkService(self.store)
        point = (14.5555, 121.0225)
        for i in range(9):
            casework.file_blotter([ids[0]], [ids[1]], "theft", "", point[0],
                                  point[1], date(2016, 12, 3), zone_id=1)
        grid = self._grid(build_markers(self.store.state, "crime"))
        flat = [c for row in grid.cells for c in row]
        assert sorted(flat)[-1] == 9
        assert sum(flat) == 9
        r, c = grid_index(*point, grid.origin, grid.cell_size_m)
        assert grid.cells[r][c] == 9
        assert grid.bands[r][c] == "high"
        assert grid.top[0]["row"] == r and grid.top[0]["col"] == c
        assert grid.top[0]["count"] == 9 and grid.top[0]["band"] == "high"

    def test_scattered_counts_equal_brute_force(self, rng):
        ids = seed_random_fixture(self.store, rng, residents=8, cases=0,
                                  health_cases=0)
        casework = CaseworkService(self.store)
        min_lat, min_lon, max_lat, max_lon = self.zone_map.bounding_box()
        points = []
        for i in range(200):
            lat = rng.uniform(min_lat, max_lat)
            lon = rng.uniform(min_lon, max_lon)
            points.append((lat, lon))
            casework.file_blotter([ids[0]], [ids[1]], "theft", "", lat, lon,
                                  date(2016, 6, 1), zone_id=1)
        grid = self._grid(build_markers(self.store.state, "crime"), cell=180.0)
        expected = cell_count_oracle(points, grid.origin, grid.cell_size_m,
                                     grid.rows, grid.cols)
        assert [list(row) for row in grid.cells] == expected
        assert sum(c for row in grid.cells for c in row) == 200

    def test_ranking_is_stable_and_ordered(self, rng):
        seed_random_fixture(self.store, rng, residents=8, cases=40, health_cases=0)
        markers = build_markers(self.store.state, "crime")
        first = self._grid(markers, cell=150.0, k=10)
        second = self._grid(markers, cell=150.0, k=10)
        assert first == second
        counts = [t["count"] for t in first.top]
        assert counts == sorted(counts, reverse=True)
        keys = [(-t["count"], t["row"], t["col"]) for t in first.top]
        assert keys == sorted(keys)

    def test_bands_monotone_in_counts(self, rng):
        seed_random_fixture(self.store, rng, residents=8, cases=50, health_cases=0)
        grid = self._grid(build_markers(self.store.state, "crime"), cell=200.0)
        order = {"none": 0, "low": 1, "medium": 2, "high": 3}
        cells = [(grid.cells[r][c], grid.bands[r][c])
                 for r in range(grid.rows) for c in range(grid.cols)]
        for count_a, band_a in cells:
            for count_b, band_b in cells:
                if count_a <= count_b:
                    assert order[band_a] <= order[band_b]

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidLocation):
            self._grid([], cell=0)
        with pytest.raises(InvalidLocation):
            self._grid([], k=0)


def test_geodata_document_shape(rng):
    store = make_store()
    seed_random_fixture(store, rng, residents=6, cases=5, health_cases=3)
    markers = build_markers(store.state, "crime")
    grid = detect_hotspots(markers, store.zone_map, 150.0, 3)
    doc = geodata_document(store.zone_map, markers, grid)
    assert len(doc["zones"]) == 7
    assert len(doc["markers"]) == 5
    assert {"kind", "lat", "lon", "label", "at", "source_id"} \
        <= set(doc["markers"][0])
    hs = doc["hotspots"]
    assert set(hs) == {"origin", "cell_size_m", "rows", "cols", "counts",
                       "bands", "top"}
    assert len(hs["counts"]) == hs["rows"]
    assert len(hs["counts"][0]) == hs["cols"]
