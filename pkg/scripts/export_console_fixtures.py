#!/usr/bin/env python3
"""Regenerate the console test fixtures by capturing real API payloads for
the registration-table and blotter-logbook fixtures.

Usage: python scripts/export_console_fixtures.py
"""
import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from fixtures import register_fig3, seed_blotter_fixture  # noqa: E402
from test_service import build_test_app, login  # noqa: E402

OUT = ROOT / "console" / "tests" / "fixtures"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    app, services = build_test_app()
    ids = seed_blotter_fixture(services.store)
    services.opendata.publish_advisory(
        "Medical mission", "Free checkup at the barangay hall on Saturday.",
        officer="sec1", officer_role="secretary")
    client = TestClient(app)
    headers = login(client, "sec1")
    de_asis = ids["de Asis, Mark"]

    def dump(name, payload):
        (OUT / name).write_text(json.dumps(payload, indent=2) + "\n")
        print("wrote", name)

    dump("residents.json", client.get("/api/residents", headers=headers).json())

    # registration-table-only registry (13 listed residents)
    fig3_app, fig3_services = build_test_app()
    register_fig3(fig3_services.registry)
    fig3_client = TestClient(fig3_app)
    fig3_headers = login(fig3_client, "sec1")
    dump("residents_fig3.json",
         fig3_client.get("/api/residents", headers=fig3_headers).json())
    dump("open_cases_de_asis.json", client.get(
        "/api/blotter", params={"status": "open", "respondent_id": de_asis},
        headers=headers).json())
    dump("clearance_denial.json", client.post("/api/clearance", json={
        "resident_id": de_asis, "kind": "clearance", "purpose": "employment"},
        headers=headers).json())
    dump("zones.json", client.get("/api/geo/zones", headers=headers).json())
    dump("markers.json", client.get("/api/geo/markers",
                                    params={"kind": "crime"},
                                    headers=headers).json())
    dump("hotspots.json", client.get("/api/geo/hotspots", params={
        "kind": "crime", "cell": 150, "k": 5}, headers=headers).json())
    dump("preview_161.json", client.post("/api/broadcasts/preview", json={
        "message": "x" * 161, "audience": {"kind": "all"}},
        headers=headers).json())
    dump("datasets.json", client.get("/api/opendata").json())
    dump("advisories.json", client.get("/api/advisories").json())
    csv_bytes = client.get("/api/opendata/crime_status.csv").content
    (OUT / "crime_status.csv").write_bytes(csv_bytes)
    print("wrote crime_status.csv", len(csv_bytes), "bytes")
    dump("session.json", {"token": "t" * 32, "username": "sec1",
                          "role": "secretary",
                          "expires_at": "2030-01-01T00:00:00+00:00"})
    return 0


if __name__ == "__main__":
    sys.exit(main())
