#!/usr/bin/env python3
"""Seed a demo data directory: accounts, residents, blotter cases, health
records, and one advisory, then print a quick situation summary.

Usage:
    python scripts/seed_demo.py [--data-dir ./demo-data] [--seed 7]

Afterwards:
    DATA_DIR=./demo-data bgis serve --bind 127.0.0.1:8000
    (sign in as secretary / demo-secretary-pw)
"""
import argparse
import random
import sys
from datetime import date
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from bgis.analytics import crime_chart, likelihood_report
from bgis.casework import CaseworkService
from bgis.common import DateWindow
from bgis.geo import build_markers, detect_hotspots
from bgis.health import HealthService
from bgis.opendata import OpenDataService
from bgis.registry import RegistryService
from bgis.service.auth import AuthService
from bgis.store import Store

from fixtures import random_profile, random_point_in_zones, CONDITIONS, OFFENSES

DEMO_ACCOUNTS = [
    ("secretary", "demo-secretary-pw", "secretary"),
    ("treasurer", "demo-treasurer-pw", "treasurer"),
    ("healthworker", "demo-health-pw", "health_worker"),
    ("lgu", "demo-lgu-pw", "lgu"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default="./demo-data")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--residents", type=int, default=60)
    parser.add_argument("--cases", type=int, default=45)
    parser.add_argument("--health-cases", type=int, default=30)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    store = Store(path=Path(args.data_dir) / "events.log",
                  rng=random.Random(args.seed))
    if store.state.residents:
        print(f"{args.data_dir} already has data; aborting", file=sys.stderr)
        return 1

    auth = AuthService(store)
    for username, password, role in DEMO_ACCOUNTS:
        auth.create_account(username, password, role)

    registry = RegistryService(store)
    casework = CaseworkService(store)
    health = HealthService(store)
    opendata = OpenDataService(store)

    ids = [registry.register_resident(random_profile(rng, i)).resident_id
           for i in range(args.residents)]

    # a handful of repeat respondents make the reoffend task non-trivial
    repeaters = rng.sample(ids, 6)
    for i in range(args.cases):
        lat, lon = random_point_in_zones(rng, store)
        respondent = rng.choice(repeaters if rng.random() < 0.5 else ids)
        complainant = rng.choice([r for r in ids if r != respondent])
        casework.file_blotter(
            [complainant], [respondent], rng.choice(OFFENSES),
            "demo incident", lat, lon,
            date(2016, rng.randint(1, 12), rng.randint(1, 28)),
            factors={respondent: {
                "employment": rng.choice(["yes", "no"]),
                "alcohol_problems": rng.choice(["yes", "no", "unknown"]),
                "drug_problems": rng.choice(["yes", "no", "unknown"]),
            }})

    for _ in range(args.health_cases):
        lat, lon = random_point_in_zones(rng, store)
        health.record_health_case("resident", rng.choice(ids),
                                  rng.choice(CONDITIONS), "", lat, lon,
                                  recorded_by="healthworker")

    opendata.publish_advisory(
        "Medical mission", "Free checkup at the barangay hall on Saturday.",
        officer="secretary", officer_role="secretary")

    markers = build_markers(store.state, "crime")
    grid = detect_hotspots(markers, store.zone_map, cell_size_m=150.0, top_k=3)
    print(f"seeded {len(ids)} residents, {len(store.state.cases)} cases, "
          f"{len(store.state.health_cases)} health cases -> {args.data_dir}")
    print("offense counts:", crime_chart(store.state, DateWindow(), "offense_type"))
    print("top hotspot cells:", [(t["row"], t["col"], t["count"], t["band"])
                                 for t in grid.top])
    report = likelihood_report(store.state, "offend_by_residency",
                               today=store.now().date())
    for group, info in report["groups"].items():
        print(f"P(offend | {group}) = {info['offend_probability']:.3f} "
              f"({info['offenders']}/{info['records']} offenders)")
    store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
