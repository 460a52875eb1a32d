"""Shared fixtures: the D1 reference dataset and the registry/blotter tables
used across the suite.

D1 is a 12-row offender-factor dataset (6 reoffenders, 6 not) constructed to
be separable by an unrestricted tree; every expected value asserted against
it was computed with the independent oracles before the implementation ran.
"""
from __future__ import annotations

import random
from datetime import date, datetime, timezone

from bgis.analytics import LabeledRecord, offender_task
from bgis.casework import CaseworkService
from bgis.health import HealthService
from bgis.registry import RegistryService
from bgis.store import Store

FIXED_NOW = datetime(2017, 1, 15, 8, 0, 0, tzinfo=timezone.utc)


def fixed_clock():
    return FIXED_NOW


def make_store(path=None, seed: int = 7, clock=fixed_clock) -> Store:
    return Store(path=path, rng=random.Random(seed), clock=clock)


# --- D1: reference offender dataset ------------------------------------------

_D1_COLUMNS = ("employment", "alcohol_problems", "family_problems", "status",
               "drug_problems", "gambling", "drug_addiction",
               "mental_health_problems", "financial_problems", "school_problem",
               "age_band", "gender", "residency_status", "month")

_D1_TABLE = [
    # the ten yes/no factors, then age band, gender, residency, month, label
    ("no",  "yes", "yes", "no",  "yes", "yes", "no",  "no",  "yes", "no",  "18-25", "male",   "migrant",     "12", "yes"),
    ("no",  "yes", "no",  "no",  "yes", "no",  "yes", "no",  "yes", "yes", "18-25", "male",   "migrant",     "12", "yes"),
    ("no",  "no",  "yes", "yes", "yes", "yes", "yes", "no",  "no",  "no",  "26-40", "male",   "non_migrant", "01", "yes"),
    ("yes", "yes", "yes", "no",  "no",  "yes", "no",  "yes", "yes", "no",  "18-25", "female", "migrant",     "03", "yes"),
    ("no",  "yes", "yes", "yes", "yes", "no",  "no",  "no",  "yes", "yes", "<18",   "male",   "migrant",     "12", "yes"),
    ("no",  "no",  "no",  "no",  "yes", "yes", "yes", "yes", "no",  "no",  "26-40", "male",   "non_migrant", "06", "yes"),
    ("yes", "no",  "no",  "yes", "no",  "no",  "no",  "no",  "no",  "no",  "41-60", "male",   "non_migrant", "01", "no"),
    ("yes", "no",  "yes", "no",  "no",  "no",  "no",  "no",  "yes", "no",  "26-40", "female", "non_migrant", "02", "no"),
    ("yes", "yes", "no",  "yes", "no",  "no",  "no",  "no",  "no",  "no",  "41-60", "male",   "non_migrant", "07", "no"),
    ("no",  "no",  "no",  "no",  "no",  "no",  "no",  "yes", "no",  "yes", ">60",   "female", "migrant",     "09", "no"),
    ("yes", "no",  "no",  "yes", "no",  "yes", "no",  "no",  "no",  "no",  "26-40", "male",   "non_migrant", "11", "no"),
    ("yes", "no",  "no",  "no",  "no",  "no",  "no",  "no",  "yes", "no",  "26-40", "female", "migrant",     "05", "no"),
]

D1_TASK = offender_task(classes=("yes", "no"))


def d1_records() -> list[LabeledRecord]:
    return [LabeledRecord(features=dict(zip(_D1_COLUMNS, row[:-1])), label=row[-1])
            for row in _D1_TABLE]


def d1_rows() -> list[tuple[dict, str]]:
    """Oracle-side view of D1: (features, label) tuples."""
    return [(dict(zip(_D1_COLUMNS, row[:-1])), row[-1]) for row in _D1_TABLE]


# --- registration table (13 listed residents) --------------------------------

FIG3_PROFILES = [
    ("Bladilla", "Christian", "Oracion"),
    ("Bladilla", "Nicole", "Clarita"),
    ("Bladilla", "Judith", "Clarita"),
    ("Bladilla", "John Mark", "Clarita"),
    ("Clabanan", "Wilson", "Flames"),
    ("Clabanan", "Vanessa", "Delia"),
    ("Castillo", "Mary Grace", "de los Reyes"),
    ("Castillo", "Joseline", "de los Reyes"),
    ("Castillo", "Mariel", "de los Reyes"),
    ("Castillo", "Arcene", "de la Cruz"),
    ("Castillo", "Adrian", "de los Reyes"),
    ("de Asa", "Mark", "Mercado"),
    ("del Rosario", "Ramirez", "Flames"),
]


def profile_for(last: str, first: str, middle: str, i: int = 0, **over) -> dict:
    profile = {
        "last_name": last,
        "first_name": first,
        "middle_name": middle,
        "birthdate": date(1980 + i % 20, 1 + i % 12, 1 + i % 28).isoformat(),
        "gender": "male" if i % 2 == 0 else "female",
        "occupation": ["vendor", "driver", "teacher", "carpenter"][i % 4],
        "residency_status": "migrant" if i % 3 == 0 else "non_migrant",
        "zone_id": 1 + i % 7,
        "address": f"{10 + i} Sampaguita St",
        "mobile_number": f"+639170000{100 + i}",
    }
    profile.update(over)
    return profile


def register_fig3(registry: RegistryService) -> dict[str, str]:
    """Register the 13 listed residents; returns 'Last, First' -> resident_id."""
    ids = {}
    for i, (last, first, middle) in enumerate(FIG3_PROFILES):
        result = registry.register_resident(profile_for(last, first, middle, i))
        ids[f"{last}, {first}"] = result.resident_id
    return ids


# --- blotter logbook (12 case rows, December 2016) ----------------------------

FIG5_CASES = [
    ("2016-12-03", "298476", ("Basitena", "Nicole", "Genia")),
    ("2016-12-03", "534502", ("Reyes", "Joshua", "Cruz")),
    ("2016-12-03", "919466", ("Cabranza", "Vladimir", "Rolla")),
    ("2016-12-04", "649396", ("de Asis", "Mark", "Mercado")),
    ("2016-12-04", "549704", ("de Asis", "Mark", "Mercado")),
    ("2016-12-04", "682574", ("Castillo", "Jordan", "de los Reyes")),
    ("2016-12-04", "214662", ("de Asis", "Mark", "Mercado")),
    ("2016-12-04", "277920", ("Basitena", "John Mark", "Genia")),
    ("2016-12-04", "113335", ("Navarro", "Stephanie", "Sakator")),
    ("2016-12-04", "362766", ("Castro", "Wilson", "Ramos")),
    ("2016-12-04", "428923", ("del Rosario", "Kristine", "Ramos")),
    ("2016-12-04", "838888", ("Castillo", "Jessam", "de la Cruz")),
]

OFFENSES = ["theft", "physical injury", "trespassing", "public disturbance"]


def seed_blotter_fixture(store: Store) -> dict:
    """Registry of the 13 listed residents plus every logbook respondent, and
    the 12 logbook cases filed with their original incident numbers."""
    registry = RegistryService(store)
    casework = CaseworkService(store)
    ids = register_fig3(registry)
    distinct = sorted({name for _, _, name in FIG5_CASES})
    for i, (last, first, middle) in enumerate(distinct):
        result = registry.register_resident(
            profile_for(last, first, middle, 13 + i))
        ids[f"{last}, {first}"] = result.resident_id
    complainant = ids["Bladilla, Christian"]
    zone_map = store.zone_map
    z1 = zone_map.zones[0].boundary
    inner = ((z1[0][0] + z1[2][0]) / 2, (z1[0][1] + z1[2][1]) / 2)
    for i, (filed, case_number, (last, first, _)) in enumerate(FIG5_CASES):
        casework.file_blotter(
            complainant_ids=[complainant],
            respondent_ids=[ids[f"{last}, {first}"]],
            offense_type=OFFENSES[i % len(OFFENSES)],
            narrative=f"logbook entry {case_number}",
            lat=inner[0] + (i % 3) * 1e-4,
            lon=inner[1] + (i % 4) * 1e-4,
            date_filed=filed,
            case_number=case_number,
        )
    return ids


# --- randomized fixture builders ----------------------------------------------

FIRST_NAMES = ["Ana", "Jose", "Maria", "Carlo", "Liza", "Ramon", "Grace",
               "Pedro", "Nina", "Marco", "Elena", "Paolo"]
LAST_NAMES = ["Santos", "Reyes", "Cruz", "Garcia", "Mendoza", "Torres",
              "Flores", "Ramos", "Aquino", "Navarro"]
CONDITIONS = ["dengue", "influenza", "hypertension", "measles"]


def random_profile(rng: random.Random, i: int) -> dict:
    return {
        "last_name": rng.choice(LAST_NAMES),
        "first_name": rng.choice(FIRST_NAMES),
        "middle_name": rng.choice(LAST_NAMES),
        "birthdate": date(rng.randint(1950, 2005), rng.randint(1, 12),
                          rng.randint(1, 28)).isoformat(),
        "gender": rng.choice(["male", "female"]),
        "occupation": rng.choice(["vendor", "driver", "clerk", "farmer"]),
        "residency_status": rng.choice(["migrant", "non_migrant"]),
        "zone_id": rng.randint(1, 7),
        "address": f"{rng.randint(1, 99)} {rng.choice(LAST_NAMES)} St",
        "mobile_number": f"+6391{rng.randint(10_000_000, 99_999_999)}",
    }


def random_point_in_zones(rng: random.Random, store: Store) -> tuple[float, float]:
    min_lat, min_lon, max_lat, max_lon = store.zone_map.bounding_box()
    return (rng.uniform(min_lat, max_lat), rng.uniform(min_lon, max_lon))


def seed_random_fixture(store: Store, rng: random.Random, residents: int = 20,
                        cases: int = 15, health_cases: int = 10) -> list[str]:
    registry = RegistryService(store)
    casework = CaseworkService(store)
    health = HealthService(store)
    ids = [registry.register_resident(random_profile(rng, i)).resident_id
           for i in range(residents)]
    for _ in range(cases):
        lat, lon = random_point_in_zones(rng, store)
        pair = rng.sample(ids, 2)
        casework.file_blotter(
            complainant_ids=[pair[0]], respondent_ids=[pair[1]],
            offense_type=rng.choice(OFFENSES), narrative="",
            lat=lat, lon=lon,
            date_filed=date(2016, rng.randint(1, 12), rng.randint(1, 28)),
            zone_id=rng.randint(1, 7))
    for _ in range(health_cases):
        lat, lon = random_point_in_zones(rng, store)
        health.record_health_case(
            subject_kind="resident", subject_id=rng.choice(ids),
            condition=rng.choice(CONDITIONS), notes="", lat=lat, lon=lon,
            zone_id=rng.randint(1, 7), recorded_by="hw1")
    return ids
