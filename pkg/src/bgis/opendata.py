"""Open-data catalog: privacy-filtered CSV exports and public advisories.

Exports are aggregates only; any count of 1 or 2 is replaced by the
suppression token "<3" so individuals in a small community cannot be
re-identified from a published cell.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from typing import TYPE_CHECKING

from .common import DateWindow, iso_ts, parse_timestamp
from .errors import EmptyBody, Forbidden, MalformedCsv, NotFound

if TYPE_CHECKING:
    from .store import State, Store

SUPPRESSION_TOKEN = "<3"
SUPPRESSION_THRESHOLD = 3

DATASETS = {
    "barangay_profile": {
        "title": "Barangay profile",
        "description": "Resident counts per zone, by residency status and gender.",
        "columns": ["zone_id", "resident_count", "migrant_count",
                    "male_count", "female_count"],
    },
    "crime_status": {
        "title": "Crime status",
        "description": "Monthly blotter case counts per zone and offense type.",
        "columns": ["month", "zone_id", "offense_type", "count"],
    },
    "health_status": {
        "title": "Barangay health status",
        "description": "Monthly health case counts per zone and condition.",
        "columns": ["month", "zone_id", "condition", "count"],
    },
    "programs_advisories": {
        "title": "Programs and advisories",
        "description": "Published government programs and community advisories.",
        "columns": ["published_at", "title", "body"],
    },
}


@dataclass(frozen=True)
class Advisory:
    advisory_id: str
    title: str
    body: str
    published_at: datetime
    published_by: str

    def to_payload(self) -> dict:
        return {
            "advisory_id": self.advisory_id,
            "title": self.title,
            "body": self.body,
            "published_at": iso_ts(self.published_at),
            "published_by": self.published_by,
        }

    @classmethod
    def from_payload(cls, p: dict) -> "Advisory":
        return cls(p["advisory_id"], p["title"], p["body"],
                   parse_timestamp(p["published_at"], "published_at"),
                   p["published_by"])


def _suppress(count: int) -> str:
    return SUPPRESSION_TOKEN if 0 < count < SUPPRESSION_THRESHOLD else str(count)


class OpenDataService:
    def __init__(self, store: "Store"):
        self.store = store

    @property
    def _state(self) -> "State":
        return self.store.state

    def list_datasets(self) -> list[dict]:
        return [dict(dataset_id=ds_id, **meta) for ds_id, meta in DATASETS.items()]

    def export_csv(self, dataset_id: str, window: DateWindow = DateWindow()) -> bytes:
        if dataset_id not in DATASETS:
            raise NotFound(f"dataset {dataset_id} not found", dataset_id=dataset_id)
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\r\n")
        writer.writerow(DATASETS[dataset_id]["columns"])
        rows = getattr(self, f"_rows_{dataset_id}")(window)
        writer.writerows(rows)
        return out.getvalue().encode("utf-8")

    def _rows_crime_status(self, window: DateWindow) -> list[list]:
        counts: Counter = Counter()
        for case in self._state.cases.values():
            if window.contains(case.date_filed):
                month = f"{case.date_filed.year:04d}-{case.date_filed.month:02d}"
                counts[(month, case.zone_id, case.offense_type)] += 1
        return [[m, z, o, _suppress(c)]
                for (m, z, o), c in sorted(counts.items())]

    def _rows_health_status(self, window: DateWindow) -> list[list]:
        counts: Counter = Counter()
        for hc in self._state.health_cases.values():
            d = hc.recorded_at.date()
            if window.contains(d):
                counts[(f"{d.year:04d}-{d.month:02d}", hc.zone_id, hc.condition)] += 1
        return [[m, z, cond, _suppress(c)]
                for (m, z, cond), c in sorted(counts.items())]

    def _rows_barangay_profile(self, window: DateWindow) -> list[list]:
        rows = []
        for zone_id in self.store.zone_map.zone_ids:
            residents = [r for r in self._state.residents.values()
                         if r.zone_id == zone_id]
            if not residents:
                continue
            rows.append([
                zone_id,
                _suppress(len(residents)),
                _suppress(sum(1 for r in residents if r.residency_status == "migrant")),
                _suppress(sum(1 for r in residents if r.gender == "male")),
                _suppress(sum(1 for r in residents if r.gender == "female")),
            ])
        return rows

    def _rows_programs_advisories(self, window: DateWindow) -> list[list]:
        advisories = sorted(self._state.advisories.values(),
                            key=lambda a: (a.published_at, a.advisory_id))
        return [[iso_ts(a.published_at), a.title, a.body]
                for a in advisories if window.contains(a.published_at.date())]

    def publish_advisory(self, title: str, body: str, officer: str,
                         officer_role: str) -> str:
        if officer_role not in ("secretary", "lgu"):
            raise Forbidden("only the secretary or an LGU account may publish advisories",
                            role=officer_role)
        if not (body or "").strip():
            raise EmptyBody("advisory body is empty")
        if not (title or "").strip():
            raise EmptyBody("advisory title is empty")
        published_at = self.store.now()
        event = self.store.commit_with("advisory_published", lambda state: {
            "advisory_id": f"ADV-{state.advisory_seq + 1:06d}",
            "title": title.strip(),
            "body": body.strip(),
            "published_at": iso_ts(published_at),
            "published_by": officer,
        })
        return event.payload["advisory_id"]

    def list_advisories(self) -> list[Advisory]:
        return sorted(self._state.advisories.values(),
                      key=lambda a: (a.published_at, a.advisory_id), reverse=True)


def privacy_scan(csv_bytes: bytes, state: "State") -> list[dict]:
    """Report any export cell disclosing a resident's full name, mobile
    number, exact address, resident id, or a blotter case number."""
    try:
        text = csv_bytes.decode("utf-8")
        rows = list(csv.reader(io.StringIO(text)))
    except (UnicodeDecodeError, csv.Error) as exc:
        raise MalformedCsv(f"cannot parse CSV: {exc}")

    sensitive: list[tuple[str, str]] = []  # (kind, needle), matched case-insensitively
    for r in state.residents.values():
        first, last = r.first_name.strip(), r.last_name.strip()
        full = f"{r.first_name} {r.middle_name} {r.last_name}".replace("  ", " ").strip()
        sensitive.append(("full_name", f"{first} {last}"))
        sensitive.append(("full_name", full))
        sensitive.append(("full_name", f"{last}, {first}"))
        if r.mobile_number:
            sensitive.append(("mobile_number", r.mobile_number))
        if r.address.strip():
            sensitive.append(("address", r.address.strip()))
        sensitive.append(("resident_id", r.resident_id))
    for case_number in state.cases:
        sensitive.append(("case_number", case_number))

    violations = []
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            cell_lower = cell.lower()
            for kind, needle in sensitive:
                if needle and needle.lower() in cell_lower:
                    violations.append({"row": i, "col": j, "kind": kind,
                                       "needle": needle})
    return violations
