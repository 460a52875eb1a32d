"""Community and child health records feeding the map and open data."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime
from typing import TYPE_CHECKING

from .common import DateWindow, iso_date, iso_ts, parse_date, parse_timestamp
from .errors import InvalidField, NotFound
from .geo import validate_point

if TYPE_CHECKING:
    from .store import Store

HEALTH_CSV_HEADER = ["recorded_at", "zone_id", "condition", "age_band", "gender"]


@dataclass(frozen=True)
class ChildRecord:
    child_id: str
    last_name: str
    first_name: str
    middle_name: str
    birthdate: date
    gender: str
    guardian_resident_id: str | None = None

    def to_payload(self) -> dict:
        return {
            "child_id": self.child_id,
            "last_name": self.last_name,
            "first_name": self.first_name,
            "middle_name": self.middle_name,
            "birthdate": iso_date(self.birthdate),
            "gender": self.gender,
            "guardian_resident_id": self.guardian_resident_id,
        }

    @classmethod
    def from_payload(cls, p: dict) -> "ChildRecord":
        return cls(p["child_id"], p["last_name"], p["first_name"],
                   p.get("middle_name", ""), parse_date(p["birthdate"], "birthdate"),
                   p["gender"], p.get("guardian_resident_id"))


@dataclass(frozen=True)
class HealthCase:
    health_case_id: str
    subject_kind: str  # resident | child
    subject_id: str
    condition: str
    notes: str
    lat: float
    lon: float
    zone_id: int
    recorded_at: datetime
    recorded_by: str

    def to_payload(self) -> dict:
        return {
            "health_case_id": self.health_case_id,
            "subject_kind": self.subject_kind,
            "subject_id": self.subject_id,
            "condition": self.condition,
            "notes": self.notes,
            "lat": self.lat,
            "lon": self.lon,
            "zone_id": self.zone_id,
            "recorded_at": iso_ts(self.recorded_at),
            "recorded_by": self.recorded_by,
        }

    @classmethod
    def from_payload(cls, p: dict) -> "HealthCase":
        return cls(p["health_case_id"], p["subject_kind"], p["subject_id"],
                   p["condition"], p.get("notes", ""), float(p["lat"]),
                   float(p["lon"]), int(p["zone_id"]),
                   parse_timestamp(p["recorded_at"], "recorded_at"),
                   p.get("recorded_by", ""))


class HealthService:
    def __init__(self, store: "Store"):
        self.store = store

    @property
    def _state(self):
        return self.store.state

    def register_child(self, record: dict) -> str:
        last = (record.get("last_name") or "").strip()
        first = (record.get("first_name") or "").strip()
        if not last:
            raise InvalidField("last_name must be non-empty", field="last_name")
        birthdate = parse_date(record.get("birthdate"), "birthdate")
        if birthdate > self.store.now().date():
            raise InvalidField("birthdate is in the future", field="birthdate")
        gender = record.get("gender")
        if gender not in ("male", "female"):
            raise InvalidField("gender must be male or female", field="gender")
        guardian = record.get("guardian_resident_id") or None
        if guardian and guardian not in self._state.residents:
            raise NotFound(f"guardian resident {guardian} not found",
                           resident_id=guardian)
        event = self.store.commit_with("child_registered", lambda state: {
            "child_id": f"CH-{state.child_seq + 1:06d}",
            "last_name": last,
            "first_name": first,
            "middle_name": (record.get("middle_name") or "").strip(),
            "birthdate": iso_date(birthdate),
            "gender": gender,
            "guardian_resident_id": guardian,
        })
        return event.payload["child_id"]

    def get_child(self, child_id: str) -> ChildRecord:
        child = self._state.children.get(child_id)
        if child is None:
            raise NotFound(f"child {child_id} not found", child_id=child_id)
        return child

    def list_children(self) -> list[ChildRecord]:
        return sorted(self._state.children.values(), key=lambda c: c.child_id)

    def record_health_case(self, subject_kind: str, subject_id: str,
                           condition: str, notes: str, lat: float, lon: float,
                           zone_id: int | None = None,
                           recorded_by: str = "") -> str:
        if subject_kind == "resident":
            if subject_id not in self._state.residents:
                raise NotFound(f"resident {subject_id} not found",
                               resident_id=subject_id)
        elif subject_kind == "child":
            if subject_id not in self._state.children:
                raise NotFound(f"child {subject_id} not found", child_id=subject_id)
        else:
            raise InvalidField("subject_kind must be resident or child",
                               field="subject_kind")
        condition = (condition or "").strip().lower()
        if not condition:
            raise InvalidField("condition must be non-empty", field="condition")
        lat, lon = validate_point(lat, lon)
        if zone_id is None:
            zone_id = self.store.zone_map.assign_zone(lat, lon)
        recorded_at = self.store.now()
        event = self.store.commit_with("health_case_recorded", lambda state: {
            "health_case_id": f"HC-{state.health_seq + 1:06d}",
            "subject_kind": subject_kind,
            "subject_id": subject_id,
            "condition": condition,
            "notes": notes or "",
            "lat": lat,
            "lon": lon,
            "zone_id": int(zone_id),
            "recorded_at": iso_ts(recorded_at),
            "recorded_by": recorded_by,
        })
        return event.payload["health_case_id"]

    def list_cases(self, window: DateWindow = DateWindow()) -> list[HealthCase]:
        cases = [c for c in self._state.health_cases.values()
                 if window.contains(c.recorded_at.date())]
        cases.sort(key=lambda c: c.health_case_id)
        return cases

    def health_summary(self, window: DateWindow, group_by: str) -> dict:
        if group_by not in ("zone", "condition"):
            raise InvalidField("group_by must be zone or condition", field="group_by")
        counts: Counter = Counter()
        for case in self.list_cases(window):
            key = case.zone_id if group_by == "zone" else case.condition
            counts[key] += 1
        return dict(sorted(counts.items(), key=lambda kv: str(kv[0])))

    def export_csv(self, window: DateWindow = DateWindow()) -> bytes:
        """Row-level export with no identifying fields: the subject appears
        only as an age band and gender."""
        from .analytics.dataset import band_age

        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\r\n")
        writer.writerow(HEALTH_CSV_HEADER)
        for case in self.list_cases(window):
            if case.subject_kind == "resident":
                subject = self._state.residents[case.subject_id]
            else:
                subject = self._state.children[case.subject_id]
            born = subject.birthdate
            at = case.recorded_at.date()
            age = at.year - born.year - ((at.month, at.day) < (born.month, born.day))
            writer.writerow([iso_ts(case.recorded_at), case.zone_id,
                             case.condition, band_age(age), subject.gender])
        return out.getvalue().encode("utf-8")
