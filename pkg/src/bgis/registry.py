"""Resident registry: profiles, stable tracking numbers, transaction history."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime
from typing import TYPE_CHECKING, Iterable

from .common import iso_date, iso_ts, parse_date, parse_timestamp, validate_phone
from .errors import DanglingReference, InvalidField, NotFound, ZoneUnknown

if TYPE_CHECKING:
    from .store import Store

GENDERS = ("male", "female")
RESIDENCY = ("migrant", "non_migrant")

TRANSACTION_KINDS = (
    "clearance_issued",
    "clearance_denied",
    "blotter_complainant",
    "blotter_respondent",
    "health_case",
    "sms_sent",
)

RESIDENT_CSV_HEADER = [
    "resident_id", "last_name", "first_name", "middle_name", "birthdate",
    "gender", "occupation", "residency_status", "zone_id", "address",
    "mobile_number", "registered_at",
]


@dataclass(frozen=True)
class Resident:
    resident_id: str
    last_name: str
    first_name: str
    middle_name: str
    birthdate: date
    gender: str
    occupation: str
    residency_status: str
    zone_id: int
    address: str
    mobile_number: str | None
    registered_at: datetime

    @property
    def full_name(self) -> str:
        return f"{self.first_name} {self.middle_name} {self.last_name}".strip()

    def to_payload(self) -> dict:
        return {
            "resident_id": self.resident_id,
            "last_name": self.last_name,
            "first_name": self.first_name,
            "middle_name": self.middle_name,
            "birthdate": iso_date(self.birthdate),
            "gender": self.gender,
            "occupation": self.occupation,
            "residency_status": self.residency_status,
            "zone_id": self.zone_id,
            "address": self.address,
            "mobile_number": self.mobile_number,
            "registered_at": iso_ts(self.registered_at),
        }

    @classmethod
    def from_payload(cls, p: dict) -> "Resident":
        return cls(
            resident_id=p["resident_id"],
            last_name=p["last_name"],
            first_name=p["first_name"],
            middle_name=p["middle_name"],
            birthdate=parse_date(p["birthdate"], "birthdate"),
            gender=p["gender"],
            occupation=p["occupation"],
            residency_status=p["residency_status"],
            zone_id=int(p["zone_id"]),
            address=p["address"],
            mobile_number=p.get("mobile_number") or None,
            registered_at=parse_timestamp(p["registered_at"], "registered_at"),
        )


@dataclass(frozen=True)
class TransactionEntry:
    resident_id: str
    kind: str
    reference_id: str
    occurred_at: datetime

    def to_payload(self) -> dict:
        return {
            "resident_id": self.resident_id,
            "kind": self.kind,
            "reference_id": self.reference_id,
            "occurred_at": iso_ts(self.occurred_at),
        }

    @classmethod
    def from_payload(cls, p: dict) -> "TransactionEntry":
        return cls(p["resident_id"], p["kind"], p["reference_id"],
                   parse_timestamp(p["occurred_at"], "occurred_at"))


@dataclass(frozen=True)
class RegistrationResult:
    resident_id: str
    duplicate_warning: bool


def _require_text(value, field_name: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise InvalidField(f"{field_name} must be non-empty text", field=field_name)
    return value.strip()


def validate_profile(profile: dict, zone_ids: Iterable[int], today: date) -> dict:
    """Validate a resident profile (no id / registered_at yet); returns clean fields."""
    clean = {
        "last_name": _require_text(profile.get("last_name"), "last_name"),
        "first_name": _require_text(profile.get("first_name"), "first_name"),
        "middle_name": str(profile.get("middle_name") or "").strip(),
        "occupation": str(profile.get("occupation") or "").strip(),
        "address": str(profile.get("address") or "").strip(),
    }
    birthdate = parse_date(profile.get("birthdate"), "birthdate")
    if birthdate > today:
        raise InvalidField("birthdate is in the future", field="birthdate")
    clean["birthdate"] = birthdate

    gender = profile.get("gender")
    if gender not in GENDERS:
        raise InvalidField(f"gender must be one of {GENDERS}", field="gender")
    clean["gender"] = gender

    residency = profile.get("residency_status")
    if residency not in RESIDENCY:
        raise InvalidField(f"residency_status must be one of {RESIDENCY}",
                           field="residency_status")
    clean["residency_status"] = residency

    try:
        zone_id = int(profile.get("zone_id"))
    except (TypeError, ValueError):
        raise InvalidField("zone_id must be an integer", field="zone_id")
    if zone_id not in set(zone_ids):
        raise ZoneUnknown(f"zone {zone_id} is not configured", zone_id=zone_id)
    clean["zone_id"] = zone_id

    mobile = profile.get("mobile_number")
    clean["mobile_number"] = validate_phone(mobile) if mobile else None
    return clean


def _sort_key(r: Resident) -> tuple:
    return (r.last_name.lower(), r.first_name.lower(), r.middle_name.lower(),
            r.resident_id)


class RegistryService:
    def __init__(self, store: "Store"):
        self.store = store

    @property
    def _state(self):
        return self.store.state

    def register_resident(self, profile: dict) -> RegistrationResult:
        clean = validate_profile(profile, self._state.zone_ids,
                                 self.store.now().date())
        duplicate = any(
            r.last_name.lower() == clean["last_name"].lower()
            and r.first_name.lower() == clean["first_name"].lower()
            and r.middle_name.lower() == clean["middle_name"].lower()
            and r.birthdate == clean["birthdate"]
            for r in self._state.residents.values()
        )
        payload = dict(clean,
                       birthdate=iso_date(clean["birthdate"]),
                       registered_at=iso_ts(self.store.now()))
        event = self.store.commit_with(
            "resident_registered",
            lambda state: dict(payload,
                               resident_id=f"{state.resident_seq + 1:06d}"),
        )
        return RegistrationResult(event.payload["resident_id"], duplicate)

    def get_resident(self, resident_id: str) -> Resident:
        resident = self._state.residents.get(resident_id)
        if resident is None:
            raise NotFound(f"resident {resident_id} not found",
                           resident_id=resident_id)
        return resident

    def get_profile(self, resident_id: str) -> tuple[Resident, list[TransactionEntry]]:
        resident = self.get_resident(resident_id)
        history = list(self._state.transactions.get(resident_id, ()))
        return resident, history

    def find_residents(self, query: str = "", offset: int = 0,
                       limit: int | None = None) -> list[Resident]:
        fragment = (query or "").strip().lower()
        matches = [
            r for r in self._state.residents.values()
            if not fragment
            or fragment in r.last_name.lower()
            or fragment in r.first_name.lower()
            or fragment in r.middle_name.lower()
        ]
        matches.sort(key=_sort_key)
        if limit is None:
            return matches[offset:]
        return matches[offset:offset + limit]

    def append_transaction(self, entry: TransactionEntry) -> None:
        if entry.resident_id not in self._state.residents:
            raise NotFound(f"resident {entry.resident_id} not found",
                           resident_id=entry.resident_id)
        if entry.kind not in TRANSACTION_KINDS:
            raise InvalidField(f"unknown transaction kind {entry.kind!r}", field="kind")
        if not self._state.reference_exists(entry.kind, entry.reference_id):
            raise DanglingReference(
                f"no {entry.kind} record with id {entry.reference_id!r}",
                reference_id=entry.reference_id)
        self.store.commit("transaction_appended", entry.to_payload())

    # CSV bulk interchange (RFC 4180, UTF-8, fixed header)

    def export_csv(self) -> bytes:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(RESIDENT_CSV_HEADER)
        for r in sorted(self._state.residents.values(), key=lambda r: r.resident_id):
            writer.writerow([
                r.resident_id, r.last_name, r.first_name, r.middle_name,
                iso_date(r.birthdate), r.gender, r.occupation, r.residency_status,
                r.zone_id, r.address, r.mobile_number or "", iso_ts(r.registered_at),
            ])
        return out.getvalue().encode("utf-8")

    def import_csv(self, data: bytes) -> list[str]:
        """Bulk load residents, preserving ids from the file. Returns loaded ids."""
        reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
        if reader.fieldnames != RESIDENT_CSV_HEADER:
            raise InvalidField(
                f"resident CSV header must be {','.join(RESIDENT_CSV_HEADER)}",
                field="header")
        loaded = []
        for row in reader:
            clean = validate_profile(row, self._state.zone_ids,
                                     self.store.now().date())
            resident_id = _require_text(row.get("resident_id"), "resident_id")
            if resident_id in self._state.residents:
                raise InvalidField(f"duplicate resident_id {resident_id}",
                                   field="resident_id")
            registered_at = parse_timestamp(row["registered_at"], "registered_at")
            payload = dict(clean,
                           birthdate=iso_date(clean["birthdate"]),
                           resident_id=resident_id,
                           registered_at=iso_ts(registered_at))
            self.store.commit("resident_registered", payload)
            loaded.append(resident_id)
        return loaded
