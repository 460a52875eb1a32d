"""Blotter case lifecycle and clearance issuance gated on open cases.

Incident report numbers are random 6-digit values (the logbook numbering is
non-sequential), drawn with collision retry. A clearance for a resident who
is respondent in any open case is denied unless a secretary overrides.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .common import iso_date, iso_ts, parse_date, parse_timestamp
from .errors import (IllegalTransition, InvalidField, NotFound, NotIssued,
                     OverrideForbidden)
from .geo import validate_point

if TYPE_CHECKING:
    from .store import Store

CASE_STATUSES = ("open", "settled", "referred", "dismissed")
# open is the only non-terminal status
LEGAL_TRANSITIONS = {"open": {"settled", "referred", "dismissed"}}

CERTIFICATE_KINDS = ("clearance", "certification")

YES_NO_FACTORS = (
    "employment", "alcohol_problems", "family_problems", "status",
    "drug_problems", "gambling", "drug_addiction", "mental_health_problems",
    "financial_problems", "school_problem",
)

BLOTTER_CSV_HEADER = [
    "case_number", "date_filed", "complainant_ids", "respondent_ids",
    "offense_type", "status", "lat", "lon", "zone_id",
]


@dataclass(frozen=True)
class OffenderFactorVector:
    employment: str = "unknown"
    alcohol_problems: str = "unknown"
    family_problems: str = "unknown"
    status: str = "unknown"
    drug_problems: str = "unknown"
    gambling: str = "unknown"
    drug_addiction: str = "unknown"
    mental_health_problems: str = "unknown"
    financial_problems: str = "unknown"
    school_problem: str = "unknown"
    age: int = 0
    gender: str = "male"
    residency_status: str = "non_migrant"

    def __post_init__(self):
        for name in YES_NO_FACTORS:
            value = getattr(self, name)
            if value not in ("yes", "no", "unknown"):
                raise InvalidField(f"factor {name} must be yes/no/unknown, got {value!r}",
                                   field=name)
        if not 0 <= self.age <= 130:
            raise InvalidField(f"age {self.age} outside [0, 130]", field="age")

    def to_payload(self) -> dict:
        return {name: getattr(self, name)
                for name in YES_NO_FACTORS + ("age", "gender", "residency_status")}

    @classmethod
    def from_payload(cls, p: Mapping) -> "OffenderFactorVector":
        kwargs = {name: p.get(name, "unknown") for name in YES_NO_FACTORS}
        return cls(age=int(p.get("age", 0)), gender=p.get("gender", "male"),
                   residency_status=p.get("residency_status", "non_migrant"), **kwargs)


@dataclass(frozen=True)
class BlotterCase:
    case_number: str
    date_filed: date
    complainant_ids: tuple[str, ...]
    respondent_ids: tuple[str, ...]
    offense_type: str
    narrative: str
    lat: float
    lon: float
    zone_id: int
    status: str
    offender_factors: Mapping[str, OffenderFactorVector]  # respondent_id -> factors
    audit: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        return {
            "case_number": self.case_number,
            "date_filed": iso_date(self.date_filed),
            "complainant_ids": list(self.complainant_ids),
            "respondent_ids": list(self.respondent_ids),
            "offense_type": self.offense_type,
            "narrative": self.narrative,
            "lat": self.lat,
            "lon": self.lon,
            "zone_id": self.zone_id,
            "status": self.status,
            "offender_factors": {rid: v.to_payload()
                                 for rid, v in self.offender_factors.items()},
            "audit": list(self.audit),
        }

    @classmethod
    def from_payload(cls, p: dict) -> "BlotterCase":
        return cls(
            case_number=p["case_number"],
            date_filed=parse_date(p["date_filed"], "date_filed"),
            complainant_ids=tuple(p["complainant_ids"]),
            respondent_ids=tuple(p["respondent_ids"]),
            offense_type=p["offense_type"],
            narrative=p.get("narrative", ""),
            lat=float(p["lat"]),
            lon=float(p["lon"]),
            zone_id=int(p["zone_id"]),
            status=p["status"],
            offender_factors={rid: OffenderFactorVector.from_payload(v)
                              for rid, v in p.get("offender_factors", {}).items()},
            audit=tuple(p.get("audit", ())),
        )


@dataclass(frozen=True)
class Certificate:
    certificate_id: str
    resident_id: str
    kind: str
    purpose: str
    issued_at: datetime
    outcome: str  # issued | denied
    denial_reason: str | None = None
    override_by: str | None = None

    def __post_init__(self):
        if self.outcome == "denied" and not self.denial_reason:
            raise InvalidField("denied certificate needs a denial_reason",
                               field="denial_reason")
        if self.outcome == "issued" and self.denial_reason:
            raise InvalidField("issued certificate must not carry a denial_reason",
                               field="denial_reason")

    def to_payload(self) -> dict:
        return {
            "certificate_id": self.certificate_id,
            "resident_id": self.resident_id,
            "kind": self.kind,
            "purpose": self.purpose,
            "issued_at": iso_ts(self.issued_at),
            "outcome": self.outcome,
            "denial_reason": self.denial_reason,
            "override_by": self.override_by,
        }

    @classmethod
    def from_payload(cls, p: dict) -> "Certificate":
        return cls(
            certificate_id=p["certificate_id"],
            resident_id=p["resident_id"],
            kind=p["kind"],
            purpose=p["purpose"],
            issued_at=parse_timestamp(p["issued_at"], "issued_at"),
            outcome=p["outcome"],
            denial_reason=p.get("denial_reason"),
            override_by=p.get("override_by"),
        )


class CaseworkService:
    def __init__(self, store: "Store"):
        self.store = store

    @property
    def _state(self):
        return self.store.state

    def _require_residents(self, ids: Sequence[str]) -> None:
        for rid in ids:
            if rid not in self._state.residents:
                raise NotFound(f"resident {rid} not found", resident_id=rid)

    def file_blotter(self, complainant_ids: Sequence[str],
                     respondent_ids: Sequence[str], offense_type: str,
                     narrative: str, lat: float, lon: float,
                     date_filed, zone_id: int | None = None,
                     factors: Mapping[str, Mapping] | None = None,
                     case_number: str | None = None) -> str:
        if not complainant_ids:
            raise InvalidField("at least one complainant required",
                               field="complainant_ids")
        if not respondent_ids:
            raise InvalidField("at least one respondent required",
                               field="respondent_ids")
        self._require_residents(list(complainant_ids) + list(respondent_ids))
        lat, lon = validate_point(lat, lon)
        filed = parse_date(date_filed, "date_filed")
        offense = (offense_type or "").strip().lower()
        if not offense:
            raise InvalidField("offense_type must be non-empty", field="offense_type")
        if zone_id is None:
            zone_id = self.store.zone_map.assign_zone(lat, lon)

        vectors = {}
        overrides = factors or {}
        for rid in respondent_ids:
            resident = self._state.residents[rid]
            given = dict(overrides.get(rid, {}))
            age = given.pop("age", None)
            if age is None:
                born = resident.birthdate
                age = filed.year - born.year - ((filed.month, filed.day) < (born.month, born.day))
            given.setdefault("gender", resident.gender)
            given.setdefault("residency_status", resident.residency_status)
            vectors[rid] = OffenderFactorVector.from_payload(dict(given, age=age))

        if case_number is None:
            while True:
                case_number = f"{self.store.rng.randrange(100000, 1000000):06d}"
                if case_number not in self._state.cases:
                    break
        else:
            if not (case_number.isdigit() and len(case_number) == 6):
                raise InvalidField(f"case_number must be 6 digits, got {case_number!r}",
                                   field="case_number")
            if case_number in self._state.cases:
                raise InvalidField(f"duplicate case_number {case_number}",
                                   field="case_number")
        case = BlotterCase(
            case_number=case_number, date_filed=filed,
            complainant_ids=tuple(complainant_ids),
            respondent_ids=tuple(respondent_ids),
            offense_type=offense, narrative=narrative or "",
            lat=lat, lon=lon, zone_id=int(zone_id), status="open",
            offender_factors=vectors,
        )
        payload = case.to_payload()
        payload["filed_at"] = iso_ts(self.store.now())
        self.store.commit("blotter_filed", payload)
        return case_number

    def get_case(self, case_number: str) -> BlotterCase:
        case = self._state.cases.get(case_number)
        if case is None:
            raise NotFound(f"case {case_number} not found", case_number=case_number)
        return case

    def list_cases(self, status: str | None = None) -> list[BlotterCase]:
        cases = sorted(self._state.cases.values(), key=lambda c: (c.date_filed, c.case_number))
        if status:
            cases = [c for c in cases if c.status == status]
        return cases

    def update_case_status(self, case_number: str, new_status: str, officer: str) -> None:
        case = self.get_case(case_number)
        if new_status not in CASE_STATUSES:
            raise InvalidField(f"unknown status {new_status!r}", field="status")
        if new_status not in LEGAL_TRANSITIONS.get(case.status, ()):
            raise IllegalTransition(
                f"cannot move case {case_number} from {case.status} to {new_status}",
                from_status=case.status, to_status=new_status)
        self.store.commit("case_status_updated", {
            "case_number": case_number,
            "new_status": new_status,
            "officer": officer,
            "at": iso_ts(self.store.now()),
        })

    def open_cases_for(self, resident_id: str) -> list[str]:
        return sorted(c.case_number for c in self._state.cases.values()
                      if c.status == "open" and resident_id in c.respondent_ids)

    def issue_clearance(self, resident_id: str, kind: str, purpose: str,
                        officer: str, officer_role: str,
                        override: bool = False) -> Certificate:
        if resident_id not in self._state.residents:
            raise NotFound(f"resident {resident_id} not found", resident_id=resident_id)
        if kind not in CERTIFICATE_KINDS:
            raise InvalidField(f"kind must be one of {CERTIFICATE_KINDS}", field="kind")
        if override and officer_role != "secretary":
            raise OverrideForbidden("only the secretary may override the clearance gate",
                                    officer=officer, role=officer_role)

        def build(state):
            blocking = sorted(c.case_number for c in state.cases.values()
                              if c.status == "open" and resident_id in c.respondent_ids)
            cert_id = f"CERT-{state.certificate_seq + 1:06d}"
            if blocking and not override:
                outcome, reason, override_by = "denied", \
                    "open blotter case(s): " + ", ".join(blocking), None
            else:
                outcome, reason = "issued", None
                override_by = officer if (blocking and override) else None
            return Certificate(
                certificate_id=cert_id, resident_id=resident_id, kind=kind,
                purpose=purpose, issued_at=self.store.now(), outcome=outcome,
                denial_reason=reason, override_by=override_by,
            ).to_payload()

        # gate check + certificate write are one atomic commit
        event = self.store.commit_with("certificate_recorded", build)
        return Certificate.from_payload(event.payload)

    def clearance_history(self, resident_id: str) -> list[Certificate]:
        if resident_id not in self._state.residents:
            raise NotFound(f"resident {resident_id} not found", resident_id=resident_id)
        certs = [c for c in self._state.certificates.values()
                 if c.resident_id == resident_id]
        certs.sort(key=lambda c: (c.issued_at, c.certificate_id))
        return certs

    def get_certificate(self, certificate_id: str) -> Certificate:
        cert = self._state.certificates.get(certificate_id)
        if cert is None:
            raise NotFound(f"certificate {certificate_id} not found",
                           certificate_id=certificate_id)
        return cert

    def render_certificate(self, certificate_id: str) -> str:
        cert = self.get_certificate(certificate_id)
        if cert.outcome != "issued":
            raise NotIssued(f"certificate {certificate_id} was denied, nothing to print",
                            certificate_id=certificate_id)
        resident = self._state.residents[cert.resident_id]
        barangay = self.store.barangay_name
        lines = [
            "Republic of the Philippines",
            barangay.upper(),
            "",
            f"BARANGAY {cert.kind.upper()}",
            "",
            f"Certificate No. {cert.certificate_id}",
            "",
            f"This is to certify that {resident.full_name},",
            f"a resident of {barangay}, zone {resident.zone_id},",
            f"has no pending blotter case on record as of {cert.issued_at.date().isoformat()}.",
            "",
            f"Issued on {cert.issued_at.date().isoformat()}",
            f"for the purpose of: {cert.purpose}",
        ]
        if cert.override_by:
            lines.append(f"Issued on authority of: {cert.override_by}")
        return "\n".join(lines) + "\n"

    # CSV interchange

    def export_csv(self) -> bytes:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(BLOTTER_CSV_HEADER)
        for c in self.list_cases():
            writer.writerow([
                c.case_number, iso_date(c.date_filed),
                ";".join(c.complainant_ids), ";".join(c.respondent_ids),
                c.offense_type, c.status, repr(c.lat), repr(c.lon), c.zone_id,
            ])
        return out.getvalue().encode("utf-8")

    def import_csv(self, data: bytes) -> list[str]:
        reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
        if reader.fieldnames != BLOTTER_CSV_HEADER:
            raise InvalidField(
                f"blotter CSV header must be {','.join(BLOTTER_CSV_HEADER)}",
                field="header")
        loaded = []
        for row in reader:
            complainants = [x for x in row["complainant_ids"].split(";") if x]
            respondents = [x for x in row["respondent_ids"].split(";") if x]
            self._require_residents(complainants + respondents)
            lat, lon = validate_point(row["lat"], row["lon"])
            status = row["status"]
            if status not in CASE_STATUSES:
                raise InvalidField(f"unknown status {status!r}", field="status")
            case_number = row["case_number"]
            if not (case_number.isdigit() and len(case_number) == 6):
                raise InvalidField(f"case_number must be 6 digits, got {case_number!r}",
                                   field="case_number")
            if case_number in self._state.cases:
                raise InvalidField(f"duplicate case_number {case_number}",
                                   field="case_number")
            case = BlotterCase(
                case_number=case_number,
                date_filed=parse_date(row["date_filed"], "date_filed"),
                complainant_ids=tuple(complainants),
                respondent_ids=tuple(respondents),
                offense_type=row["offense_type"].strip().lower(),
                narrative="", lat=lat, lon=lon, zone_id=int(row["zone_id"]),
                status=status, offender_factors={},
            )
            payload = case.to_payload()
            payload["filed_at"] = iso_ts(self.store.now())
            self.store.commit("blotter_filed", payload)
            loaded.append(case_number)
        return loaded


def verify_clearance_gate(events: Iterable) -> list[dict]:
    """Replay the event log and report any issued-without-override certificate
    for a resident who had an open case at issuance time."""
    open_respondents: dict[str, set[str]] = {}  # case_number -> respondent ids
    violations = []
    for event in events:
        if event.kind == "blotter_filed":
            p = event.payload
            if p["status"] == "open":
                open_respondents[p["case_number"]] = set(p["respondent_ids"])
        elif event.kind == "case_status_updated":
            if event.payload["new_status"] != "open":
                open_respondents.pop(event.payload["case_number"], None)
        elif event.kind == "certificate_recorded":
            p = event.payload
            if p["outcome"] != "issued" or p.get("override_by"):
                continue
            blocking = sorted(num for num, resp in open_respondents.items()
                              if p["resident_id"] in resp)
            if blocking:
                violations.append({
                    "certificate_id": p["certificate_id"],
                    "resident_id": p["resident_id"],
                    "open_cases": blocking,
                })
    return violations
