"""Durable single-node store: an fsync'd append-only event log plus the
in-memory state rebuilt from it.

Every mutating operation commits exactly one event; the event is on disk
before the caller gets an acknowledgement, so replaying the log after a crash
reproduces every acknowledged write. Reducers are deterministic, which makes
"reopen and replay" the ground truth the test suite compares against. A torn
final line (crash mid-write) is discarded on open: it was never acknowledged.
"""
from __future__ import annotations

import json
import os
import random
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Callable

from .casework import BlotterCase, Certificate
from .common import parse_timestamp, utcnow
from .errors import ConfigInvalid
from .geo import ZoneMap, default_zone_map
from .health import ChildRecord, HealthCase
from .notify import BroadcastJob
from .opendata import Advisory
from .registry import Resident, TransactionEntry


class SimulatedCrash(BaseException):
    """Raised by test hooks to model the process dying at a commit point."""


@dataclass(frozen=True)
class Event:
    seq: int
    kind: str
    at: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps({"seq": self.seq, "kind": self.kind, "at": self.at,
                           "payload": self.payload},
                          sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_doc(cls, doc: dict) -> "Event":
        return cls(seq=doc["seq"], kind=doc["kind"], at=doc["at"],
                   payload=doc["payload"])


class State:
    """In-memory projection of the event log."""

    def __init__(self):
        self.residents: dict[str, Resident] = {}
        self.transactions: dict[str, list[TransactionEntry]] = {}
        self.resident_seq = 0
        self.cases: dict[str, BlotterCase] = {}
        self.case_order: dict[str, int] = {}
        self.certificates: dict[str, Certificate] = {}
        self.certificate_seq = 0
        self.children: dict[str, ChildRecord] = {}
        self.child_seq = 0
        self.health_cases: dict[str, HealthCase] = {}
        self.health_seq = 0
        self.broadcasts: dict[str, BroadcastJob] = {}
        self.job_seq = 0
        self.advisories: dict[str, Advisory] = {}
        self.advisory_seq = 0
        self.accounts: dict[str, dict] = {}
        self.zone_ids: list[int] = []

    def reference_exists(self, kind: str, reference_id: str) -> bool:
        if kind in ("clearance_issued", "clearance_denied"):
            return reference_id in self.certificates
        if kind in ("blotter_complainant", "blotter_respondent"):
            return reference_id in self.cases
        if kind == "health_case":
            return reference_id in self.health_cases
        if kind == "sms_sent":
            return reference_id in self.broadcasts
        return False

    def _append_transaction(self, resident_id: str, kind: str,
                            reference_id: str, occurred_at: str) -> None:
        entry = TransactionEntry(resident_id, kind, reference_id,
                                 parse_timestamp(occurred_at))
        self.transactions.setdefault(resident_id, []).append(entry)

    def apply(self, event: Event) -> None:
        kind, p = event.kind, event.payload
        if kind == "resident_registered":
            resident = Resident.from_payload(p)
            self.residents[resident.resident_id] = resident
            self.transactions.setdefault(resident.resident_id, [])
            if resident.resident_id.isdigit():
                self.resident_seq = max(self.resident_seq, int(resident.resident_id))
        elif kind == "transaction_appended":
            entry = TransactionEntry.from_payload(p)
            self.transactions.setdefault(entry.resident_id, []).append(entry)
        elif kind == "blotter_filed":
            case = BlotterCase.from_payload(p)
            self.cases[case.case_number] = case
            self.case_order[case.case_number] = len(self.case_order)
            filed_at = p.get("filed_at", event.at)
            for rid in case.complainant_ids:
                self._append_transaction(rid, "blotter_complainant",
                                         case.case_number, filed_at)
            for rid in case.respondent_ids:
                self._append_transaction(rid, "blotter_respondent",
                                         case.case_number, filed_at)
        elif kind == "case_status_updated":
            case = self.cases[p["case_number"]]
            note = f"{p['at']} {p['officer']}: {case.status} -> {p['new_status']}"
            self.cases[p["case_number"]] = replace(
                case, status=p["new_status"], audit=case.audit + (note,))
        elif kind == "certificate_recorded":
            cert = Certificate.from_payload(p)
            self.certificates[cert.certificate_id] = cert
            seq = cert.certificate_id.rsplit("-", 1)[-1]
            if seq.isdigit():
                self.certificate_seq = max(self.certificate_seq, int(seq))
            tx_kind = "clearance_issued" if cert.outcome == "issued" else "clearance_denied"
            self._append_transaction(cert.resident_id, tx_kind,
                                     cert.certificate_id, p["issued_at"])
        elif kind == "child_registered":
            child = ChildRecord.from_payload(p)
            self.children[child.child_id] = child
            seq = child.child_id.rsplit("-", 1)[-1]
            if seq.isdigit():
                self.child_seq = max(self.child_seq, int(seq))
        elif kind == "health_case_recorded":
            hc = HealthCase.from_payload(p)
            self.health_cases[hc.health_case_id] = hc
            seq = hc.health_case_id.rsplit("-", 1)[-1]
            if seq.isdigit():
                self.health_seq = max(self.health_seq, int(seq))
            if hc.subject_kind == "resident":
                self._append_transaction(hc.subject_id, "health_case",
                                         hc.health_case_id, p["recorded_at"])
        elif kind == "broadcast_created":
            job = BroadcastJob.from_payload(p)
            self.broadcasts[job.job_id] = job
            seq = job.job_id.rsplit("-", 1)[-1]
            if seq.isdigit():
                self.job_seq = max(self.job_seq, int(seq))
        elif kind == "recipient_updated":
            job = self.broadcasts[p["job_id"]]
            updated = []
            for r in job.recipients:
                if r.phone == p["phone"]:
                    if p["status"] == "sent" and r.status != "sent":
                        self._append_transaction(r.resident_id, "sms_sent",
                                                 job.job_id, p["at"])
                    r = replace(r, status=p["status"], attempts=int(p["attempts"]))
                updated.append(r)
            self.broadcasts[job.job_id] = replace(job, recipients=tuple(updated))
        elif kind == "advisory_published":
            advisory = Advisory.from_payload(p)
            self.advisories[advisory.advisory_id] = advisory
            seq = advisory.advisory_id.rsplit("-", 1)[-1]
            if seq.isdigit():
                self.advisory_seq = max(self.advisory_seq, int(seq))
        elif kind == "account_created":
            self.accounts[p["username"]] = dict(p)
        else:
            raise ConfigInvalid(f"unknown event kind {kind!r} in log")


def _scan_log(path: Path) -> tuple[list[Event], int]:
    """Parse a log file; returns (events, byte offset after the last good
    line). A torn or corrupt trailing line is excluded: it was never
    acknowledged, so dropping it is safe."""
    events: list[Event] = []
    if not path.exists():
        return events, 0
    raw = path.read_bytes()
    offset = 0
    for line in raw.splitlines(keepends=True):
        if not line.endswith(b"\n"):
            break
        try:
            doc = json.loads(line.decode("utf-8"))
            events.append(Event.from_doc(doc))
        except (ValueError, KeyError):
            if offset + len(line) == len(raw):
                break
            raise ConfigInvalid(f"corrupt event log line at byte {offset}")
        offset += len(line)
    return events, offset


def read_log(path: str | Path) -> list[Event]:
    return _scan_log(Path(path))[0]


class Store:
    """Event log + state + process-wide services (clock, rng, zones).

    All writes serialize through one commit lock; reads see the in-memory
    state directly. ``path=None`` keeps the log purely in memory (tests).
    """

    def __init__(self, path: str | Path | None = None,
                 zone_map: ZoneMap | None = None,
                 clock: Callable[[], datetime] | None = None,
                 rng: random.Random | None = None,
                 barangay_name: str = "Barangay San Roque"):
        self.path = Path(path) if path is not None else None
        self.zone_map = zone_map or default_zone_map()
        self.clock = clock or utcnow
        self.rng = rng or random.Random()
        self.barangay_name = barangay_name
        self.after_commit: Callable[[Event], None] | None = None
        self._lock = threading.Lock()
        self._fh = None
        self.events: list[Event] = []
        self.state = State()
        self.state.zone_ids = self.zone_map.zone_ids
        if self.path is not None:
            existing, good_bytes = _scan_log(self.path)
            for event in existing:
                self.state.apply(event)
            self.events = existing
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self.path, "ab")
            if self._fh.tell() > good_bytes:
                self._fh.truncate(good_bytes)

    def now(self) -> datetime:
        return self.clock()

    def commit(self, kind: str, payload: dict) -> Event:
        with self._lock:
            return self._commit_locked(kind, payload)

    def commit_with(self, kind: str, payload_fn: Callable[[State], dict]) -> Event:
        """Build the payload under the commit lock; used where fresh ids or
        gate checks must be atomic with the write."""
        with self._lock:
            return self._commit_locked(kind, payload_fn(self.state))

    def _commit_locked(self, kind: str, payload: dict) -> Event:
        event = Event(seq=len(self.events) + 1, kind=kind,
                      at=self.now().isoformat(), payload=payload)
        if self._fh is not None:
            self._fh.write(event.to_line().encode("utf-8"))
            self._fh.flush()
            os.fsync(self._fh.fileno())
        self.state.apply(event)
        self.events.append(event)
        if self.after_commit is not None:
            self.after_commit(event)
        return event

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
