"""SMS advisory broadcast: audience resolution, GSM-7 segmentation, and a
pluggable gateway with retry + idempotent re-dispatch.

Recipient status is committed durably after every gateway result, so a crashed
dispatch can be re-run; the provider sees the same idempotency key and the
message is delivered at most once per recipient.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace
from datetime import datetime
from typing import TYPE_CHECKING, Callable, Mapping, Protocol, Sequence

from .common import iso_ts, parse_timestamp
from .errors import (EmptyMessage, GatewayUnconfigured, InvalidField, NotFound,
                     UnsupportedCharset)

if TYPE_CHECKING:
    from .store import Store

SINGLE_SEGMENT_LIMIT = 160
MULTI_SEGMENT_LIMIT = 153  # concatenation headers reserve 7 septets
RETRY_LIMIT = 3
BACKOFF_SECONDS = (1.0, 2.0, 4.0)

GSM7_BASIC = (
    "@£$¥èéùìòÇ\nØø\rÅåΔ_ΦΓΛΩΠΨΣΘΞÆæßÉ !\"#¤%&'()*+,-./0123456789:;<=>?"
    "¡ABCDEFGHIJKLMNOPQRSTUVWXYZÄÖÑܧ¿abcdefghijklmnopqrstuvwxyzäöñüà"
)
GSM7_EXTENSION = "\f^{}\\[~]|€"
GSM7_CHARS = frozenset(GSM7_BASIC) | frozenset(GSM7_EXTENSION)


def segment_message(text: str) -> list[str]:
    """Split a GSM-7 message into SMS segments (160 single / 153 multipart)."""
    if not text:
        raise EmptyMessage("message is empty")
    bad = sorted({ch for ch in text if ch not in GSM7_CHARS})
    if bad:
        raise UnsupportedCharset(
            f"message contains non-GSM-7 characters: {bad!r}", characters=bad)
    if len(text) <= SINGLE_SEGMENT_LIMIT:
        return [text]
    return [text[i:i + MULTI_SEGMENT_LIMIT]
            for i in range(0, len(text), MULTI_SEGMENT_LIMIT)]


@dataclass(frozen=True)
class GatewayResult:
    outcome: str  # accepted | rejected | transient_error
    provider_ref: str | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.outcome in ("rejected", "transient_error") and not self.reason:
            raise InvalidField(f"{self.outcome} result needs a reason", field="reason")


class SmsGateway(Protocol):
    def send(self, phone: str, text: str, idempotency_key: str) -> GatewayResult: ...


@dataclass(frozen=True)
class Recipient:
    resident_id: str
    phone: str
    status: str  # pending | sent | failed
    attempts: int
    idempotency_key: str

    def to_payload(self) -> dict:
        return {"resident_id": self.resident_id, "phone": self.phone,
                "status": self.status, "attempts": self.attempts,
                "idempotency_key": self.idempotency_key}

    @classmethod
    def from_payload(cls, p: dict) -> "Recipient":
        return cls(p["resident_id"], p["phone"], p["status"], int(p["attempts"]),
                   p["idempotency_key"])


@dataclass(frozen=True)
class BroadcastJob:
    job_id: str
    message: str
    audience_filter: Mapping
    created_by: str
    created_at: datetime
    recipients: tuple[Recipient, ...]

    def to_payload(self) -> dict:
        return {
            "job_id": self.job_id,
            "message": self.message,
            "audience_filter": dict(self.audience_filter),
            "created_by": self.created_by,
            "created_at": iso_ts(self.created_at),
            "recipients": [r.to_payload() for r in self.recipients],
        }

    @classmethod
    def from_payload(cls, p: dict) -> "BroadcastJob":
        return cls(p["job_id"], p["message"], p["audience_filter"], p["created_by"],
                   parse_timestamp(p["created_at"], "created_at"),
                   tuple(Recipient.from_payload(r) for r in p["recipients"]))


class MockSmsGateway:
    """In-process scriptable gateway. The provider-side ledger deduplicates by
    idempotency key, so repeated sends after a crash deliver at most once."""

    def __init__(self, script: Callable[[int, str, str, str], str] | Sequence[str] | None = None):
        self._script = script
        self.calls: list[dict] = []
        self.delivered: dict[str, tuple[str, str]] = {}  # key -> (phone, text)

    def _outcome(self, n: int, phone: str, text: str, key: str) -> str:
        if self._script is None:
            return "accepted"
        if callable(self._script):
            return self._script(n, phone, text, key)
        return self._script[n] if n < len(self._script) else "accepted"

    def send(self, phone: str, text: str, idempotency_key: str) -> GatewayResult:
        n = len(self.calls)
        self.calls.append({"phone": phone, "text": text, "key": idempotency_key})
        outcome = self._outcome(n, phone, text, idempotency_key)
        if outcome in ("accepted", "accepted_crash"):
            if idempotency_key not in self.delivered:
                self.delivered[idempotency_key] = (phone, text)
            if outcome == "accepted_crash":
                from .store import SimulatedCrash
                raise SimulatedCrash("crash after provider accept")
            return GatewayResult("accepted", provider_ref=f"mock-{n}")
        if outcome == "rejected":
            return GatewayResult("rejected", reason="invalid number")
        return GatewayResult("transient_error", reason="scripted transient failure")


class HttpSmsGateway:
    """HTTP client for the provider wire contract: form-encoded POST with
    fields 1=phone, 2=message, 3=api key, optional passwd; the response body
    is an integer code (0 accepted, 1/2 rejected, anything else transient)."""

    def __init__(self, base_url: str, api_key: str, passwd: str | None = None,
                 timeout: float = 10.0):
        self.base_url = base_url
        self.api_key = api_key
        self.passwd = passwd
        self.timeout = timeout

    def send(self, phone: str, text: str, idempotency_key: str) -> GatewayResult:
        import httpx

        data = {"1": phone, "2": text, "3": self.api_key}
        if self.passwd:
            data["passwd"] = self.passwd
        try:
            response = httpx.post(self.base_url, data=data, timeout=self.timeout,
                                  headers={"Idempotency-Key": idempotency_key})
            code = int(response.text.strip())
        except (httpx.HTTPError, ValueError) as exc:
            return GatewayResult("transient_error", reason=str(exc) or "network failure")
        if code == 0:
            return GatewayResult("accepted", provider_ref=response.text.strip())
        if code in (1, 2):
            reason = "invalid number" if code == 1 else "bad credentials"
            return GatewayResult("rejected", reason=reason)
        return GatewayResult("transient_error", reason=f"provider code {code}")


class NotifyService:
    def __init__(self, store: "Store", gateway: SmsGateway | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        self.store = store
        self.gateway = gateway
        self.sleep = sleep

    @property
    def _state(self):
        return self.store.state

    def resolve_audience(self, audience_filter: Mapping) -> list[tuple[str, str]]:
        """(resident_id, phone) pairs matching the filter; residents without a
        mobile number are skipped and duplicate phones collapse to the lowest
        resident id."""
        kind = audience_filter.get("kind")
        residents = sorted(self._state.residents.values(), key=lambda r: r.resident_id)
        if kind == "all":
            matched = residents
        elif kind == "zone":
            try:
                zone_id = int(audience_filter.get("zone_id"))
            except (TypeError, ValueError):
                raise InvalidField("zone filter needs an integer zone_id", field="zone_id")
            matched = [r for r in residents if r.zone_id == zone_id]
        elif kind == "residents":
            wanted = set(audience_filter.get("resident_ids") or ())
            matched = [r for r in residents if r.resident_id in wanted]
        else:
            raise InvalidField("audience kind must be all, zone, or residents",
                               field="kind")
        seen_phones: set[str] = set()
        out = []
        for r in matched:
            if not r.mobile_number or r.mobile_number in seen_phones:
                continue
            seen_phones.add(r.mobile_number)
            out.append((r.resident_id, r.mobile_number))
        return out

    def create_broadcast(self, message: str, audience_filter: Mapping,
                         created_by: str) -> BroadcastJob:
        segment_message(message)  # validates charset and non-emptiness
        recipients = self.resolve_audience(audience_filter)
        created_at = self.store.now()

        def build(state):
            job_id = f"JOB-{state.job_seq + 1:06d}"
            return {
                "job_id": job_id,
                "message": message,
                "audience_filter": dict(audience_filter),
                "created_by": created_by,
                "created_at": iso_ts(created_at),
                "recipients": [
                    {"resident_id": rid, "phone": phone, "status": "pending",
                     "attempts": 0, "idempotency_key": f"{job_id}:{phone}"}
                    for rid, phone in recipients
                ],
            }

        event = self.store.commit_with("broadcast_created", build)
        return BroadcastJob.from_payload(event.payload)

    def get_job(self, job_id: str) -> BroadcastJob:
        job = self._state.broadcasts.get(job_id)
        if job is None:
            raise NotFound(f"broadcast {job_id} not found", job_id=job_id)
        return job

    def list_jobs(self) -> list[BroadcastJob]:
        return sorted(self._state.broadcasts.values(), key=lambda j: j.job_id)

    def _commit_recipient(self, job_id: str, recipient: Recipient) -> None:
        self.store.commit("recipient_updated", {
            "job_id": job_id,
            "phone": recipient.phone,
            "status": recipient.status,
            "attempts": recipient.attempts,
            "at": iso_ts(self.store.now()),
        })

    def dispatch(self, job_id: str) -> BroadcastJob:
        """Send to every pending recipient; safe to re-run after a crash."""
        if self.gateway is None:
            raise GatewayUnconfigured("no SMS gateway configured")
        job = self.get_job(job_id)
        segments = segment_message(job.message)
        for recipient in job.recipients:
            current = self._current_recipient(job_id, recipient.phone)
            while current.status == "pending":
                attempt = current.attempts + 1
                result = self._send_segments(current, segments)
                if result.outcome == "accepted":
                    current = replace(current, status="sent", attempts=attempt)
                elif result.outcome == "rejected" or attempt >= RETRY_LIMIT:
                    current = replace(current, status="failed", attempts=attempt)
                else:
                    current = replace(current, attempts=attempt)
                self._commit_recipient(job_id, current)
                if current.status == "pending":
                    self.sleep(BACKOFF_SECONDS[min(attempt - 1, len(BACKOFF_SECONDS) - 1)])
        return self.get_job(job_id)

    def _current_recipient(self, job_id: str, phone: str) -> Recipient:
        job = self._state.broadcasts[job_id]
        for r in job.recipients:
            if r.phone == phone:
                return r
        raise NotFound(f"recipient {phone} not in job {job_id}", phone=phone)

    def _send_segments(self, recipient: Recipient, segments: list[str]) -> GatewayResult:
        # one provider call per segment; a non-accepted segment decides the attempt
        result = GatewayResult("accepted")
        for i, segment in enumerate(segments, start=1):
            result = self.gateway.send(recipient.phone, segment,
                                       f"{recipient.idempotency_key}/{i}")
            if result.outcome != "accepted":
                return result
        return result
