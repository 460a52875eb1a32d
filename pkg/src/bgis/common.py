"""Shared parsing helpers and small value types."""
from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timezone

from .errors import InvalidField

E164_RE = re.compile(r"^\+[1-9]\d{1,14}$")


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def parse_date(value, field: str = "date") -> date:
    """Parse an ISO-8601 calendar date; rejects anything unparseable."""
    if isinstance(value, date) and not isinstance(value, datetime):
        return value
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, str):
        try:
            return date.fromisoformat(value.strip())
        except ValueError:
            pass
    raise InvalidField(f"{field} is not a valid calendar date: {value!r}", field=field)


def parse_timestamp(value, field: str = "timestamp") -> datetime:
    if isinstance(value, datetime):
        return value if value.tzinfo else value.replace(tzinfo=timezone.utc)
    if isinstance(value, str):
        try:
            ts = datetime.fromisoformat(value.strip())
            return ts if ts.tzinfo else ts.replace(tzinfo=timezone.utc)
        except ValueError:
            pass
    raise InvalidField(f"{field} is not a valid timestamp: {value!r}", field=field)


def iso_date(d: date) -> str:
    return d.isoformat()


def iso_ts(ts: datetime) -> str:
    return ts.isoformat()


def validate_phone(value: str, field: str = "mobile_number") -> str:
    value = value.strip()
    if not E164_RE.match(value):
        raise InvalidField(f"{field} must be E.164, got {value!r}", field=field)
    return value


@dataclass(frozen=True)
class DateWindow:
    """Inclusive calendar-date range; either bound may be open."""

    start: date | None = None
    end: date | None = None

    def __post_init__(self):
        if self.start is not None and self.end is not None and self.start > self.end:
            raise InvalidField("window start is after window end", field="window")

    def contains(self, d: date) -> bool:
        if self.start is not None and d < self.start:
            return False
        if self.end is not None and d > self.end:
            return False
        return True

    @classmethod
    def parse(cls, start=None, end=None) -> "DateWindow":
        s = parse_date(start, "from") if start not in (None, "") else None
        e = parse_date(end, "to") if end not in (None, "") else None
        return cls(s, e)


ALL_TIME = DateWindow()
