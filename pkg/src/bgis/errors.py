"""Domain error hierarchy.

Every error carries a stable machine-readable ``code`` plus free-form
``details``; the HTTP layer maps these onto 4xx envelopes.
"""
from __future__ import annotations


class DomainError(Exception):
    code = "DOMAIN_ERROR"
    http_status = 400

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_envelope(self) -> dict:
        return {"code": self.code, "message": self.message, "details": self.details}


class NotFound(DomainError):
    code = "NOT_FOUND"
    http_status = 404


class InvalidField(DomainError):
    code = "INVALID_FIELD"
    http_status = 422


class ZoneUnknown(DomainError):
    code = "ZONE_UNKNOWN"
    http_status = 422


class DanglingReference(DomainError):
    code = "DANGLING_REFERENCE"
    http_status = 422


class InvalidLocation(DomainError):
    code = "INVALID_LOCATION"
    http_status = 422


class IllegalTransition(DomainError):
    code = "ILLEGAL_TRANSITION"
    http_status = 409


class OverrideForbidden(DomainError):
    code = "OVERRIDE_FORBIDDEN"
    http_status = 403


class NotIssued(DomainError):
    code = "NOT_ISSUED"
    http_status = 409


class Unzoned(DomainError):
    code = "UNZONED"
    http_status = 422


class EmptyDataset(DomainError):
    code = "EMPTY_DATASET"
    http_status = 422


class UnknownLabel(DomainError):
    code = "UNKNOWN_LABEL"
    http_status = 422


class SchemaMismatch(DomainError):
    code = "SCHEMA_MISMATCH"
    http_status = 422


class TooFewRecords(DomainError):
    code = "TOO_FEW_RECORDS"
    http_status = 422


class InsufficientClasses(DomainError):
    code = "INSUFFICIENT_CLASSES"
    http_status = 409


class EmptyMessage(DomainError):
    code = "EMPTY_MESSAGE"
    http_status = 422


class UnsupportedCharset(DomainError):
    code = "UNSUPPORTED_CHARSET"
    http_status = 422


class GatewayUnconfigured(DomainError):
    code = "GATEWAY_UNCONFIGURED"
    http_status = 409


class MalformedCsv(DomainError):
    code = "MALFORMED_CSV"
    http_status = 422


class Forbidden(DomainError):
    code = "FORBIDDEN"
    http_status = 403


class EmptyBody(DomainError):
    code = "EMPTY_BODY"
    http_status = 422


class BadCredentials(DomainError):
    code = "BAD_CREDENTIALS"
    http_status = 401


class Unauthenticated(DomainError):
    code = "UNAUTHENTICATED"
    http_status = 401


class ConfigInvalid(DomainError):
    code = "CONFIG_INVALID"
    http_status = 400
