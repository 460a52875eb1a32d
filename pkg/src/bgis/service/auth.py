"""Accounts, bearer-token sessions, and the role/action matrix."""
from __future__ import annotations

import hashlib
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import TYPE_CHECKING

from ..errors import BadCredentials, Forbidden, InvalidField

if TYPE_CHECKING:
    from ..store import Store

ROLES = ("secretary", "treasurer", "health_worker", "lgu", "resident_public")

# Action grants per role. The secretary operates everything; the treasurer
# issues clearances but cannot override the gate; open data is public.
ROLE_ACTIONS = {
    "secretary": {
        "registry.read", "registry.write", "blotter.read", "blotter.write",
        "case.update", "clearance.read", "clearance.issue", "clearance.override",
        "health.read", "health.write", "geo.read", "stats.read",
        "analytics.train", "sms.send", "advisory.publish", "opendata.read",
    },
    "treasurer": {
        "registry.read", "blotter.read", "clearance.read", "clearance.issue",
        "opendata.read",
    },
    "health_worker": {
        "registry.read", "health.read", "health.write", "geo.read",
        "stats.read", "opendata.read",
    },
    "lgu": {
        "opendata.read", "stats.read", "geo.read", "advisory.publish",
    },
    "resident_public": {"opendata.read"},
}

PUBLIC_ACTIONS = {"opendata.read"}

_SCRYPT_N, _SCRYPT_R, _SCRYPT_P = 2 ** 14, 8, 1


def hash_password(password: str) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.scrypt(password.encode("utf-8"), salt=salt,
                            n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P)
    return f"scrypt${_SCRYPT_N}${_SCRYPT_R}${_SCRYPT_P}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, n, r, p, salt_hex, digest_hex = stored.split("$")
        if scheme != "scrypt":
            return False
        digest = hashlib.scrypt(password.encode("utf-8"),
                                salt=bytes.fromhex(salt_hex),
                                n=int(n), r=int(r), p=int(p))
        return secrets.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


@dataclass(frozen=True)
class Session:
    token: str
    username: str
    role: str
    expires_at: datetime


def authorize(role: str | None, action: str) -> bool:
    """Role-matrix decision; ``role=None`` is an unauthenticated caller."""
    if role is None:
        return action in PUBLIC_ACTIONS
    return action in ROLE_ACTIONS.get(role, set())


class AuthService:
    def __init__(self, store: "Store", session_ttl: timedelta = timedelta(hours=8)):
        self.store = store
        self.session_ttl = session_ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create_account(self, username: str, password: str, role: str,
                       linked_resident_id: str | None = None) -> None:
        username = (username or "").strip()
        if not username:
            raise InvalidField("username must be non-empty", field="username")
        if username in self.store.state.accounts:
            raise InvalidField(f"username {username!r} already exists", field="username")
        if role not in ROLES:
            raise InvalidField(f"role must be one of {ROLES}", field="role")
        if len(password or "") < 8:
            raise InvalidField("password must be at least 8 characters",
                               field="password")
        self.store.commit("account_created", {
            "username": username,
            "password_hash": hash_password(password),
            "role": role,
            "linked_resident_id": linked_resident_id,
        })

    def authenticate(self, username: str, password: str) -> Session:
        account = self.store.state.accounts.get((username or "").strip())
        # uniform failure: do not reveal whether the user exists
        if account is None or not verify_password(password or "",
                                                  account["password_hash"]):
            raise BadCredentials("invalid username or password")
        session = Session(
            token=secrets.token_hex(16),
            username=account["username"],
            role=account["role"],
            expires_at=self.store.now() + self.session_ttl,
        )
        with self._lock:
            self._sessions[session.token] = session
        return session

    def get_session(self, token: str | None) -> Session | None:
        if not token:
            return None
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if session.expires_at <= self.store.now():
                del self._sessions[token]
                return None
            return session

    def require(self, session: Session | None, action: str) -> None:
        role = session.role if session else None
        if not authorize(role, action):
            raise Forbidden(f"role {role or 'anonymous'} may not {action}",
                            action=action, role=role)
