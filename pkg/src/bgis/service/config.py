"""Process configuration: env binding, zone file loading."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigInvalid
from ..geo import ZoneMap, default_zone_map


@dataclass(frozen=True)
class ServiceConfig:
    bind_host: str = "127.0.0.1"
    bind_port: int = 8000
    data_dir: Path = Path("./data")
    zones_file: Path | None = None
    barangay_name: str = "Barangay San Roque"
    gateway_url: str | None = None
    gateway_key: str | None = None
    session_ttl_hours: float = 8.0

    @classmethod
    def from_env(cls, env: dict | None = None, **overrides) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)
        values: dict = {}
        bind = env.get("BIND_ADDR")
        if bind:
            host, _, port = bind.rpartition(":")
            if not host or not port.isdigit():
                raise ConfigInvalid(f"BIND_ADDR must be host:port, got {bind!r}")
            values["bind_host"], values["bind_port"] = host, int(port)
        if env.get("DATA_DIR"):
            values["data_dir"] = Path(env["DATA_DIR"])
        if env.get("ZONES_FILE"):
            values["zones_file"] = Path(env["ZONES_FILE"])
        if env.get("SMS_GATEWAY_URL"):
            values["gateway_url"] = env["SMS_GATEWAY_URL"]
        if env.get("SMS_GATEWAY_KEY"):
            values["gateway_key"] = env["SMS_GATEWAY_KEY"]
        if env.get("BARANGAY_NAME"):
            values["barangay_name"] = env["BARANGAY_NAME"]
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def log_path(self) -> Path:
        return Path(self.data_dir) / "events.log"


def load_zone_map(path: Path | None) -> ZoneMap:
    """Zone polygons are deployment configuration; without a file the
    synthetic default layout is used."""
    if path is None:
        return default_zone_map()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigInvalid(f"zones file {path} does not exist")
    except (OSError, ValueError) as exc:
        raise ConfigInvalid(f"cannot read zones file {path}: {exc}")
    return ZoneMap.from_config(doc)
