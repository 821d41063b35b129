"""Service configuration: listen address, auth tokens, seeded users, profiles."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .geo import ValidationError
from .network import DEFAULT_SNAP_TOLERANCE_M
from .routing import DEFAULT_PROFILE, VehicleProfile
from .store import DEFAULT_USERS, User

DEFAULT_TOKENS = {"cco-token": "cco1", "am-token": "am1"}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    store_path: str = "frmp_store.json"
    public_read: bool = True
    tokens: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_TOKENS))
    users: list[User] = field(default_factory=lambda: list(DEFAULT_USERS))
    catalog_path: str | None = None
    profiles: dict[str, VehicleProfile] = field(
        default_factory=lambda: {DEFAULT_PROFILE.name: DEFAULT_PROFILE}
    )
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE_M


def load_config(path: str | Path) -> ServiceConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    cfg = ServiceConfig()
    cfg.host = doc.get("host", cfg.host)
    cfg.port = int(doc.get("port", cfg.port))
    cfg.store_path = doc.get("store", cfg.store_path)
    cfg.public_read = bool(doc.get("public_read", cfg.public_read))
    if "tokens" in doc:
        cfg.tokens = {str(k): str(v) for k, v in doc["tokens"].items()}
    if "users" in doc:
        cfg.users = [
            User(rec["id"], rec.get("display_name", rec["id"]), rec["role"]) for rec in doc["users"]
        ]
    cfg.catalog_path = doc.get("catalog_path", cfg.catalog_path)
    if "profiles" in doc:
        cfg.profiles = {
            rec["name"]: VehicleProfile(
                name=rec["name"],
                speed_kmh=float(rec.get("speed_kmh", 14.0)),
                payload_note=rec.get("payload_note", ""),
            )
            for rec in doc["profiles"]
        }
    cfg.snap_tolerance = float(doc.get("snap_tolerance", cfg.snap_tolerance))
    return cfg
