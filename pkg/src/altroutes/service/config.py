"""Service configuration: JSON file with environment-variable overrides.

Precedence is environment > file > built-in default. Every override
variable is named in _ENV_MAP below.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..errors import InvalidInputError


@dataclass
class ServiceConfig:
    network_path: str = "network.bin"
    city: str = "unknown"
    rating_store_path: str = "ratings.jsonl"
    provider_fixtures_path: str | None = None
    frontend_dist: str | None = None
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    k_default: int = 3
    penalty_factor: float = 1.4
    stretch_bound: float = 1.4
    theta: float = 0.5
    engines: list[str] = field(default_factory=lambda: ["penalty", "plateaus", "dissimilarity"])
    label_policy: str = "fixed"  # "fixed" | "shuffle"
    shuffle_seed: int = 0
    query_cache_ttl_seconds: float = 86_400.0
    category_small_max: float = 10.0
    category_medium_max: float = 25.0
    category_long_max: float = 80.0

    def __post_init__(self) -> None:
        if self.label_policy not in ("fixed", "shuffle"):
            raise InvalidInputError(f"unknown label policy {self.label_policy!r}")
        if not (1 <= self.k_default <= 5):
            raise InvalidInputError("k_default must lie in 1..5")


_ENV_MAP = {
    "ALTROUTES_NETWORK": ("network_path", str),
    "ALTROUTES_CITY": ("city", str),
    "ALTROUTES_STORE": ("rating_store_path", str),
    "ALTROUTES_PROVIDER_FIXTURES": ("provider_fixtures_path", str),
    "ALTROUTES_FRONTEND_DIST": ("frontend_dist", str),
    "ALTROUTES_HOST": ("listen_host", str),
    "ALTROUTES_PORT": ("listen_port", int),
    "ALTROUTES_K": ("k_default", int),
    "ALTROUTES_PENALTY_FACTOR": ("penalty_factor", float),
    "ALTROUTES_STRETCH_BOUND": ("stretch_bound", float),
    "ALTROUTES_THETA": ("theta", float),
    "ALTROUTES_LABEL_POLICY": ("label_policy", str),
    "ALTROUTES_SHUFFLE_SEED": ("shuffle_seed", int),
    "ALTROUTES_CACHE_TTL": ("query_cache_ttl_seconds", float),
}


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    if path is not None:
        raw = json.loads(Path(path).read_text())
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(raw) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        values.update(raw)
    for var, (key, cast) in _ENV_MAP.items():
        if var in env:
            values[key] = cast(env[var])
    return ServiceConfig(**values)
