"""Service configuration (flags merged over an optional TOML/JSON file)."""

import json
from dataclasses import dataclass, fields
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ParameterError


@dataclass
class ServiceConfig:
    data_dir: str = "."
    port: int = 8000
    provider: str = "fixtures"  # fixtures | live | none
    fixtures_dir: str | None = None  # default: <data_dir>/stations
    live_base_url: str = "https://meteostat.p.rapidapi.com"
    api_key_env: str = "METEOSTAT_API_KEY"
    request_timeout_s: float = 10.0
    request_retries: int = 3
    cors_origin: str = "*"
    cache_size: int = 64
    point_ceiling: int = 200_000


def load_config(path=None, **overrides) -> ServiceConfig:
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ParameterError(f"config file not found: {path}")
        if path.suffix.lower() == ".toml":
            values = tomllib.loads(path.read_text())
        else:
            values = json.loads(path.read_text())
    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(values) - known
    if unknown:
        raise ParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ServiceConfig(**values)
