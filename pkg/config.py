"""
Runtime settings for the Stirling bounds toolkit.

Defaults live here; an optional JSON file (path in ``STIRLING_CONFIG``) and the
``STIRLING_EXACT_CAP`` environment variable override them. CLI flags override
per invocation.
"""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_ENV = "STIRLING_CONFIG"
EXACT_CAP_ENV = "STIRLING_EXACT_CAP"


@dataclass(frozen=True)
class Settings:
    exactness_cap: int = 400
    moment_order_cap: int = 400
    probability_route_cap: int = 150
    expansion_order_cap: int = 400
    relative_slack: float = 1e-9
    working_precision: int = 113
    tilt_tolerance: float = 1e-12
    tilt_max_steps: int = 200
    root_rtol: float = 1e-12
    quadrature_limit: int = 200
    quadrature_epsabs: float = 1e-10
    mc_power_cap: int = 8
    rng_name: str = "philox"
    default_seed: int = 12345


DEFAULT_SETTINGS = Settings()


def _coerce(name: str, value: Any) -> Any:
    expected = type(getattr(DEFAULT_SETTINGS, name))
    try:
        coerced = expected(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {name}: {value!r} ({e})")
    if expected in (int, float) and coerced <= 0 and name != "default_seed":
        raise ConfigError(f"{name} must be positive, got {value!r}")
    return coerced


def load_settings(config_path: Optional[str] = None,
                  environ: Optional[Dict[str, str]] = None) -> Settings:
    """
    Build the effective settings.

    Args:
        config_path: JSON file with a flat object of Settings fields. Falls back
            to ``$STIRLING_CONFIG`` when omitted.
        environ: environment mapping (defaults to ``os.environ``).

    Returns:
        A frozen Settings instance.
    """
    environ = os.environ if environ is None else environ
    settings = DEFAULT_SETTINGS
    path = config_path or environ.get(CONFIG_ENV)

    if path:
        config_file = Path(path)
        if not config_file.exists():
            raise ConfigError(f"Config file not found: {path}")
        try:
            data = json.loads(config_file.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")

        known = {f.name for f in fields(Settings)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown settings in {path}: {sorted(unknown)}")
        settings = replace(settings, **{k: _coerce(k, v) for k, v in data.items()})
        logger.debug("Loaded settings from %s", path)

    cap = environ.get(EXACT_CAP_ENV)
    if cap is not None:
        settings = replace(settings, exactness_cap=_coerce("exactness_cap", cap))
        logger.debug("Exactness cap overridden to %d", settings.exactness_cap)

    return settings
