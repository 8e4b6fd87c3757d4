"""
Engine configuration.

Values come from environment variables (optionally seeded from .env through
app.env.load_env_once); CLI flags override them per invocation.
"""

import os
import logging
from dataclasses import dataclass
from typing import Optional

from app.env import load_env_once

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


@dataclass(frozen=True)
class EngineConfig:
    """Tunable limits and defaults of the engine."""
    weyl_size_cap: int = 10_000_000
    parabolic_cap: int = 20
    default_q: int = 2
    default_depth: int = 20
    default_box: int = 3
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "EngineConfig":
        load_env_once()
        return cls(
            weyl_size_cap=_int_env("SYMPAIR_WEYL_SIZE_CAP", cls.weyl_size_cap),
            parabolic_cap=_int_env("SYMPAIR_PARABOLIC_CAP", cls.parabolic_cap),
            default_q=_int_env("SYMPAIR_DEFAULT_Q", cls.default_q),
            default_depth=_int_env("SYMPAIR_DEFAULT_DEPTH", cls.default_depth),
            default_box=_int_env("SYMPAIR_DEFAULT_BOX", cls.default_box),
            log_level=os.getenv("SYMPAIR_LOG_LEVEL", cls.log_level).upper(),
        )


_config: Optional[EngineConfig] = None


def get_config() -> EngineConfig:
    """Process-wide configuration, read from the environment on first use."""
    global _config
    if _config is None:
        _config = EngineConfig.from_env()
        logger.debug(f"Engine configuration: {_config}")
    return _config


def reset_config() -> None:
    global _config
    _config = None
