"""Powerspace configuration via Pydantic Settings.

Loads from environment variables (prefix: POWERSPACE_) or .env.powerspace file.

Usage:
    settings = get_settings()                 # Cached, auto-loads from env
    settings = PowerspaceSettings(enum_cap=8)  # Override in tests
"""

from __future__ import annotations

import logging
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class PowerspaceSettings(BaseSettings):
    """Tunable limits and property-suite defaults.

    Every value has a default small enough for a laptop run of the full
    property suite. Override via environment variables with the
    POWERSPACE_ prefix or a .env.powerspace file.
    """

    model_config = SettingsConfigDict(
        env_prefix="POWERSPACE_",
        env_file=".env.powerspace",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # --- Enumeration caps (2^n blow-up) ---
    enum_cap: int = 20  # Override via POWERSPACE_ENUM_CAP
    range_support_cap: int = 16
    prec_support_cap: int = 16  # subset enumeration behind ≺; larger supports use ⋘ alone

    # --- Property suites ---
    proptest_seed: int = 0
    proptest_cases: int = 100
    max_elements: int = 5
    max_support: int = 4
    max_denominator: int = 8
    brute_force_family_size: int = 3

    # --- Logging ---
    log_level: str = "INFO"

    @field_validator(
        "enum_cap",
        "range_support_cap",
        "prec_support_cap",
        "max_elements",
        "max_support",
        "max_denominator",
        "brute_force_family_size",
    )
    @classmethod
    def require_positive(cls, v: int) -> int:
        """Caps and sizes must be at least one."""
        if v < 1:
            raise ValueError(f"must be positive, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        upper = v.strip().upper()
        if upper not in _LEVELS:
            raise ValueError(f"unknown log level {v!r}; expected one of {', '.join(_LEVELS)}")
        return upper

    @property
    def logging_level(self) -> int:
        return logging.getLevelName(self.log_level)


@lru_cache(maxsize=1)
def get_settings() -> PowerspaceSettings:
    """Process-wide settings instance. Call ``get_settings.cache_clear()`` to reload."""
    return PowerspaceSettings()
