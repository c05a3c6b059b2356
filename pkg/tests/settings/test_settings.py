"""Settings tests.

Tests: config/001-005
Covers: defaults, POWERSPACE_ overrides, validators, log level mapping,
        caps flowing into enumeration
"""

from __future__ import annotations

import logging

import pytest
from pydantic import ValidationError

from powerspace.config import PowerspaceSettings, get_settings
from powerspace.errors import SizeLimitExceeded
from powerspace.poset import all_upper_sets, antichain


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.config
class TestSettings:
    """PowerspaceSettings via pydantic-settings."""

    def test_defaults(self, fresh_settings) -> None:
        """config/001: Defaults match the documented limits."""
        cfg = fresh_settings()
        assert (cfg.enum_cap, cfg.range_support_cap, cfg.prec_support_cap) == (20, 16, 16)
        assert (cfg.proptest_seed, cfg.proptest_cases) == (0, 100)
        assert (cfg.max_elements, cfg.max_support, cfg.max_denominator) == (5, 4, 8)
        assert cfg.brute_force_family_size == 3
        assert cfg.log_level == "INFO"

    def test_env_override(self, fresh_settings) -> None:
        """config/002: POWERSPACE_* variables override and get_settings sees them."""
        cfg = fresh_settings(ENUM_CAP="6", PROPTEST_SEED="42", LOG_LEVEL="debug")
        assert cfg.enum_cap == 6
        assert cfg.proptest_seed == 42
        assert cfg.log_level == "DEBUG"
        assert get_settings() is cfg

    @pytest.mark.parametrize(
        "field",
        ["enum_cap", "range_support_cap", "prec_support_cap", "max_elements", "max_denominator"],
    )
    def test_caps_must_be_positive(self, field: str) -> None:
        """config/003: Zero caps are rejected."""
        with pytest.raises(ValidationError):
            PowerspaceSettings(**{field: 0})

    def test_bad_log_level(self) -> None:
        """config/004: Unknown level names are rejected; known ones map to logging ints."""
        with pytest.raises(ValidationError):
            PowerspaceSettings(log_level="chatty")
        assert PowerspaceSettings(log_level="warning").logging_level == logging.WARNING

    def test_cap_reaches_enumeration(self, fresh_settings) -> None:
        """config/005: enum_cap bounds upper-set enumeration."""
        fresh_settings(ENUM_CAP="2")
        with pytest.raises(SizeLimitExceeded):
            all_upper_sets(antichain(["x", "y", "z"]))
