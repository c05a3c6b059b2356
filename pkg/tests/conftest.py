"""Root conftest.py: shared fixtures for the powerspace test suite.

Fixture scoping strategy:
    session:   the small named posets every feature reuses
    function:  fresh settings (env overrides), JSON document files in tmp_path

Provides:
    - diamond: ⊥ < a, b < ⊤ (ids "bot", "a", "b", "top"; poset id "D")
    - chain3: the 3-chain 1/3 < 2/3 < 3/3
    - antichain2: two incomparable points x, y
    - singleton: one point
    - fresh_settings: clears the cached settings around a test
    - write_json: factory writing JSON documents into tmp_path
"""

from __future__ import annotations

import json
import os
from collections.abc import Callable, Generator
from pathlib import Path
from typing import Any

import pytest

from powerspace.config import PowerspaceSettings, get_settings
from powerspace.poset import FinitePoset, antichain, build_poset, chain

# ---------------------------------------------------------------------------
# Hypothesis profiles
# ---------------------------------------------------------------------------

try:
    from hypothesis import HealthCheck, Phase
    from hypothesis import settings as hypothesis_settings

    hypothesis_settings.register_profile(
        "dev",
        max_examples=25,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    )
    hypothesis_settings.register_profile(
        "ci",
        max_examples=300,
        deadline=None,
        derandomize=True,
        print_blob=True,
        suppress_health_check=[HealthCheck.too_slow],
    )
    hypothesis_settings.register_profile(
        "thorough",
        max_examples=5_000,
        deadline=None,
        derandomize=True,
        print_blob=True,
        suppress_health_check=[HealthCheck.too_slow],
        phases=[Phase.explicit, Phase.reuse, Phase.generate, Phase.shrink],
    )
    hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))
except ImportError:
    pass  # hypothesis not installed: property-based tests will fail to import


# ---------------------------------------------------------------------------
# Session-scoped posets
# ---------------------------------------------------------------------------

DIAMOND_PAIRS = [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")]


@pytest.fixture(scope="session")
def diamond() -> FinitePoset:
    """The four-point diamond ⊥ < a, b < ⊤."""
    return build_poset(["bot", "a", "b", "top"], DIAMOND_PAIRS, name="D")


@pytest.fixture(scope="session")
def chain3() -> FinitePoset:
    return chain(3)


@pytest.fixture(scope="session")
def antichain2() -> FinitePoset:
    return antichain(["x", "y"], name="A2")


@pytest.fixture(scope="session")
def singleton() -> FinitePoset:
    return build_poset(["s"], name="S")


# ---------------------------------------------------------------------------
# Function-scoped fixtures (per-test isolation)
# ---------------------------------------------------------------------------


@pytest.fixture
def fresh_settings(monkeypatch: pytest.MonkeyPatch) -> Generator[Callable[..., PowerspaceSettings]]:
    """Factory: set POWERSPACE_* env vars and return the reloaded settings.

    The settings cache is cleared before and after, so overrides never
    leak into other tests.

    Usage:
        def test_cap(fresh_settings):
            settings = fresh_settings(ENUM_CAP="3")
    """
    get_settings.cache_clear()

    def _load(**env: str) -> PowerspaceSettings:
        for key, value in env.items():
            monkeypatch.setenv(f"POWERSPACE_{key}", value)
        get_settings.cache_clear()
        return get_settings()

    yield _load

    get_settings.cache_clear()


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Factory fixture: writes a JSON document into the test's tmp_path.

    Usage:
        def test_something(write_json):
            path = write_json("xi.json", {"space": "D", "mass": {"a": "1/2"}})
    """

    def _write(name: str, payload: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
        return path

    return _write
