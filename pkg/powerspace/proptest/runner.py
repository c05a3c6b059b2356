"""Seeded property-suite runner.

Each property runs under hypothesis with a fixed seed and no example
database, so a (suite, seed, cases) triple always replays the same
cases. Hypothesis shrinks a failure and replays the minimal case last;
that replay is the counterexample reported.

Exhaustive mode walks every catalogue poset up to ``max_elements`` and
spreads the case budget over them.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import hypothesis.strategies as st
from hypothesis import HealthCheck, Phase, given, settings
from hypothesis import seed as hypothesis_seed

from powerspace.cone import MonotoneMap, describe
from powerspace.config import get_settings
from powerspace.documents import (
    PosetDocument,
    PropertyResultDocument,
    ProptestSummaryDocument,
)
from powerspace.poset import FinitePoset
from powerspace.proptest.strategies import poset_catalogue, posets
from powerspace.proptest.suites import Case, Property, properties
from powerspace.relations import DirectedFamily
from powerspace.semantics.program import Bind, Choice, Par, Ret, Scale, pretty
from powerspace.transport import TransportInstance
from powerspace.valuation import SimpleValuation, format_rational

logger = logging.getLogger(__name__)

_PROGRAM_TYPES = (Ret, Choice, Scale, Par, Bind)


class PropertyFailure(AssertionError):
    """A property check reported a problem."""


@dataclass(frozen=True)
class PropertyOutcome:
    name: str
    suite: str
    cases: int
    passed: bool
    counterexample: dict[str, Any] | None = None
    elapsed_s: float = 0.0


@dataclass(frozen=True)
class SuiteSummary:
    suite: str
    seed: int
    cases: int
    exhaustive: bool
    outcomes: tuple[PropertyOutcome, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    def to_document(self) -> ProptestSummaryDocument:
        return ProptestSummaryDocument(
            suite=self.suite,
            seed=self.seed,
            cases=self.cases,
            exhaustive=self.exhaustive,
            passed=self.passed,
            properties=[
                PropertyResultDocument(
                    name=f"{o.suite}: {o.name}",
                    status="pass" if o.passed else "fail",
                    cases=o.cases,
                    counterexample=o.counterexample,
                )
                for o in self.outcomes
            ],
        )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render(value: object) -> Any:
    """JSON view of a case value."""
    if isinstance(value, FinitePoset):
        return PosetDocument.from_poset(value).model_dump()
    if isinstance(value, SimpleValuation):
        return {"space": value.space.name, "mass": {b: format_rational(r) for b, r in value.mass}}
    if isinstance(value, DirectedFamily):
        return [render(member) for member in value.members]
    if isinstance(value, MonotoneMap):
        return {x: describe(y) for x, y in value.graph}
    if isinstance(value, TransportInstance):
        return {
            "supplies": {b: format_rational(r) for b, r in value.supplies},
            "capacities": {c: format_rational(s) for c, s in value.capacities},
            "allowed": sorted([b, c] for b, c in value.allowed),
            "strict": value.strict,
        }
    if isinstance(value, _PROGRAM_TYPES):
        return pretty(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [render(item) for item in value]
    return value if isinstance(value, (str, int, bool)) or value is None else str(value)


def render_case(case: Case, problem: str) -> dict[str, Any]:
    return {"problem": problem, **{name: render(value) for name, value in case.items()}}


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def run_property(
    prop: Property,
    poset_strategy: st.SearchStrategy[FinitePoset],
    *,
    seed: int,
    cases: int,
) -> PropertyOutcome:
    """Run one property for ``cases`` examples; never raises on failure."""
    started = time.monotonic()
    if cases <= 0:
        return PropertyOutcome(name=prop.name, suite=prop.suite, cases=0, passed=True)

    failures: list[dict[str, Any]] = []

    @settings(
        max_examples=cases,
        database=None,
        deadline=None,
        phases=(Phase.explicit, Phase.generate, Phase.shrink),
        suppress_health_check=list(HealthCheck),
        print_blob=False,
    )
    @hypothesis_seed(seed)
    @given(prop.cases(poset_strategy))
    def check(case: Case) -> None:
        try:
            problem = prop.check(case)
        except Exception as exc:  # a crash is a failing case too
            problem = f"{type(exc).__name__}: {exc}"
        if problem is not None:
            failures.append(render_case(case, problem))
            raise PropertyFailure(problem)

    passed = True
    try:
        check()
    except PropertyFailure:
        passed = False
    except Exception as exc:
        logger.warning("property %r aborted: %s", prop.name, exc)
        passed = False
        if not failures:
            failures.append({"problem": f"{type(exc).__name__}: {exc}"})

    elapsed = time.monotonic() - started
    counterexample = failures[-1] if failures and not passed else None
    logger.info(
        "%s: %s (%d cases, %.2fs)", prop.name, "pass" if passed else "FAIL", cases, elapsed
    )
    return PropertyOutcome(
        name=prop.name,
        suite=prop.suite,
        cases=cases,
        passed=passed,
        counterexample=counterexample,
        elapsed_s=round(elapsed, 3),
    )


def run_suite(
    suite: str,
    *,
    seed: int | None = None,
    cases: int | None = None,
    exhaustive: bool = False,
    max_elements: int | None = None,
) -> SuiteSummary:
    """Run every property of ``suite``; defaults come from the settings.

    Raises:
        UnknownSuite: If ``suite`` is not a known suite name.
    """
    cfg = get_settings()
    seed = cfg.proptest_seed if seed is None else seed
    cases = cfg.proptest_cases if cases is None else cases
    limit = max_elements or cfg.max_elements
    props = properties(suite)
    logger.info(
        "suite %s: %d properties, seed %d, %d cases%s",
        suite,
        len(props),
        seed,
        cases,
        ", exhaustive" if exhaustive else "",
    )

    outcomes: list[PropertyOutcome] = []
    for prop in props:
        size = min(limit, prop.max_elements or limit)
        if not exhaustive or not prop.per_space or cases <= 0:
            outcomes.append(run_property(prop, posets(size), seed=seed, cases=cases))
            continue
        outcomes.append(_run_exhaustive(prop, size, seed=seed, cases=cases))
    return SuiteSummary(
        suite=suite, seed=seed, cases=cases, exhaustive=exhaustive, outcomes=tuple(outcomes)
    )


def _run_exhaustive(prop: Property, size: int, *, seed: int, cases: int) -> PropertyOutcome:
    catalogue = poset_catalogue(size)
    per_poset = max(1, math.ceil(cases / len(catalogue)))
    total = 0
    for poset in catalogue:
        outcome = run_property(prop, st.just(poset), seed=seed, cases=per_poset)
        total += outcome.cases
        if not outcome.passed:
            return PropertyOutcome(
                name=prop.name,
                suite=prop.suite,
                cases=total,
                passed=False,
                counterexample=outcome.counterexample,
            )
    logger.debug("%s: %d posets x %d cases", prop.name, len(catalogue), per_poset)
    return PropertyOutcome(name=prop.name, suite=prop.suite, cases=total, passed=True)
