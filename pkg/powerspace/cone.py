"""Cones, monotone maps, and the free-cone extension.

A ``ConeSpec`` bundles a carrier test with ``0``, ``+``, scalar action,
order and equality. Two instances ship: the nonnegative rationals and
``CX`` (simple valuations on a finite poset). Elements are plain values
tagged by their Python type: ``Fraction`` for the rational cone,
``SimpleValuation`` for ``CX``.

The extension ``f̄(Σ r_b·η_b) = ⨄ r_b ∗ f(b)`` is the unique cone
homomorphism with ``f̄ ∘ η = f``; ``check_homomorphism`` tests that
claim on samples.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal

from powerspace.errors import (
    CarrierViolation,
    NonMonotoneMap,
    PreconditionFailed,
    SpaceMismatch,
    UnknownElement,
)
from powerspace.poset import FinitePoset, is_monotone
from powerspace.relations import leq
from powerspace.valuation import (
    Scalar,
    SimpleValuation,
    add,
    equal,
    format_rational,
    make_valuation,
    point_valuation,
    scale,
    to_fraction,
    zero_valuation,
)

logger = logging.getLogger(__name__)

ConeElement = Fraction | SimpleValuation
Status = Literal["pass", "fail", "info"]


# ---------------------------------------------------------------------------
# Report rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LawRow:
    """One checked law: pass/fail over all samples, first counterexample kept."""

    law: str
    status: Status
    counterexample: dict[str, str] | None = None
    index: int | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict[str, object]:
        body: dict[str, object] = {"axiom": self.law, "status": self.status}
        if self.index is not None:
            body["index"] = self.index
        if self.counterexample is not None:
            body["counterexample"] = self.counterexample
        return body


def all_pass(rows: Iterable[LawRow]) -> bool:
    return all(row.ok for row in rows)


def describe(value: object) -> str:
    """Render a cone element or scalar for a counterexample."""
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


# ---------------------------------------------------------------------------
# ConeSpec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeSpec:
    """A cone given by its operations. Operations must be pure."""

    name: str
    carrier: Callable[[object], bool]
    zero: object
    plus: Callable[[object, object], object]
    smul: Callable[[Fraction, object], object]
    leq_c: Callable[[object, object], bool]
    equal_c: Callable[[object, object], bool]
    coerce: Callable[[object], object] = lambda value: value

    def member(self, x: object, *, role: str = "element") -> object:
        if not self.carrier(x):
            raise CarrierViolation(
                f"{role} {describe(x)} is outside the carrier of {self.name}", value=describe(x)
            )
        return x

    def add(self, x: object, y: object) -> object:
        return self.member(self.plus(x, y), role=f"{describe(x)} + {describe(y)} =")

    def scale(self, a: Scalar, x: object) -> object:
        k = to_fraction(a)
        return self.member(self.smul(k, x), role=f"{format_rational(k)} * {describe(x)} =")

    def sum(self, terms: Iterable[object]) -> object:
        total = self.zero
        for term in terms:
            total = self.add(total, term)
        return total


def rational_cone() -> ConeSpec:
    """``ℚ⁺`` with its usual order; the scalar cone at exact precision."""
    return ConeSpec(
        name="rational-cone",
        carrier=lambda x: isinstance(x, Fraction) and x >= 0,
        zero=Fraction(0),
        plus=lambda x, y: x + y,
        smul=lambda k, x: k * x,
        leq_c=lambda x, y: x <= y,
        equal_c=lambda x, y: x == y,
        coerce=to_fraction,
    )


def cx_cone(space: FinitePoset) -> ConeSpec:
    """Simple valuations on ``space``: the free cone over it."""
    return ConeSpec(
        name=f"CX({space.name})",
        carrier=lambda x: isinstance(x, SimpleValuation) and x.space == space,
        zero=zero_valuation(space),
        plus=add,
        smul=scale,
        leq_c=lambda x, y: leq(x, y).verdict,
        equal_c=equal,
    )


def broken_max_cone() -> ConeSpec:
    """Rationals with ``max`` as addition. Fails ``(k+l)·x = k·x + l·x``."""
    return ConeSpec(
        name="broken-max-cone",
        carrier=lambda x: isinstance(x, Fraction) and x >= 0,
        zero=Fraction(0),
        plus=max,
        smul=lambda k, x: k * x,
        leq_c=lambda x, y: x <= y,
        equal_c=lambda x, y: x == y,
        coerce=to_fraction,
    )


# ---------------------------------------------------------------------------
# Law checks
# ---------------------------------------------------------------------------


def _first_failure(
    law: str,
    index: int | None,
    cases: Iterable[dict[str, object]],
    holds: Callable[..., bool],
) -> LawRow:
    for case in cases:
        if not holds(**case):
            witness = {name: describe(value) for name, value in case.items()}
            return LawRow(law=law, status="fail", counterexample=witness, index=index)
    return LawRow(law=law, status="pass", index=index)


def check_cone_axioms(
    cone: ConeSpec,
    samples: Sequence[object],
    scalars: Sequence[Scalar],
    *,
    continuity: bool = True,
) -> list[LawRow]:
    """Check the eight cone equations exactly over all sample tuples.

    With ``continuity`` set, the monotonicity surrogate rows and an
    informational row follow the eight equations.

    Raises:
        CarrierViolation: If a sample is outside the carrier or an
            operation leaves it.
    """
    xs = [cone.member(x, role="sample") for x in samples]
    ks = [to_fraction(k) for k in scalars]
    eq, plus, smul, zero = cone.equal_c, cone.add, cone.scale, cone.zero

    pairs = [{"x": x, "y": y} for x, y in itertools.product(xs, repeat=2)]
    triples = [{"x": x, "y": y, "z": z} for x, y, z in itertools.product(xs, repeat=3)]
    scalar_pairs = [{"k": k, "l": l, "x": x} for k, l, x in itertools.product(ks, ks, xs)]

    rows = [
        _first_failure("x+y=y+x", 1, pairs, lambda x, y: eq(plus(x, y), plus(y, x))),
        _first_failure(
            "(x+y)+z=x+(y+z)", 2, triples,
            lambda x, y, z: eq(plus(plus(x, y), z), plus(x, plus(y, z))),
        ),
        _first_failure("0+x=x", 3, ({"x": x} for x in xs), lambda x: eq(plus(zero, x), x)),
        _first_failure(
            "(k·l)·x=k·(l·x)", 4, scalar_pairs,
            lambda k, l, x: eq(smul(k * l, x), smul(k, smul(l, x))),
        ),
        _first_failure(
            "(k+l)·x=(k·x)+(l·x)", 5, scalar_pairs,
            lambda k, l, x: eq(smul(k + l, x), plus(smul(k, x), smul(l, x))),
        ),
        _first_failure(
            "k·(x+y)=(k·x)+(k·y)", 6,
            ({"k": k, **pair} for k in ks for pair in pairs),
            lambda k, x, y: eq(smul(k, plus(x, y)), plus(smul(k, x), smul(k, y))),
        ),
        _first_failure("1·x=x", 7, ({"x": x} for x in xs), lambda x: eq(smul(1, x), x)),
        _first_failure("k·0=0", 8, ({"k": k} for k in ks), lambda k: eq(smul(k, zero), zero)),
    ]
    if continuity:
        rows.extend(check_monotone_operations(cone, xs, ks))
        rows.append(
            LawRow(
                law="joint continuity: approximated by monotonicity of + and · on samples",
                status="info",
            )
        )
    failed = [row.law for row in rows if not row.ok]
    logger.debug("cone %s: %d rows, failed %s", cone.name, len(rows), failed)
    return rows


def check_monotone_operations(
    cone: ConeSpec, samples: Sequence[object], scalars: Sequence[Scalar]
) -> list[LawRow]:
    """Monotonicity of ``+`` and ``·`` in each argument, on samples.

    On a finite order a monotone operation also preserves maxima of
    directed subsets, which is all continuity asks at this scale.
    """
    xs = list(samples)
    ks = sorted({to_fraction(k) for k in scalars})
    le = cone.leq_c
    ordered = [(x, y) for x, y in itertools.product(xs, repeat=2) if le(x, y)]
    return [
        _first_failure(
            "plus monotone",
            None,
            ({"x": x, "y": y, "z": z} for (x, y) in ordered for z in xs),
            lambda x, y, z: le(cone.add(x, z), cone.add(y, z)),
        ),
        _first_failure(
            "smul monotone",
            None,
            (
                {"k": k, "l": l, "x": x, "y": y}
                for (x, y) in ordered
                for k, l in itertools.combinations_with_replacement(ks, 2)
            ),
            lambda k, l, x, y: le(cone.scale(k, x), cone.scale(l, y)),
        ),
    ]


# ---------------------------------------------------------------------------
# Monotone maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A total order-preserving map from a finite poset into a poset or cone."""

    source: FinitePoset
    target: FinitePoset | ConeSpec
    graph: tuple[tuple[str, object], ...]

    def __post_init__(self) -> None:
        keys = [x for x, _ in self.graph]
        missing = sorted(set(self.source.elements) - set(keys))
        if missing:
            raise PreconditionFailed(
                f"map is not total on {self.source.name!r}: missing {missing}", missing=missing
            )
        self.source.check(keys)
        for x, value in self.graph:
            if isinstance(self.target, FinitePoset):
                if value not in self.target:
                    raise UnknownElement(
                        f"f({x}) = {value!r} is not in poset {self.target.name!r}", elements=[value]
                    )
            else:
                self.target.member(value, role=f"f({x}) =")
        if not is_monotone(self.source, self.target_leq, self.table):
            x, y = next(
                (x, y)
                for x, y in self.source.relation
                if x != y and not self.target_leq(self.table[x], self.table[y])
            )
            raise NonMonotoneMap(
                f"{x} ≤ {y} but f({x}) = {describe(self.table[x])} is not below f({y}) = {describe(self.table[y])}",
                pair=[x, y],
            )

    @classmethod
    def build(
        cls,
        source: FinitePoset,
        target: FinitePoset | ConeSpec,
        graph: Mapping[str, object],
    ) -> MonotoneMap:
        """Coerce target values (``"p/q"`` strings for the rational cone) and validate."""
        source.check(graph)
        coerce = target.coerce if isinstance(target, ConeSpec) else str
        pairs = tuple((x, coerce(graph[x])) for x in source.sort(graph))
        return cls(source=source, target=target, graph=pairs)

    @cached_property
    def table(self) -> dict[str, object]:
        return dict(self.graph)

    @property
    def target_leq(self) -> Callable[[object, object], bool]:
        if isinstance(self.target, FinitePoset):
            return self.target.leq  # type: ignore[return-value]
        return self.target.leq_c

    def __call__(self, x: str) -> object:
        return self.table[x]


def identity_map(space: FinitePoset) -> MonotoneMap:
    return MonotoneMap(source=space, target=space, graph=tuple((x, x) for x in space.elements))


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g ∘ f``; ``f`` must land in the source poset of ``g``."""
    if not isinstance(f.target, FinitePoset) or f.target != g.source:
        raise SpaceMismatch(
            f"cannot compose: f lands in {getattr(f.target, 'name', '?')!r}, g starts at {g.source.name!r}",
            left=getattr(f.target, "name", "?"),
            right=g.source.name,
        )
    return MonotoneMap(
        source=f.source, target=g.target, graph=tuple((x, g(str(y))) for x, y in f.graph)
    )


# ---------------------------------------------------------------------------
# Extension and pushforward
# ---------------------------------------------------------------------------


def bar_extension(
    cone: ConeSpec, assignment: Callable[[str], object], xi: SimpleValuation
) -> object:
    """``⨄_b r_b ∗ assignment(b)`` over the support of ``ξ``; zero for the empty sum."""
    return cone.sum(cone.scale(r, assignment(b)) for b, r in xi.mass)


def extend(f: MonotoneMap, xi: SimpleValuation) -> object:
    """The cone homomorphism ``f̄`` evaluated at ``ξ``.

    A poset-valued ``f`` is read as ``η ∘ f`` into ``CX`` of its target.

    Raises:
        SpaceMismatch: If ``ξ`` is not over the source of ``f``.
    """
    if xi.space != f.source:
        raise SpaceMismatch(
            f"valuation lives on {xi.space.name!r}, map starts at {f.source.name!r}",
            left=xi.space.name,
            right=f.source.name,
        )
    if isinstance(f.target, FinitePoset):
        target = f.target
        return bar_extension(cx_cone(target), lambda b: point_valuation(target, str(f(b))), xi)
    return bar_extension(f.target, f, xi)


def map_pp(f: MonotoneMap, xi: SimpleValuation) -> SimpleValuation:
    """Pushforward ``Σ r_b·η_{f(b)}`` along a poset map; coefficients merge."""
    if not isinstance(f.target, FinitePoset):
        raise PreconditionFailed(f"map_pp needs a poset-valued map; target is {f.target.name}")
    if xi.space != f.source:
        raise SpaceMismatch(
            f"valuation lives on {xi.space.name!r}, map starts at {f.source.name!r}",
            left=xi.space.name,
            right=f.source.name,
        )
    return make_valuation(f.target, [(str(f(b)), r) for b, r in xi.mass])


def check_homomorphism(
    h: Callable[[SimpleValuation], object],
    cone: ConeSpec,
    samples: Sequence[SimpleValuation],
    scalars: Sequence[Scalar] = (0, Fraction(1, 2), 1, 2),
    *,
    unit: MonotoneMap | None = None,
) -> list[LawRow]:
    """Additivity and scalar compatibility of ``h`` on samples.

    With ``unit`` given, also checks ``h(η_x) = f(x)`` for every point and
    that ``h`` agrees with ``extend(f, ·)`` on every sample, which is the
    uniqueness half of freeness.
    """
    eq = cone.equal_c
    ks = [to_fraction(k) for k in scalars]
    rows = [
        _first_failure(
            "additivity",
            None,
            ({"x": x, "y": y} for x, y in itertools.product(samples, repeat=2)),
            lambda x, y: eq(h(add(x, y)), cone.add(h(x), h(y))),
        ),
        _first_failure(
            "scalar compatibility",
            None,
            ({"k": k, "x": x} for k in ks for x in samples),
            lambda k, x: eq(h(scale(k, x)), cone.scale(k, h(x))),
        ),
    ]
    if unit is not None:
        rows.append(
            _first_failure(
                "unit law h(η_x)=f(x)",
                None,
                ({"x": x} for x in unit.source.elements),
                lambda x: eq(h(point_valuation(unit.source, x)), _unit_value(unit, x)),
            )
        )
        rows.append(
            _first_failure(
                "agrees with extension",
                None,
                ({"xi": xi} for xi in samples),
                lambda xi: eq(h(xi), extend(unit, xi)),
            )
        )
    return rows


def _unit_value(f: MonotoneMap, x: str) -> object:
    if isinstance(f.target, FinitePoset):
        return point_valuation(f.target, str(f(x)))
    return f(x)
