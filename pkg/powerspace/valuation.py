"""Simple valuations over a finite poset, with exact rational arithmetic.

A simple valuation ``Σ r_b·η_b`` is stored in canonical form: support
points in the poset's element order, duplicates merged, every coefficient
a strictly positive ``Fraction``. The empty sum is the zero valuation and
plays the role of the cone's 0.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

from powerspace.config import get_settings
from powerspace.errors import (
    DocumentError,
    NegativeScalar,
    NonPositiveCoefficient,
    NotOpen,
    SpaceMismatch,
    UnknownElement,
)
from powerspace.poset import FinitePoset, Subset, all_upper_sets, build_poset, chain, is_upper

logger = logging.getLogger(__name__)

Scalar = Fraction | int | str


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------


def to_fraction(value: object) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts Fractions, ints and "p/q" / integer strings. Floats and bools
    are rejected: an inexact scalar would silently break the deciders.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentError(f"inexact or non-numeric scalar {value!r}; use a 'p/q' string")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise DocumentError(f"decimal scalar {value!r}; use a 'p/q' string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"malformed rational {value!r}") from exc
    raise DocumentError(f"unsupported scalar {value!r}")


def format_rational(q: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# SimpleValuation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimpleValuation:
    """A finite positive linear combination of point valuations."""

    space: FinitePoset
    mass: tuple[tuple[str, Fraction], ...]

    @cached_property
    def _coefficients(self) -> dict[str, Fraction]:
        return dict(self.mass)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(b for b, _ in self.mass)

    @property
    def is_zero(self) -> bool:
        return not self.mass

    @property
    def total_mass(self) -> Fraction:
        return sum((r for _, r in self.mass), Fraction(0))

    def coefficient(self, x: str) -> Fraction:
        return self._coefficients.get(x, Fraction(0))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.mass)

    def __call__(self, opens: Iterable[str]) -> Fraction:
        return evaluate(self, opens)

    def __add__(self, other: SimpleValuation) -> SimpleValuation:
        if not isinstance(other, SimpleValuation):
            return NotImplemented
        return add(self, other)

    def __mul__(self, a: Scalar) -> SimpleValuation:
        return scale(a, self)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.mass:
            return "0"
        return " + ".join(f"{format_rational(r)}·η_{b}" for b, r in self.mass)


def _canonical(space: FinitePoset, coefficients: Mapping[str, Fraction]) -> SimpleValuation:
    mass = tuple((b, coefficients[b]) for b in space.sort(coefficients) if coefficients[b] != 0)
    return SimpleValuation(space=space, mass=mass)


def _same_space(xi: SimpleValuation, eta: SimpleValuation) -> None:
    if xi.space != eta.space:
        raise SpaceMismatch(
            f"valuations live on different spaces: {xi.space.name!r} vs {eta.space.name!r}",
            left=xi.space.name,
            right=eta.space.name,
        )


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def make_valuation(
    space: FinitePoset,
    entries: Iterable[tuple[str, Scalar]] | Mapping[str, Scalar],
) -> SimpleValuation:
    """Build ``Σ r_b·η_b`` from ``(element, rational)`` entries.

    Duplicate elements are merged by adding their coefficients.

    Raises:
        NonPositiveCoefficient: If any coefficient is ``≤ 0``.
        UnknownElement: If an element is not in ``space``.
    """
    items = entries.items() if isinstance(entries, Mapping) else entries
    merged: dict[str, Fraction] = {}
    for element, raw in items:
        r = to_fraction(raw)
        if r <= 0:
            raise NonPositiveCoefficient(
                f"coefficient of {element!r} must be positive, got {format_rational(r)}",
                element=element,
            )
        if element not in space:
            raise UnknownElement(f"{element!r} is not in poset {space.name!r}", elements=[element])
        merged[element] = merged.get(element, Fraction(0)) + r
    return _canonical(space, merged)


def zero_valuation(space: FinitePoset) -> SimpleValuation:
    return SimpleValuation(space=space, mass=())


def point_valuation(space: FinitePoset, x: str) -> SimpleValuation:
    """``η_x``: 1 on opens containing ``x``, 0 elsewhere. The unit ``i(x)``."""
    if x not in space:
        raise UnknownElement(f"{x!r} is not in poset {space.name!r}", elements=[x])
    return SimpleValuation(space=space, mass=((x, Fraction(1)),))


# ---------------------------------------------------------------------------
# Evaluation and cone operations
# ---------------------------------------------------------------------------


def mass_in(xi: SimpleValuation, subset: Subset) -> Fraction:
    """Sum of coefficients inside ``subset``; no openness check (hot path)."""
    return sum((r for b, r in xi.mass if b in subset), Fraction(0))


def evaluate(xi: SimpleValuation, opens: Iterable[str]) -> Fraction:
    """``ξ(U) = Σ_{b∈U} r_b``.

    Raises:
        NotOpen: If ``U`` is not an upper set of the space.
    """
    u = xi.space.check(opens)
    if not is_upper(xi.space, u):
        raise NotOpen(
            f"{xi.space.sort(u)} is not an upper set of {xi.space.name!r}",
            subset=xi.space.sort(u),
        )
    return mass_in(xi, u)


def add(xi: SimpleValuation, eta: SimpleValuation) -> SimpleValuation:
    _same_space(xi, eta)
    merged = dict(xi.mass)
    for b, r in eta.mass:
        merged[b] = merged.get(b, Fraction(0)) + r
    return _canonical(xi.space, merged)


def scale(a: Scalar, xi: SimpleValuation) -> SimpleValuation:
    """``a·ξ``; ``0·ξ`` is the zero valuation.

    Raises:
        NegativeScalar: If ``a < 0``.
    """
    k = to_fraction(a)
    if k < 0:
        raise NegativeScalar(f"scalar must be nonnegative, got {format_rational(k)}")
    if k == 0:
        return zero_valuation(xi.space)
    return SimpleValuation(space=xi.space, mass=tuple((b, k * r) for b, r in xi.mass))


def equal(xi: SimpleValuation, eta: SimpleValuation) -> bool:
    """Canonical forms agree; distinct linear combinations are distinct valuations."""
    _same_space(xi, eta)
    return xi.mass == eta.mass


# ---------------------------------------------------------------------------
# Range and axioms
# ---------------------------------------------------------------------------


def support_poset(xi: SimpleValuation) -> FinitePoset:
    """The order induced on the support of ``ξ``."""
    supp = set(xi.support)
    return build_poset(
        xi.support,
        ((x, y) for x, y in xi.space.relation if x != y and x in supp and y in supp),
        name=f"{xi.space.name}|supp",
    )


def value_range(xi: SimpleValuation, *, cap: int | None = None) -> frozenset[Fraction]:
    """``{ξ(U) : U open}``.

    ``ξ(U)`` only depends on ``U ∩ support``, and those traces are exactly
    the upper sets of the support's induced order, so at most
    ``2^|support|`` values occur.

    Raises:
        SizeLimitExceeded: If the support exceeds ``cap``
            (default: ``settings.range_support_cap``).
    """
    limit = get_settings().range_support_cap if cap is None else cap
    traces = all_upper_sets(support_poset(xi), cap=limit)
    return frozenset(mass_in(xi, t) for t in traces)


def check_valuation_axioms(xi: SimpleValuation) -> list[str]:
    """Names of violated valuation axioms over all opens (empty when valid).

    Continuity is automatic: the lattice of opens is finite.
    """
    opens = list(all_upper_sets(xi.space))
    value = {u: mass_in(xi, u) for u in opens}
    violated: list[str] = []
    if value[frozenset()] != 0:
        violated.append("strictness")
    if any(u <= v and value[u] > value[v] for u in opens for v in opens):
        violated.append("monotonicity")
    if any(value[u] + value[v] != value[u | v] + value[u & v] for u in opens for v in opens):
        violated.append("modular law")
    return violated


def uniform_chain_valuation(n: int) -> SimpleValuation:
    """``Σ_{i=1}^{n} (1/n)·η_{i/n}`` on the n-chain; its range has n+1 values."""
    space = chain(n)
    return make_valuation(space, [(x, Fraction(1, n)) for x in space.elements])
