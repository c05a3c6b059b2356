"""Hypothesis strategies for posets, valuations, families, maps and programs.

Strategies that need a concrete space take it as an argument; callers
draw the poset first (or pin it, in exhaustive runs).
"""

from __future__ import annotations

import functools
from fractions import Fraction

import hypothesis.strategies as st

from powerspace.cone import MonotoneMap, rational_cone
from powerspace.config import get_settings
from powerspace.poset import FinitePoset, all_upper_sets, chain, enumerate_posets
from powerspace.relations import DirectedFamily
from powerspace.semantics.program import Bind, Choice, Par, Program, Ret, Scale
from powerspace.transport import TransportInstance
from powerspace.valuation import SimpleValuation, add, make_valuation

# ---------------------------------------------------------------------------
# Posets and scalars
# ---------------------------------------------------------------------------


@functools.cache
def poset_catalogue(max_elements: int) -> tuple[FinitePoset, ...]:
    """Every poset on 1..max_elements points, up to isomorphism."""
    return tuple(enumerate_posets(max_elements))


def posets(max_elements: int | None = None) -> st.SearchStrategy[FinitePoset]:
    return st.sampled_from(poset_catalogue(max_elements or get_settings().max_elements))


def rationals(max_denominator: int | None = None, max_value: int = 2) -> st.SearchStrategy[Fraction]:
    """Positive rationals ``p/q`` with ``q ≤ max_denominator`` and value ``≤ max_value``."""
    q_max = max_denominator or get_settings().max_denominator
    return st.integers(1, q_max).flatmap(
        lambda q: st.integers(1, q * max_value).map(lambda p: Fraction(p, q))
    )


def fractions_in_unit(denominator: int = 8) -> st.SearchStrategy[Fraction]:
    """``k/denominator`` strictly between 0 and 1."""
    return st.integers(1, denominator - 1).map(lambda k: Fraction(k, denominator))


def scalars() -> st.SearchStrategy[Fraction]:
    return st.one_of(st.just(Fraction(0)), st.just(Fraction(1)), rationals())


# ---------------------------------------------------------------------------
# Valuations
# ---------------------------------------------------------------------------


@st.composite
def valuations(
    draw: st.DrawFn,
    space: FinitePoset,
    *,
    max_support: int | None = None,
    max_denominator: int | None = None,
    allow_zero: bool = True,
) -> SimpleValuation:
    limit = min(max_support or get_settings().max_support, len(space))
    points = draw(
        st.lists(
            st.sampled_from(space.elements),
            min_size=0 if allow_zero else 1,
            max_size=limit,
            unique=True,
        )
    )
    coefficients = draw(
        st.lists(rationals(max_denominator), min_size=len(points), max_size=len(points))
    )
    return make_valuation(space, zip(points, coefficients, strict=True))


@st.composite
def below(draw: st.DrawFn, xi: SimpleValuation, *, strict: bool = False) -> SimpleValuation:
    """A valuation ``≤ ξ`` (``⋘ ξ`` when ``strict``).

    Each support point is dropped or moved down, and its coefficient is
    multiplied by a factor ``≤ 1`` (``< 1`` when ``strict``).
    """
    space = xi.space
    entries = []
    for b, r in xi.mass:
        if not draw(st.booleans()):
            continue
        d = draw(st.sampled_from(space.sort(space.principal_down[b])))
        factor = draw(fractions_in_unit() if strict else st.one_of(fractions_in_unit(), st.just(Fraction(1))))
        entries.append((d, r * factor))
    return make_valuation(space, entries)


@st.composite
def above(draw: st.DrawFn, xi: SimpleValuation) -> SimpleValuation:
    """A valuation ``≥ ξ``: points moved up, coefficients grown, maybe extra mass."""
    space = xi.space
    entries = []
    for b, r in xi.mass:
        c = draw(st.sampled_from(space.sort(space.principal_up[b])))
        factor = draw(st.sampled_from([Fraction(1), Fraction(9, 8), Fraction(3, 2), Fraction(2)]))
        entries.append((c, r * factor))
    lifted = make_valuation(space, entries)
    extra = draw(valuations(space, max_support=1))
    return add(lifted, extra)


@st.composite
def valuation_pairs(
    draw: st.DrawFn, space: FinitePoset
) -> tuple[SimpleValuation, SimpleValuation]:
    """Independent pairs mixed with dominated ones, so both verdicts occur."""
    xi = draw(valuations(space))
    mode = draw(st.sampled_from(["independent", "above", "below"]))
    if mode == "above":
        return xi, draw(above(xi))
    if mode == "below":
        return draw(below(xi, strict=draw(st.booleans()))), xi
    return xi, draw(valuations(space))


@st.composite
def directed_families(
    draw: st.DrawFn, space: FinitePoset, *, max_members: int = 4
) -> DirectedFamily:
    """A chain of increasing valuations plus side members below its top."""
    current = draw(valuations(space, max_support=2))
    members = [current]
    for _ in range(draw(st.integers(0, max_members - 1))):
        current = add(current, draw(valuations(space, max_support=1, allow_zero=False)))
        members.append(current)
    top = members[-1]
    members += draw(st.lists(below(top), max_size=2))
    return DirectedFamily.of(members)


# ---------------------------------------------------------------------------
# Monotone maps
# ---------------------------------------------------------------------------


@st.composite
def cone_maps(draw: st.DrawFn, space: FinitePoset) -> MonotoneMap:
    """``f(x) = Σ_{y ≤ x} w_y`` with ``w ≥ 0``: monotone into the rationals."""
    weight = {
        y: draw(st.one_of(st.just(Fraction(0)), rationals(4))) for y in space.elements
    }
    graph = {
        x: sum((weight[y] for y in space.principal_down[x]), Fraction(0)) for x in space.elements
    }
    return MonotoneMap.build(space, rational_cone(), graph)


@st.composite
def chain_maps(draw: st.DrawFn, space: FinitePoset, *, max_opens: int = 3) -> MonotoneMap:
    """``f(x)`` = how many of the drawn upper sets contain ``x``, as a chain point."""
    opens = list(all_upper_sets(space))
    chosen = draw(st.lists(st.sampled_from(opens), min_size=1, max_size=max_opens))
    m = len(chosen) + 1
    target = chain(m)
    graph = {x: f"{sum(x in u for u in chosen) + 1}/{m}" for x in space.elements}
    return MonotoneMap.build(space, target, graph)


@st.composite
def chain_endomaps(draw: st.DrawFn, source: FinitePoset, *, max_length: int = 4) -> MonotoneMap:
    """A nondecreasing map from a chain onto a fresh chain."""
    m = draw(st.integers(1, max_length))
    target = chain(m)
    levels = sorted(draw(st.lists(st.integers(1, m), min_size=len(source), max_size=len(source))))
    ordered = sorted(source.elements, key=lambda x: len(source.principal_down[x]))
    graph = {x: f"{level}/{m}" for x, level in zip(ordered, levels, strict=True)}
    return MonotoneMap.build(source, target, graph)


# ---------------------------------------------------------------------------
# Transport instances
# ---------------------------------------------------------------------------


@st.composite
def transport_instances(
    draw: st.DrawFn, *, max_rows: int = 4, max_cols: int = 4, strict: bool = False
) -> TransportInstance:
    """Rows ``b0..`` and columns ``c0..`` with rational amounts and a random relation."""
    n_rows = draw(st.integers(0, max_rows))
    n_cols = draw(st.integers(0, max_cols))
    rows = [f"b{i}" for i in range(n_rows)]
    cols = [f"c{j}" for j in range(n_cols)]
    pairs = [(b, c) for b in rows for c in cols]
    allowed = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return TransportInstance.build(
        {b: draw(rationals()) for b in rows},
        {c: draw(rationals()) for c in cols},
        allowed,
        strict=strict,
    )


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------


def _par_all(programs: list[Program]) -> Program:
    return functools.reduce(Par, programs[1:], programs[0])


@st.composite
def binder_tables(
    draw: st.DrawFn, space: FinitePoset, children: st.SearchStrategy[Program]
) -> tuple[tuple[str, Program], ...]:
    """``k(s) = par of base(t) for t ≤ s``: monotone because mass only accumulates upward."""
    base = {s: draw(children) for s in space.elements}
    return tuple(
        (s, _par_all([base[t] for t in space.sort(space.principal_down[s])]))
        for s in space.elements
    )


def programs(space: FinitePoset, *, max_leaves: int = 5) -> st.SearchStrategy[Program]:
    rets = st.sampled_from(space.elements).map(Ret)
    unit = st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)])

    def extend(children: st.SearchStrategy[Program]) -> st.SearchStrategy[Program]:
        return st.one_of(
            st.builds(Choice, fractions_in_unit(4), children, children),
            st.builds(Scale, unit, children),
            st.builds(Par, children, children),
            st.builds(Bind, children, binder_tables(space, rets)),
        )

    return st.recursive(rets, extend, max_leaves=max_leaves)


def identity_table(space: FinitePoset) -> tuple[tuple[str, Program], ...]:
    return tuple((s, Ret(s)) for s in space.elements)
