"""Denotation of programs as simple valuations on the state poset.

``ret`` is the unit ``η``, ``choice``/``scale``/``par`` are cone
operations, and ``bind`` is the free-cone extension of its table.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction

from powerspace.cone import bar_extension, cx_cone
from powerspace.errors import MissingBinderEntry, NonMonotoneBinder
from powerspace.poset import FinitePoset
from powerspace.relations import leq
from powerspace.semantics.parser import check_states
from powerspace.semantics.program import Bind, Choice, Par, Program, Ret, Scale
from powerspace.valuation import SimpleValuation, add, point_valuation, scale

logger = logging.getLogger(__name__)


def denote(program: Program, space: FinitePoset) -> SimpleValuation:
    """The valuation a program denotes.

    Raises:
        UnknownState: If the program mentions a state outside ``space``.
        NonMonotoneBinder: If ``s ≤ s′`` in the table but ``⟦k(s)⟧ ≰ ⟦k(s′)⟧``.
        MissingBinderEntry: If a support state of the bound expression
            has no table entry.
    """
    check_states(program, space)
    return _denote(program, space)


def _denote(program: Program, space: FinitePoset) -> SimpleValuation:
    match program:
        case Ret(state):
            return point_valuation(space, state)
        case Choice(p, left, right):
            return add(scale(p, _denote(left, space)), scale(1 - p, _denote(right, space)))
        case Scale(a, body):
            return scale(a, _denote(body, space))
        case Par(left, right):
            return add(_denote(left, space), _denote(right, space))
        case Bind(body, table):
            return _bind(_denote(body, space), table, space)
    raise TypeError(f"not a program: {program!r}")


def _bind(
    inner: SimpleValuation,
    table: tuple[tuple[str, Program], ...],
    space: FinitePoset,
) -> SimpleValuation:
    values = {s: _denote(k, space) for s, k in table}
    for s, t in itertools.permutations(values, 2):
        if space.less(s, t) and not leq(values[s], values[t]):
            raise NonMonotoneBinder(
                f"{s} ≤ {t} but ⟦k({s})⟧ = {values[s]} is not below ⟦k({t})⟧ = {values[t]}",
                pair=[s, t],
            )
    missing = [b for b in inner.support if b not in values]
    if missing:
        raise MissingBinderEntry(
            f"binder table has no entry for support states {missing}", states=missing
        )
    logger.debug("bind over %d support states, %d table entries", len(inner.support), len(values))
    return bar_extension(cx_cone(space), values.__getitem__, inner)  # type: ignore[return-value]


def expected_mass(program: Program, space: FinitePoset) -> Fraction:
    """Total mass predicted from the program's structure.

    ``ret`` weighs 1, ``choice`` averages, ``scale`` multiplies and ``par``
    adds. A ``bind`` weighs each table entry by the mass the bound
    expression puts on its state.
    """
    match program:
        case Ret():
            return Fraction(1)
        case Choice(p, left, right):
            return p * expected_mass(left, space) + (1 - p) * expected_mass(right, space)
        case Scale(a, body):
            return a * expected_mass(body, space)
        case Par(left, right):
            return expected_mass(left, space) + expected_mass(right, space)
        case Bind(body, table):
            inner = denote(body, space)
            entries = dict(table)
            return sum(
                (r * expected_mass(entries[b], space) for b, r in inner.mass if b in entries),
                Fraction(0),
            )
    raise TypeError(f"not a program: {program!r}")
