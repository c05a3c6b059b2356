"""Program syntax: probabilistic choice over a finite state poset.

    expr := ret <state>
          | choice <p/q> <expr> <expr>
          | scale <p/q> <expr>
          | par <expr> <expr>
          | bind <expr> {<state> -> <expr>, ...}
          | ( <expr> )

Binders are finite tables, never code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from powerspace.errors import PreconditionFailed
from powerspace.valuation import format_rational


@dataclass(frozen=True)
class Ret:
    state: str

    def __str__(self) -> str:
        return f"ret {self.state}"


@dataclass(frozen=True)
class Choice:
    p: Fraction
    left: Program
    right: Program

    def __post_init__(self) -> None:
        if not 0 < self.p < 1:
            raise PreconditionFailed(f"choice probability {format_rational(self.p)} is not in (0, 1)")

    def __str__(self) -> str:
        return f"choice {format_rational(self.p)} ({self.left}) ({self.right})"


@dataclass(frozen=True)
class Scale:
    a: Fraction
    body: Program

    def __post_init__(self) -> None:
        if self.a < 0:
            raise PreconditionFailed(f"scale factor {format_rational(self.a)} is negative")

    def __str__(self) -> str:
        return f"scale {format_rational(self.a)} ({self.body})"


@dataclass(frozen=True)
class Par:
    left: Program
    right: Program

    def __str__(self) -> str:
        return f"par ({self.left}) ({self.right})"


@dataclass(frozen=True)
class Bind:
    body: Program
    table: tuple[tuple[str, Program], ...]

    @cached_property
    def binder(self) -> dict[str, Program]:
        return dict(self.table)

    def __str__(self) -> str:
        entries = ", ".join(f"{s} -> {k}" for s, k in self.table)
        return f"bind ({self.body}) {{{entries}}}"


Program = Ret | Choice | Scale | Par | Bind


def pretty(program: Program) -> str:
    """Render ``program`` in the surface grammar; ``parse(pretty(p)) == p``."""
    return str(program)


def states(program: Program) -> set[str]:
    """Every state the program mentions, binder keys included."""
    match program:
        case Ret(state):
            return {state}
        case Choice(_, left, right) | Par(left, right):
            return states(left) | states(right)
        case Scale(_, body):
            return states(body)
        case Bind(body, table):
            found = states(body)
            for s, k in table:
                found |= {s} | states(k)
            return found
    raise TypeError(f"not a program: {program!r}")
