"""Finite posets as directed spaces.

A finite T0 space is determined by its specialization order: its opens
are exactly the upper sets. ``FinitePoset`` therefore stores only the
order; every topological question is answered with up-sets.

Element identifiers are opaque strings. All enumerations follow the
lexicographic order of identifiers so outputs are reproducible.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from powerspace.config import get_settings
from powerspace.errors import (
    CycleError,
    DuplicateElement,
    NotDirected,
    SizeLimitExceeded,
    UnknownElement,
)

logger = logging.getLogger(__name__)

Subset = frozenset[str]


# ---------------------------------------------------------------------------
# Types (immutable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePoset:
    """A finite partial order; its opens are the upper sets.

    ``relation`` is the full reflexive-transitive closure. ``generators``
    keeps the user-given pairs for serialization and does not take part
    in equality.
    """

    elements: tuple[str, ...]
    relation: frozenset[tuple[str, str]]
    name: str = "P"
    generators: tuple[tuple[str, str], ...] = field(default=(), compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def leq(self, x: str, y: str) -> bool:
        return (x, y) in self.relation

    def less(self, x: str, y: str) -> bool:
        return x != y and (x, y) in self.relation

    @cached_property
    def _index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def carrier(self) -> Subset:
        return frozenset(self.elements)

    @cached_property
    def principal_up(self) -> dict[str, Subset]:
        """``↑x`` for every element (equal to int(↑x) at finite scale)."""
        ups: dict[str, set[str]] = {x: set() for x in self.elements}
        for x, y in self.relation:
            ups[x].add(y)
        return {x: frozenset(s) for x, s in ups.items()}

    @cached_property
    def principal_down(self) -> dict[str, Subset]:
        downs: dict[str, set[str]] = {x: set() for x in self.elements}
        for x, y in self.relation:
            downs[y].add(x)
        return {x: frozenset(s) for x, s in downs.items()}

    def check(self, subset: Iterable[str]) -> Subset:
        """Return ``subset`` as a frozenset, rejecting unknown identifiers."""
        s = frozenset(subset)
        unknown = sorted(s - self.carrier)
        if unknown:
            raise UnknownElement(
                f"elements not in poset {self.name!r}: {unknown}", elements=unknown
            )
        return s

    def sort(self, subset: Iterable[str]) -> list[str]:
        """Sort identifiers in the canonical (lexicographic) order."""
        return sorted(subset, key=self._index.__getitem__)


@dataclass(frozen=True)
class DirectedSubset:
    """A nonempty subset in which every pair has an upper bound."""

    poset: FinitePoset
    members: Subset

    def __post_init__(self) -> None:
        if not is_directed_subset(self.poset, self.members):
            raise NotDirected(
                f"subset {self.poset.sort(self.members)} is not directed",
                members=self.poset.sort(self.members),
            )

    @property
    def maximum(self) -> str:
        top = maximum(self.poset, self.members)
        assert top is not None  # guaranteed by directedness
        return top


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def build_poset(
    elements: Iterable[str],
    pairs: Iterable[tuple[str, str]] = (),
    *,
    name: str = "P",
) -> FinitePoset:
    """Build a poset from generating pairs ``(x, y)`` meaning ``x ≤ y``.

    Raises:
        DuplicateElement: If an identifier repeats.
        UnknownElement: If a pair mentions an undeclared identifier.
        CycleError: If the closure relates two distinct elements both ways.
    """
    elems = list(elements)
    seen: set[str] = set()
    for x in elems:
        if x in seen:
            raise DuplicateElement(f"duplicate element {x!r}", element=x)
        seen.add(x)

    gens = tuple((str(x), str(y)) for x, y in pairs)
    unknown = sorted({z for pair in gens for z in pair} - seen)
    if unknown:
        raise UnknownElement(f"pairs mention unknown elements: {unknown}", elements=unknown)

    graph = nx.DiGraph()
    graph.add_nodes_from(elems)
    graph.add_edges_from((x, y) for x, y in gens if x != y)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        raise CycleError(f"order relation has a cycle through {sorted(cycle)}", cycle=sorted(cycle))

    closure = nx.transitive_closure_dag(graph)
    relation = frozenset(closure.edges()) | frozenset((x, x) for x in elems)
    ordered = tuple(sorted(elems))
    logger.debug("built poset %s: %d elements, %d order pairs", name, len(ordered), len(relation))
    return FinitePoset(elements=ordered, relation=relation, name=name, generators=gens)


def chain(n: int, *, name: str | None = None) -> FinitePoset:
    """The n-chain ``1/n < 2/n < ... < n/n``."""
    labels = [f"{i}/{n}" for i in range(1, n + 1)]
    return build_poset(labels, itertools.pairwise(labels), name=name or f"chain{n}")


def antichain(labels: Iterable[str], *, name: str = "antichain") -> FinitePoset:
    return build_poset(labels, (), name=name)


# ---------------------------------------------------------------------------
# Up-sets, down-sets, opens
# ---------------------------------------------------------------------------


def up_set(poset: FinitePoset, subset: Iterable[str]) -> Subset:
    """``↑S``: every element above some member of ``S``."""
    s = poset.check(subset)
    out: set[str] = set()
    for x in s:
        out |= poset.principal_up[x]
    return frozenset(out)


def down_set(poset: FinitePoset, subset: Iterable[str]) -> Subset:
    """``↓S``: every element below some member of ``S``."""
    s = poset.check(subset)
    out: set[str] = set()
    for x in s:
        out |= poset.principal_down[x]
    return frozenset(out)


def is_upper(poset: FinitePoset, subset: Iterable[str]) -> bool:
    """True iff ``S = ↑S``, i.e. ``S`` is open."""
    s = poset.check(subset)
    return up_set(poset, s) == s


def is_lower(poset: FinitePoset, subset: Iterable[str]) -> bool:
    s = poset.check(subset)
    return down_set(poset, s) == s


def all_upper_sets(poset: FinitePoset, *, cap: int | None = None) -> Iterator[Subset]:
    """Enumerate every upper set exactly once, ``∅`` and the carrier included.

    Upper sets are in bijection with antichains (their minimal elements),
    so the enumeration walks antichains in canonical element order.

    Raises:
        SizeLimitExceeded: If the carrier is larger than ``cap``
            (default: ``settings.enum_cap``).
    """
    limit = get_settings().enum_cap if cap is None else cap
    if len(poset) > limit:
        raise SizeLimitExceeded(
            f"poset {poset.name!r} has {len(poset)} elements; enumeration cap is {limit}",
            size=len(poset),
            cap=limit,
        )
    return _walk_antichains(poset, 0, ())


def _walk_antichains(
    poset: FinitePoset, start: int, chosen: tuple[str, ...]
) -> Iterator[Subset]:
    yield up_set(poset, chosen)
    for i in range(start, len(poset.elements)):
        x = poset.elements[i]
        if all(not poset.leq(x, c) and not poset.leq(c, x) for c in chosen):
            yield from _walk_antichains(poset, i + 1, (*chosen, x))


def hasse_edges(poset: FinitePoset) -> list[tuple[str, str]]:
    """Covering pairs of the order, sorted."""
    graph = nx.DiGraph()
    graph.add_nodes_from(poset.elements)
    graph.add_edges_from((x, y) for x, y in poset.relation if x != y)
    return sorted(nx.transitive_reduction(graph).edges())


# ---------------------------------------------------------------------------
# Directedness and convergence
# ---------------------------------------------------------------------------


def maximum(poset: FinitePoset, subset: Iterable[str]) -> str | None:
    """The unique maximum of ``subset``, or None."""
    s = poset.check(subset)
    for m in poset.sort(s):
        if all(poset.leq(x, m) for x in s):
            return m
    return None


def is_directed_subset(poset: FinitePoset, subset: Iterable[str]) -> bool:
    """Nonempty, and every pair has an upper bound inside the subset."""
    s = poset.check(subset)
    if not s:
        return False
    return all(
        any(poset.leq(x, z) and poset.leq(y, z) for z in s)
        for x, y in itertools.combinations(s, 2)
    )


def converges(poset: FinitePoset, directed: DirectedSubset | Iterable[str], x: str) -> bool:
    """Whether the net indexed by a directed subset converges to ``x``.

    A finite directed net is eventually constant at its maximum ``m``, and
    it converges to ``x`` iff every open containing ``x`` contains ``m``,
    i.e. iff ``x ≤ m``.

    Raises:
        NotDirected: If ``directed`` is a plain subset that is not directed.
    """
    d = directed if isinstance(directed, DirectedSubset) else DirectedSubset(
        poset, poset.check(directed)
    )
    poset.check((x,))
    return poset.leq(x, d.maximum)


def is_c_space(poset: FinitePoset, *, cap: int | None = None) -> bool:
    """Check "x ∈ U open ⟹ ∃y ∈ U with x ∈ int(↑y) ⊆ U" by enumeration."""
    for u in all_upper_sets(poset, cap=cap):
        for x in u:
            if not any(x in poset.principal_up[y] and poset.principal_up[y] <= u for y in u):
                return False
    return True


def is_monotone(
    source: FinitePoset,
    target_leq: Callable[[object, object], bool],
    graph: Mapping[str, object],
) -> bool:
    """``x ≤ y`` in ``source`` implies ``f(x) ≤ f(y)`` under ``target_leq``."""
    return all(
        target_leq(graph[x], graph[y])
        for x, y in source.relation
        if x != y and x in graph and y in graph
    )


# ---------------------------------------------------------------------------
# Exhaustive generation
# ---------------------------------------------------------------------------


def enumerate_posets(max_elements: int, *, min_elements: int = 1) -> Iterator[FinitePoset]:
    """Every poset on ``min_elements..max_elements`` points, up to isomorphism.

    Every poset has a linear extension, so closing each relation on
    ``0 < 1 < ... < n-1`` (pairs ``i < j`` only) reaches every isomorphism
    class; duplicates are dropped by a permutation-minimal canonical form.
    """
    for n in range(min_elements, max_elements + 1):
        slots = list(itertools.combinations(range(n), 2))
        perms = list(itertools.permutations(range(n)))
        seen: set[tuple[tuple[int, int], ...]] = set()
        for mask in range(1 << len(slots)):
            chosen = [slots[k] for k in range(len(slots)) if mask >> k & 1]
            closed = _close_natural(n, chosen)
            canon = min(
                tuple(sorted((p[i], p[j]) for i, j in closed)) for p in perms
            )
            if canon in seen:
                continue
            seen.add(canon)
            labels = [str(i) for i in range(n)]
            yield build_poset(
                labels,
                ((labels[i], labels[j]) for i, j in canon),
                name=f"p{n}_{len(seen)}",
            )
        logger.debug("enumerated %d posets on %d elements", len(seen), n)


def _close_natural(n: int, pairs: list[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    above = [set() for _ in range(n)]
    for i, j in pairs:
        above[i].add(j)
    # pairs respect the natural order, so a reverse sweep closes transitively
    for i in reversed(range(n)):
        for j in list(above[i]):
            above[i] |= above[j]
    return frozenset((i, j) for i in range(n) for j in above[i])
