"""Exact transportation feasibility and bipartite max-flow.

Supplies and capacities are rationals. The solver clears denominators,
runs an integer shortest-augmenting-path max-flow (networkx Edmonds-Karp)
on

    source --r_b--> row b --(∞, if (b, c) allowed)--> col c --s_c--> sink

and rescales. Integer capacities give integer flows, so every plan is
exact. When the supplies cannot be routed, the rows on the source side of
the minimum cut form a Hall violation: their supply exceeds the capacity
of the columns they reach.

Strict mode asks for column sums strictly below capacity. It is decided
by the strict Hall condition ``r(K) < cap(R(K))`` for every nonempty row
set ``K``; the minimum slack over nonempty ``K`` is found with one
forced-row flow per row, and the witness plan is obtained by shrinking
every capacity by ``slack / (2·|cols|)`` and solving non-strictly.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from powerspace.errors import InternalError, NonPositiveCoefficient, SizeLimitExceeded
from powerspace.valuation import format_rational, to_fraction

logger = logging.getLogger(__name__)

_SOURCE = ("source", "")
_SINK = ("sink", "")
_BRUTE_FORCE_ROW_CAP = 16


# ---------------------------------------------------------------------------
# Types (immutable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportInstance:
    """Rows with supplies, columns with capacities, and the allowed pairs."""

    supplies: tuple[tuple[str, Fraction], ...]
    capacities: tuple[tuple[str, Fraction], ...]
    allowed: frozenset[tuple[str, str]]
    strict: bool = False

    def __post_init__(self) -> None:
        for label, amount in (*self.supplies, *self.capacities):
            if amount <= 0:
                raise NonPositiveCoefficient(
                    f"supply/capacity of {label!r} must be positive, got {format_rational(amount)}",
                    element=label,
                )

    @classmethod
    def build(
        cls,
        supplies: Mapping[str, object],
        capacities: Mapping[str, object],
        allowed: Iterable[tuple[str, str]],
        *,
        strict: bool = False,
    ) -> TransportInstance:
        rows = tuple((b, to_fraction(r)) for b, r in supplies.items())
        cols = tuple((c, to_fraction(s)) for c, s in capacities.items())
        row_ids, col_ids = {b for b, _ in rows}, {c for c, _ in cols}
        pairs = frozenset((b, c) for b, c in allowed if b in row_ids and c in col_ids)
        return cls(supplies=rows, capacities=cols, allowed=pairs, strict=strict)

    @cached_property
    def rows(self) -> tuple[str, ...]:
        return tuple(b for b, _ in self.supplies)

    @cached_property
    def cols(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.capacities)

    @cached_property
    def supply(self) -> dict[str, Fraction]:
        return dict(self.supplies)

    @cached_property
    def capacity(self) -> dict[str, Fraction]:
        return dict(self.capacities)

    @property
    def total_supply(self) -> Fraction:
        return sum(self.supply.values(), Fraction(0))

    def reach(self, rows: Iterable[str]) -> frozenset[str]:
        """``R(K)``: columns allowed for some row of ``K``."""
        ks = set(rows)
        return frozenset(c for b, c in self.allowed if b in ks)

    def supply_of(self, rows: Iterable[str]) -> Fraction:
        return sum((self.supply[b] for b in set(rows)), Fraction(0))

    def capacity_of(self, cols: Iterable[str]) -> Fraction:
        return sum((self.capacity[c] for c in set(cols)), Fraction(0))

    def slack(self, rows: Iterable[str]) -> Fraction:
        ks = frozenset(rows)
        return self.capacity_of(self.reach(ks)) - self.supply_of(ks)


@dataclass(frozen=True)
class TransportPlan:
    """Entries ``t_{b,c} > 0``; absent pairs carry zero."""

    entries: tuple[tuple[tuple[str, str], Fraction], ...]

    @cached_property
    def _by_pair(self) -> dict[tuple[str, str], Fraction]:
        return dict(self.entries)

    def get(self, b: str, c: str) -> Fraction:
        return self._by_pair.get((b, c), Fraction(0))

    def row_sum(self, b: str) -> Fraction:
        return sum((t for (row, _), t in self.entries if row == b), Fraction(0))

    def col_sum(self, c: str) -> Fraction:
        return sum((t for (_, col), t in self.entries if col == c), Fraction(0))

    def to_json(self) -> dict[str, str]:
        return {f"{b}⇒{c}": format_rational(t) for (b, c), t in self.entries}


@dataclass(frozen=True)
class HallViolation:
    """Rows ``K`` whose supply meets (strict) or exceeds their reachable capacity."""

    subset: tuple[str, ...]
    supply: Fraction
    reach_capacity: Fraction
    strict: bool = False

    def __post_init__(self) -> None:
        holds = (
            self.supply >= self.reach_capacity if self.strict else self.supply > self.reach_capacity
        )
        if not self.subset or not holds:
            raise InternalError(
                f"not a Hall violation: K={list(self.subset)}, "
                f"supply {format_rational(self.supply)}, "
                f"reach {format_rational(self.reach_capacity)}, strict={self.strict}"
            )

    def to_json(self) -> dict[str, object]:
        return {
            "hall_subset": list(self.subset),
            "supply": format_rational(self.supply),
            "reach_capacity": format_rational(self.reach_capacity),
        }


@dataclass(frozen=True)
class FlowResult:
    """A maximum flow and the row side of a minimum cut."""

    value: Fraction
    plan: TransportPlan
    cut_rows: frozenset[str]


# ---------------------------------------------------------------------------
# Max-flow
# ---------------------------------------------------------------------------


def _scale_factor(amounts: Iterable[Fraction]) -> int:
    return math.lcm(1, *(q.denominator for q in amounts))


def _solve(instance: TransportInstance, forced_row: str | None = None) -> FlowResult:
    """Run the integer max-flow; ``forced_row`` gets an uncapacitated source edge."""
    scale = _scale_factor((*instance.supply.values(), *instance.capacity.values()))
    graph = nx.DiGraph()
    graph.add_node(_SOURCE)
    graph.add_node(_SINK)
    for b, r in instance.supplies:
        if b == forced_row:
            graph.add_edge(_SOURCE, ("row", b))
        else:
            graph.add_edge(_SOURCE, ("row", b), capacity=int(r * scale))
    for c, s in instance.capacities:
        graph.add_edge(("col", c), _SINK, capacity=int(s * scale))
    for b, c in sorted(instance.allowed):
        # no capacity attribute: networkx treats the edge as infinite
        graph.add_edge(("row", b), ("col", c))

    residual = edmonds_karp(graph, _SOURCE, _SINK)
    value = Fraction(residual.graph["flow_value"], scale)

    entries = []
    for b, c in sorted(instance.allowed):
        units = residual[("row", b)][("col", c)]["flow"]
        if units > 0:
            entries.append(((b, c), Fraction(units, scale)))

    reachable = _source_side(residual)
    cut_rows = frozenset(name for kind, name in reachable if kind == "row")
    logger.debug(
        "max-flow: %d rows, %d cols, value %s, cut rows %s",
        len(instance.rows),
        len(instance.cols),
        format_rational(value),
        sorted(cut_rows),
    )
    return FlowResult(value=value, plan=TransportPlan(tuple(entries)), cut_rows=cut_rows)


def _source_side(residual: nx.DiGraph) -> set[tuple[str, str]]:
    """Nodes reachable from the source through unsaturated residual edges."""
    unsaturated = nx.DiGraph()
    unsaturated.add_node(_SOURCE)
    unsaturated.add_edges_from(
        (u, v) for u, v, attr in residual.edges(data=True) if attr["flow"] < attr["capacity"]
    )
    return {_SOURCE} | nx.descendants(unsaturated, _SOURCE)


def max_flow(instance: TransportInstance) -> FlowResult:
    """Maximum flow of the bipartite network; ``value = min(Σ supplies, min cut)``."""
    return _solve(instance)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------


def min_strict_slack(instance: TransportInstance) -> tuple[Fraction, frozenset[str]] | None:
    """``min_{K ≠ ∅} cap(R(K)) − r(K)`` and a minimizing ``K``; None without rows.

    Forcing row ``b`` onto the source side turns the minimum cut into
    ``min_{K ∋ b} r_total − r(K) + cap(R(K))``.
    """
    if not instance.rows:
        return None
    total = instance.total_supply
    best: tuple[Fraction, frozenset[str]] | None = None
    for b in instance.rows:
        result = _solve(instance, forced_row=b)
        slack = result.value - total
        if best is None or slack < best[0]:
            best = (slack, result.cut_rows)
    assert best is not None
    return best


def feasible_transport(instance: TransportInstance) -> TransportPlan | HallViolation:
    """A plan satisfying the instance's mode, or a Hall certificate refuting it."""
    if instance.strict:
        return _feasible_strict(instance)
    return _feasible_plain(instance)


def _feasible_plain(instance: TransportInstance) -> TransportPlan | HallViolation:
    result = _solve(instance)
    total = instance.total_supply
    if result.value == total:
        return result.plan
    k = result.cut_rows
    return HallViolation(
        subset=tuple(b for b in instance.rows if b in k),
        supply=instance.supply_of(k),
        reach_capacity=instance.capacity_of(instance.reach(k)),
    )


def _feasible_strict(instance: TransportInstance) -> TransportPlan | HallViolation:
    found = min_strict_slack(instance)
    if found is None:
        return TransportPlan(())
    slack, k = found
    if slack <= 0:
        return HallViolation(
            subset=tuple(b for b in instance.rows if b in k),
            supply=instance.supply_of(k),
            reach_capacity=instance.capacity_of(instance.reach(k)),
            strict=True,
        )

    eps = slack / (2 * len(instance.cols))
    logger.debug("strict transport: slack %s, shrink by %s", format_rational(slack), format_rational(eps))
    shrunk = TransportInstance(
        supplies=instance.supplies,
        capacities=tuple((c, s - eps) for c, s in instance.capacities if s > eps),
        allowed=frozenset((b, c) for b, c in instance.allowed if instance.capacity[c] > eps),
    )
    plan = _feasible_plain(shrunk)
    if isinstance(plan, HallViolation):
        raise InternalError(
            f"shrunk instance infeasible despite strict slack {format_rational(slack)}",
            hall_subset=list(plan.subset),
        )
    return plan


# ---------------------------------------------------------------------------
# Verification and oracles
# ---------------------------------------------------------------------------


def validate_plan(instance: TransportInstance, plan: TransportPlan) -> list[str]:
    """Violations of the instance's constraints by ``plan`` (empty when valid)."""
    problems: list[str] = []
    for (b, c), t in plan.entries:
        if t < 0:
            problems.append(f"negative entry t({b},{c})={format_rational(t)}")
        if t != 0 and (b, c) not in instance.allowed:
            problems.append(f"entry t({b},{c}) outside the allowed relation")
    for b, r in instance.supplies:
        got = plan.row_sum(b)
        if got != r:
            problems.append(f"row {b}: sum {format_rational(got)} != supply {format_rational(r)}")
    col_ids = set(instance.cols)
    for (_, c), _t in plan.entries:
        if c not in col_ids:
            problems.append(f"column {c} is not part of the instance")
    for c, s in instance.capacities:
        got = plan.col_sum(c)
        if got > s or (instance.strict and got == s):
            op = "<" if instance.strict else "<="
            problems.append(
                f"column {c}: sum {format_rational(got)} not {op} capacity {format_rational(s)}"
            )
    return problems


def brute_force_hall(instance: TransportInstance) -> HallViolation | None:
    """The first violating nonempty ``K`` by subset enumeration, or None.

    Subsets are visited by size, then in row order.

    Raises:
        SizeLimitExceeded: With more than 16 rows.
    """
    rows = instance.rows
    if len(rows) > _BRUTE_FORCE_ROW_CAP:
        raise SizeLimitExceeded(
            f"{len(rows)} rows; subset enumeration cap is {_BRUTE_FORCE_ROW_CAP}",
            size=len(rows),
            cap=_BRUTE_FORCE_ROW_CAP,
        )
    for size in range(1, len(rows) + 1):
        for k in itertools.combinations(rows, size):
            supply = instance.supply_of(k)
            reach = instance.capacity_of(instance.reach(k))
            if supply > reach or (instance.strict and supply == reach):
                return HallViolation(subset=k, supply=supply, reach_capacity=reach, strict=instance.strict)
    return None
