"""Transport feasibility tests: exact max-flow, plans and Hall certificates.

Tests: transport/001-017
Covers: plain and strict feasibility, min-cut Hall subsets, strict slack,
        plan validation, agreement with subset enumeration, flow scaling
        and the residual min cut
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from powerspace.errors import InternalError, NonPositiveCoefficient, SizeLimitExceeded
from powerspace.proptest import strategies as gen
from powerspace.transport import (
    HallViolation,
    TransportInstance,
    TransportPlan,
    brute_force_hall,
    feasible_transport,
    max_flow,
    min_strict_slack,
    validate_plan,
)

from tests.helpers.assertions import assert_plan_valid


def _instance(
    supplies: dict[str, str], capacities: dict[str, str], allowed: list[tuple[str, str]], *, strict: bool = False
) -> TransportInstance:
    return TransportInstance.build(supplies, capacities, allowed, strict=strict)


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.transport
class TestPlainFeasibility:
    """Column sums may reach capacity."""

    def test_split_into_one_column(self) -> None:
        """transport/001: ½ + ½ into a column of 1: feasible, exact plan."""
        inst = _instance({"a": "1/2", "b": "1/2"}, {"top": "1"}, [("a", "top"), ("b", "top")])
        plan = feasible_transport(inst)
        assert isinstance(plan, TransportPlan)
        assert_plan_valid(inst, plan)
        assert plan.get("a", "top") == Fraction(1, 2)
        assert plan.to_json() == {"a⇒top": "1/2", "b⇒top": "1/2"}

    def test_overloaded_column(self) -> None:
        """transport/002: 3/4 + 3/4 into 1: Hall subset {a, b}."""
        inst = _instance({"a": "3/4", "b": "3/4"}, {"top": "1"}, [("a", "top"), ("b", "top")])
        outcome = feasible_transport(inst)
        assert isinstance(outcome, HallViolation)
        assert set(outcome.subset) == {"a", "b"}
        assert outcome.supply == Fraction(3, 2) and outcome.reach_capacity == 1
        assert brute_force_hall(inst) is not None

    def test_unreachable_row(self) -> None:
        """transport/003: A row with no allowed column is its own Hall subset."""
        inst = _instance({"a": "1"}, {"b": "5"}, [])
        outcome = feasible_transport(inst)
        assert isinstance(outcome, HallViolation)
        assert outcome.subset == ("a",) and outcome.reach_capacity == 0

    def test_max_flow_value(self) -> None:
        """transport/004: Flow value is min(total supply, min cut)."""
        inst = _instance({"a": "2", "b": "1/3"}, {"c": "1", "d": "1/2"}, [("a", "c"), ("b", "c"), ("b", "d")])
        assert max_flow(inst).value == Fraction(4, 3)


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.transport
class TestStrictFeasibility:
    """Strict mode: every column sum strictly below capacity."""

    def test_equal_mass_is_not_strict(self) -> None:
        """transport/005: 1 into a column of 1: strict Hall subset, slack 0."""
        inst = _instance({"top": "1"}, {"top": "1"}, [("top", "top")], strict=True)
        outcome = feasible_transport(inst)
        assert isinstance(outcome, HallViolation)
        assert outcome.subset == ("top",) and outcome.strict
        assert min_strict_slack(inst) == (Fraction(0), frozenset({"top"}))

    def test_strict_plan_leaves_room(self) -> None:
        """transport/006: ½ + ¼ into columns 1, ½: strict plan, slack ½ at K = {a}."""
        inst = _instance(
            {"a": "1/2", "b": "1/4"}, {"c": "1", "d": "1/2"}, [("a", "c"), ("b", "c"), ("b", "d")], strict=True
        )
        slack, _ = min_strict_slack(inst)
        assert slack == Fraction(1, 2)
        plan = feasible_transport(inst)
        assert isinstance(plan, TransportPlan)
        assert_plan_valid(inst, plan)

    def test_no_rows(self) -> None:
        """transport/007: Without rows the empty plan is strictly feasible."""
        inst = _instance({}, {"c": "1"}, [], strict=True)
        assert min_strict_slack(inst) is None
        assert feasible_transport(inst) == TransportPlan(())


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.transport
class TestValidation:
    """Plans and certificates validate themselves."""

    def test_validate_plan_reports_problems(self) -> None:
        """transport/008: Wrong row sums, overfull and disallowed entries are all reported."""
        inst = _instance({"a": "1"}, {"c": "1/2"}, [("a", "c")], strict=True)
        bad = TransportPlan(((("a", "c"), Fraction(1, 2)), (("a", "x"), Fraction(1, 4))))
        problems = validate_plan(inst, bad)
        assert any("outside the allowed relation" in p for p in problems)
        assert any(p.startswith("row a") for p in problems)
        assert any(p.startswith("column c") for p in problems)
        assert any(p.startswith("column x") for p in problems)

    def test_malformed_certificates(self) -> None:
        """transport/009: Non-violations and non-positive amounts are rejected."""
        with pytest.raises(InternalError):
            HallViolation(subset=("a",), supply=Fraction(1), reach_capacity=Fraction(2))
        with pytest.raises(InternalError):
            HallViolation(subset=(), supply=Fraction(2), reach_capacity=Fraction(1))
        with pytest.raises(NonPositiveCoefficient):
            _instance({"a": "0"}, {}, [])

    def test_brute_force_row_cap(self) -> None:
        """transport/010: Subset enumeration refuses more than 16 rows."""
        rows = {f"r{i}": "1" for i in range(17)}
        with pytest.raises(SizeLimitExceeded):
            brute_force_hall(_instance(rows, {"c": "1"}, []))


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.transport
class TestSmallInstances:
    """Hand-checked instances."""

    def test_empty_relation_has_zero_flow(self) -> None:
        """transport/011: No allowed pairs: flow value 0."""
        assert max_flow(_instance({"a": "1"}, {"c": "1"}, [])).value == 0

    def test_column_bottleneck(self) -> None:
        """transport/012: ½ + ½ into a column of ¾: flow ¾."""
        inst = _instance({"b1": "1/2", "b2": "1/2"}, {"c": "3/4"}, [("b1", "c"), ("b2", "c")])
        assert max_flow(inst).value == Fraction(3, 4)

    def test_forced_plan(self) -> None:
        """transport/013: b1 only reaches c1, so b2 must use c2."""
        inst = _instance(
            {"b1": "1/2", "b2": "1/2"},
            {"c1": "1/2", "c2": "1/2"},
            [("b1", "c1"), ("b2", "c1"), ("b2", "c2")],
        )
        plan = feasible_transport(inst)
        assert isinstance(plan, TransportPlan)
        assert plan.get("b1", "c1") == Fraction(1, 2)
        assert plan.get("b2", "c2") == Fraction(1, 2)
        assert plan.get("b2", "c1") == 0

    def test_single_cell_strictness(self) -> None:
        """transport/014: a:1 into c:1 is feasible, but not strictly."""
        plain = _instance({"a": "1"}, {"c": "1"}, [("a", "c")])
        strict = _instance({"a": "1"}, {"c": "1"}, [("a", "c")], strict=True)
        assert feasible_transport(plain) == TransportPlan(((("a", "c"), Fraction(1)),))
        violation = feasible_transport(strict)
        assert isinstance(violation, HallViolation)
        assert violation.subset == ("a",) and violation.supply == violation.reach_capacity == 1

    def test_cut_matches_flow_value(self) -> None:
        """transport/015: value = r(rows outside the cut) + cap(R(cut rows))."""
        inst = _instance(
            {"b1": "1/2", "b2": "3/4", "b3": "1/3"},
            {"c1": "1/2", "c2": "1/4"},
            [("b1", "c1"), ("b2", "c1"), ("b2", "c2")],
        )
        flow = max_flow(inst)
        assert flow.cut_rows == frozenset({"b1", "b2", "b3"})
        outside = set(inst.rows) - flow.cut_rows
        assert flow.value == inst.supply_of(outside) + inst.capacity_of(inst.reach(flow.cut_rows))
        assert flow.value == Fraction(3, 4)


@pytest.mark.auto
@pytest.mark.property
@pytest.mark.transport
class TestFlowLaws:
    """Generated instances."""

    @given(gen.transport_instances(), gen.rationals())
    def test_value_scales(self, inst: TransportInstance, k: Fraction) -> None:
        """transport/016: Scaling every supply and capacity by k scales the flow by k."""
        scaled = TransportInstance.build(
            {b: k * r for b, r in inst.supplies},
            {c: k * s for c, s in inst.capacities},
            inst.allowed,
        )
        assert max_flow(scaled).value == k * max_flow(inst).value

    @given(gen.transport_instances())
    def test_cut_certifies_value(self, inst: TransportInstance) -> None:
        """transport/017: The source side of the residual graph is a minimum cut."""
        flow = max_flow(inst)
        outside = set(inst.rows) - flow.cut_rows
        assert flow.value == inst.supply_of(outside) + inst.capacity_of(inst.reach(flow.cut_rows))
        assert flow.value <= inst.total_supply
