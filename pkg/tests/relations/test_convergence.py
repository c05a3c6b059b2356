"""⇒_P convergence tests: directed families, maxima, lifting decisions.

Tests: relations/020-031
Covers: DirectedFamily validation, family_max, converge_P verdicts with
        assignments or deficits, agreement with the bounded brute force,
        ⇑μ membership and the c-space approximating chain
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from powerspace.errors import NotDirected, SpaceMismatch
from powerspace.poset import FinitePoset
from powerspace.proptest.oracles import converge_P_brute_force, converging_directed_subsets
from powerspace.relations import (
    DirectedFamily,
    c_space_family,
    converge_P,
    family_max,
    is_directed_family,
    leq,
    llcurly,
    waybelow_set,
)
from powerspace.valuation import make_valuation, point_valuation, scale, zero_valuation


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.relations
class TestDirectedFamilies:
    """Families must be nonempty, on one space, and directed under ≤."""

    def test_family_max(self, diamond: FinitePoset) -> None:
        """relations/020: max{½η_a, η_a} = η_a; max{ξ} = ξ."""
        a = point_valuation(diamond, "a")
        assert family_max([scale("1/2", a), a]) == a
        assert family_max(DirectedFamily.of([a])) == a

    def test_incomparable_points_not_directed(self, diamond: FinitePoset) -> None:
        """relations/021: {η_a, η_b} has no upper bound inside: NotDirected."""
        a, b = point_valuation(diamond, "a"), point_valuation(diamond, "b")
        assert not is_directed_family([a, b])
        with pytest.raises(NotDirected):
            DirectedFamily.of([a, b])
        with pytest.raises(NotDirected):
            family_max([a, b])

    def test_empty_and_mixed_families(self, diamond: FinitePoset, chain3: FinitePoset) -> None:
        """relations/022: Empty families and mixed spaces are rejected."""
        with pytest.raises(NotDirected):
            DirectedFamily(members=())
        with pytest.raises(SpaceMismatch):
            DirectedFamily.of([point_valuation(diamond, "a"), point_valuation(chain3, "1/3")])

    def test_duplicates_collapse(self, diamond: FinitePoset) -> None:
        """relations/023: DirectedFamily.of drops repeated members."""
        a = point_valuation(diamond, "a")
        assert DirectedFamily.of([a, a, a]).members == (a,)


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.relations
class TestConvergeP:
    """𝒟 ⇒_P ξ iff support points lift into max 𝒟 without losing mass."""

    def test_top_family_lifts_point(self, diamond: FinitePoset) -> None:
        """relations/024: {η_⊤} ⇒_P η_a with assignment a ↦ ⊤."""
        top, a = point_valuation(diamond, "top"), point_valuation(diamond, "a")
        result = converge_P([top], a)
        assert result.verdict
        assert result.assignment == (("a", "top"),)
        assert result.to_json() == {"verdict": True, "family_max": "1·η_top", "assignment": {"a": "top"}}

    def test_mass_deficit(self, diamond: FinitePoset) -> None:
        """relations/025: {½η_⊤} ⇏_P η_⊤; deficit ½ on U = {⊤}."""
        top = point_valuation(diamond, "top")
        result = converge_P([scale("1/2", top)], top)
        assert not result
        assert result.separating_upper_set == ("top",)
        assert result.deficit == Fraction(1, 2)

    def test_singleton_family_is_reflexive(self, diamond: FinitePoset) -> None:
        """relations/026: {ξ} ⇒_P ξ with the identity assignment."""
        xi = make_valuation(diamond, {"bot": "1/4", "b": "3/4"})
        result = converge_P([xi], xi)
        assert result.verdict
        assert all(diamond.leq(b, m) for b, m in result.assignment)

    def test_zero_target(self, diamond: FinitePoset) -> None:
        """relations/027: Every family converges to the zero valuation."""
        family = [point_valuation(diamond, "bot")]
        result = converge_P(family, zero_valuation(diamond))
        assert result.verdict and result.assignment == ()

    @pytest.mark.parametrize(
        ("family", "target", "expected"),
        [
            ([{"top": "1"}], {"a": "1"}, True),
            ([{"top": "1/2"}], {"top": "1"}, False),
            ([{"a": "1/2"}, {"a": "1/2", "b": "1/2"}], {"bot": "1"}, True),
            ([{"a": "1/2"}, {"a": "1"}], {"a": "1/2", "b": "1/2"}, False),
            ([{"bot": "1/4"}, {"top": "1"}], {"a": "3/4"}, True),
        ],
    )
    def test_agrees_with_brute_force(
        self, diamond: FinitePoset, family: list[dict[str, str]], target: dict[str, str], expected: bool
    ) -> None:
        """relations/028: Lifting decision equals the bounded ⇒_P definition."""
        members = [make_valuation(diamond, m) for m in family]
        xi = make_valuation(diamond, target)
        assert converge_P(members, xi).verdict is expected
        assert converge_P_brute_force(members, xi) is expected
        assert leq(xi, family_max(members)).verdict is expected

    def test_converging_subsets(self, diamond: FinitePoset) -> None:
        """relations/029: Directed subsets converging to a have maxima in ↑a."""
        found = converging_directed_subsets(diamond, "a", 2)
        assert frozenset({"a"}) in found and frozenset({"bot", "top"}) in found
        assert frozenset({"b"}) not in found and frozenset({"a", "b"}) not in found


@pytest.mark.quick
@pytest.mark.auto
@pytest.mark.relations
class TestWayBelowSets:
    """⇑μ = {ν : μ ⋘ ν} and the approximating chain (k/n)·ξ."""

    def test_waybelow_set(self, diamond: FinitePoset) -> None:
        """relations/030: ⇑(½η_⊥) keeps η_⊤ and η_a, drops ½η_⊤."""
        mu = make_valuation(diamond, {"bot": "1/2"})
        top, a = point_valuation(diamond, "top"), point_valuation(diamond, "a")
        half_top = scale("1/2", top)
        assert waybelow_set(mu, [top, half_top, a]) == [top, a]

    def test_c_space_family(self, diamond: FinitePoset) -> None:
        """relations/031: 0, ¼ξ, ½ξ, ¾ξ is directed and each member ⋘ ξ."""
        xi = make_valuation(diamond, {"a": "1/2", "top": "1"})
        family = c_space_family(xi)
        assert len(family.members) == 4
        assert family_max(family) == scale("3/4", xi)
        assert all(llcurly(member, xi) for member in family.members)
