"""Named property suites.

A property draws a case (a dict of named values) from a strategy built
around a poset strategy, and its check returns None when the case
passes or a short description of what went wrong. Exhaustive runs pin
the poset strategy to each catalogue poset in turn.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import hypothesis.strategies as st

from powerspace.cone import (
    broken_max_cone,
    check_cone_axioms,
    check_homomorphism,
    compose,
    cx_cone,
    extend,
    identity_map,
    map_pp,
    rational_cone,
)
from powerspace.errors import UnknownSuite
from powerspace.poset import FinitePoset, is_c_space, up_set
from powerspace.proptest import strategies as gen
from powerspace.proptest.oracles import converge_P_brute_force, pointwise_equal, pointwise_leq
from powerspace.relations import (
    c_space_family,
    converge_P,
    family_max,
    interpolate,
    leq,
    llcurly,
    separate,
    transport_instance,
    waybelow_prec,
)
from powerspace.semantics import Bind, Ret, denote, expected_mass, parse, pretty
from powerspace.transport import (
    TransportInstance,
    TransportPlan,
    brute_force_hall,
    feasible_transport,
    max_flow,
    validate_plan,
)
from powerspace.valuation import (
    SimpleValuation,
    check_valuation_axioms,
    equal,
    format_rational,
    mass_in,
    point_valuation,
    value_range,
)

Case = dict[str, Any]
PosetStrategy = st.SearchStrategy[FinitePoset]


@dataclass(frozen=True)
class Property:
    name: str
    suite: str
    cases: Callable[[PosetStrategy], st.SearchStrategy[Case]]
    check: Callable[[Case], str | None]
    max_elements: int | None = None
    per_space: bool = True


def _on(posets: PosetStrategy, build: Callable[[FinitePoset], st.SearchStrategy[Case]]) -> st.SearchStrategy[Case]:
    return posets.flatmap(lambda space: build(space).map(lambda case: {"space": space, **case}))


def _pair(space: FinitePoset) -> st.SearchStrategy[Case]:
    return gen.valuation_pairs(space).map(lambda p: {"xi": p[0], "eta": p[1]})


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------


def _leq_matches_oracle(case: Case) -> str | None:
    decided = leq(case["xi"], case["eta"]).verdict
    expected, u = pointwise_leq(case["xi"], case["eta"])
    if decided != expected:
        return f"flow says {decided}, pointwise oracle says {expected} (U={sorted(u or ())})"
    return None


def _certificate_problems(xi: SimpleValuation, eta: SimpleValuation, strict: bool) -> str | None:
    decision = llcurly(xi, eta) if strict else leq(xi, eta)
    instance = transport_instance(xi, eta, strict=strict)
    if decision.verdict:
        assert decision.witness is not None
        problems = validate_plan(instance, decision.witness)
        return "; ".join(problems) or None
    if decision.hall is not None:
        k = decision.hall.subset
        supply = instance.supply_of(k)
        reach = instance.capacity_of(instance.reach(k))
        if supply < reach or (not strict and supply == reach):
            return f"Hall subset {list(k)} does not refute: {supply} vs {reach}"
    if decision.separating_upper_set is not None:
        u = frozenset(decision.separating_upper_set)
        if up_set(xi.space, u) != u or mass_in(xi, u) <= mass_in(eta, u):
            return f"upper set {sorted(u)} does not separate"
    return None


def _certificates_revalidate(case: Case) -> str | None:
    return _certificate_problems(case["xi"], case["eta"], False) or _certificate_problems(
        case["xi"], case["eta"], True
    )


def _prec_matches_llcurly(case: Case) -> str | None:
    prec = waybelow_prec(case["xi"], case["eta"]).verdict
    strict = llcurly(case["xi"], case["eta"]).verdict
    if prec != strict:
        return f"≺ gives {prec}, ⋘ gives {strict}"
    return None


def _flow_matches_brute_force(case: Case) -> str | None:
    for strict in (False, True):
        instance = transport_instance(case["xi"], case["eta"], strict=strict)
        flow_ok = isinstance(feasible_transport(instance), TransportPlan)
        brute_ok = brute_force_hall(instance) is None
        if flow_ok != brute_ok:
            return f"strict={strict}: flow {flow_ok}, subset enumeration {brute_ok}"
    return None


def _leq_is_partial_order(case: Case) -> str | None:
    xi, eta, zeta = case["xi"], case["eta"], case["zeta"]
    if not leq(xi, xi):
        return "not reflexive"
    if leq(xi, eta) and leq(eta, xi) and not equal(xi, eta):
        return "not antisymmetric"
    if leq(xi, eta) and leq(eta, zeta) and not leq(xi, zeta):
        return "not transitive"
    return None


def _llcurly_laws(case: Case) -> str | None:
    xi, mu, nu = case["xi"], case["mu"], case["nu"]
    if llcurly(mu, nu) and not leq(mu, nu):
        return "μ ⋘ ν without μ ≤ ν"
    if llcurly(xi, mu) and leq(mu, nu) and not llcurly(xi, nu):
        return "ξ ⋘ μ ≤ ν without ξ ⋘ ν"
    return None


def _interpolation_sandwich(case: Case) -> str | None:
    mid = interpolate(case["mu"], case["nu"], case["xi"])
    if not (llcurly(case["mu"], mid) and llcurly(case["nu"], mid) and llcurly(mid, case["xi"])):
        return f"interpolant {mid} is not sandwiched"
    return None


def _separation_certificate(case: Case) -> str | None:
    xi, eta = case["xi"], case["eta"]
    if leq(xi, eta):
        return None
    sep = separate(xi, eta)
    if not llcurly(sep, xi) or leq(sep, eta):
        return f"separator {sep} fails"
    return None


def _valuation_laws(case: Case) -> str | None:
    xi, eta = case["xi"], case["eta"]
    violated = check_valuation_axioms(xi)
    if violated:
        return f"valuation axioms violated: {violated}"
    values = value_range(xi)
    if len(values) > 2 ** len(xi.support) or 0 not in values or xi.total_mass not in values:
        return f"range {sorted(values)} out of bounds"
    if equal(xi, eta) != pointwise_equal(xi, eta):
        return "canonical equality disagrees with pointwise equality"
    return None


def _scaled(instance: TransportInstance, k: Fraction) -> TransportInstance:
    return TransportInstance.build(
        {b: k * r for b, r in instance.supplies},
        {c: k * s for c, s in instance.capacities},
        instance.allowed,
        strict=instance.strict,
    )


def _flow_scales(case: Case) -> str | None:
    instance, k = case["instance"], case["k"]
    base, scaled = max_flow(instance).value, max_flow(_scaled(instance, k)).value
    if scaled != k * base:
        expected = format_rational(k * base)
        return f"flow {format_rational(scaled)} after scaling by {format_rational(k)}, expected {expected}"
    return None


def _order_suite() -> list[Property]:
    def triple(space: FinitePoset) -> st.SearchStrategy[Case]:
        return st.fixed_dictionaries(
            {
                "xi": gen.valuations(space),
                "eta": gen.valuations(space),
                "zeta": gen.valuations(space),
            }
        )

    @st.composite
    def strict_triples(draw: st.DrawFn, space: FinitePoset) -> Case:
        nu = draw(gen.valuations(space))
        mu = draw(gen.below(nu))
        xi = draw(st.one_of(gen.below(mu, strict=True), gen.valuations(space)))
        return {"xi": xi, "mu": mu, "nu": nu}

    @st.composite
    def sandwiches(draw: st.DrawFn, space: FinitePoset) -> Case:
        xi = draw(gen.valuations(space))
        return {"xi": xi, "mu": draw(gen.below(xi, strict=True)), "nu": draw(gen.below(xi, strict=True))}

    scalings = st.fixed_dictionaries({"instance": gen.transport_instances(), "k": gen.rationals()})

    return [
        Property("leq matches pointwise oracle", "order", lambda ps: _on(ps, _pair), _leq_matches_oracle),
        Property("certificates revalidate", "order", lambda ps: _on(ps, _pair), _certificates_revalidate),
        Property("prec agrees with llcurly", "order", lambda ps: _on(ps, _pair), _prec_matches_llcurly),
        Property("flow agrees with subset enumeration", "order", lambda ps: _on(ps, _pair), _flow_matches_brute_force),
        Property("leq is a partial order", "order", lambda ps: _on(ps, triple), _leq_is_partial_order),
        Property("llcurly laws", "order", lambda ps: _on(ps, strict_triples), _llcurly_laws),
        Property("interpolation sandwich", "order", lambda ps: _on(ps, sandwiches), _interpolation_sandwich),
        Property("separation certificate", "order", lambda ps: _on(ps, _pair), _separation_certificate),
        Property("valuation laws", "order", lambda ps: _on(ps, _pair), _valuation_laws),
        Property(
            "max-flow scales with its inputs", "order", lambda ps: scalings, _flow_scales, per_space=False
        ),
    ]


# ---------------------------------------------------------------------------
# cone
# ---------------------------------------------------------------------------


def _cx_axioms(case: Case) -> str | None:
    rows = check_cone_axioms(cx_cone(case["space"]), case["samples"], case["scalars"])
    failed = [row.to_json() for row in rows if not row.ok]
    return f"failed rows {failed}" if failed else None


def _rational_axioms(case: Case) -> str | None:
    rows = check_cone_axioms(rational_cone(), case["samples"], case["scalars"])
    failed = [row.law for row in rows if not row.ok]
    return f"failed rows {failed}" if failed else None


def _broken_cone_detected(case: Case) -> str | None:
    rows = check_cone_axioms(broken_max_cone(), case["samples"], case["scalars"], continuity=False)
    if all(row.ok for row in rows if row.index == 5):
        return "plus=max passed (k+l)·x=(k·x)+(l·x)"
    return None


def _cone_suite() -> list[Property]:
    def cx_samples(space: FinitePoset) -> st.SearchStrategy[Case]:
        return st.fixed_dictionaries(
            {
                "samples": st.lists(gen.valuations(space, max_support=2), min_size=1, max_size=3),
                "scalars": st.lists(gen.scalars(), min_size=1, max_size=3),
            }
        )

    rationals = st.fixed_dictionaries(
        {
            "samples": st.lists(st.one_of(st.just(Fraction(0)), gen.rationals()), min_size=1, max_size=4),
            "scalars": st.lists(gen.scalars(), min_size=1, max_size=3),
        }
    )
    broken = st.fixed_dictionaries(
        {
            "samples": st.lists(gen.rationals(), min_size=1, max_size=3),
            "scalars": st.lists(gen.rationals(), min_size=1, max_size=3),
        }
    )
    return [
        Property("CX satisfies the cone axioms", "cone", lambda ps: _on(ps, cx_samples), _cx_axioms),
        Property(
            "rationals satisfy the cone axioms", "cone", lambda ps: rationals, _rational_axioms, per_space=False
        ),
        Property(
            "plus=max is rejected", "cone", lambda ps: broken, _broken_cone_detected, per_space=False
        ),
    ]


# ---------------------------------------------------------------------------
# free
# ---------------------------------------------------------------------------


def _unit_law(case: Case) -> str | None:
    f = case["f"]
    for x in f.source.elements:
        if extend(f, point_valuation(f.source, x)) != f(x):
            return f"f̄(η_{x}) != f({x})"
    return None


def _extension_is_homomorphism(case: Case) -> str | None:
    f = case["f"]
    rows = check_homomorphism(lambda xi: extend(f, xi), rational_cone(), case["samples"], unit=f)
    failed = [row.to_json() for row in rows if not row.ok]
    return f"failed rows {failed}" if failed else None


def _extension_is_monotone(case: Case) -> str | None:
    f, xi, eta = case["f"], case["xi"], case["eta"]
    if leq(xi, eta) and not extend(f, xi) <= extend(f, eta):
        return f"ξ ≤ η but f̄(ξ)={extend(f, xi)} > f̄(η)={extend(f, eta)}"
    return None


def _doubled_extension_breaks_unit(case: Case) -> str | None:
    f = case["f"]

    def doubled(xi: SimpleValuation) -> Fraction:
        return 2 * extend(f, xi)

    rows = check_homomorphism(doubled, rational_cone(), case["samples"], unit=f)
    unit_ok = next(row for row in rows if row.law.startswith("unit law")).ok
    if unit_ok != all(f(x) == 0 for x in f.source.elements):
        return "doubled extension and unit law disagree"
    return None


def _naturality(case: Case) -> str | None:
    g, f, xi = case["g"], case["f"], case["xi"]
    if extend(compose(f, g), xi) != extend(f, map_pp(g, xi)):
        return "extend(f∘g, ξ) != extend(f, map_pp(g, ξ))"
    return None


def _free_suite() -> list[Property]:
    def maps(space: FinitePoset) -> st.SearchStrategy[Case]:
        return st.fixed_dictionaries(
            {
                "f": gen.cone_maps(space),
                "samples": st.lists(gen.valuations(space), max_size=3),
            }
        )

    def monotone(space: FinitePoset) -> st.SearchStrategy[Case]:
        return st.tuples(gen.cone_maps(space), gen.valuation_pairs(space)).map(
            lambda t: {"f": t[0], "xi": t[1][0], "eta": t[1][1]}
        )

    @st.composite
    def natural(draw: st.DrawFn, space: FinitePoset) -> Case:
        g = draw(gen.chain_maps(space))
        return {"g": g, "f": draw(gen.cone_maps(g.target)), "xi": draw(gen.valuations(space))}

    return [
        Property("unit law", "free", lambda ps: _on(ps, maps), _unit_law),
        Property("extension is a homomorphism", "free", lambda ps: _on(ps, maps), _extension_is_homomorphism),
        Property("extension is monotone", "free", lambda ps: _on(ps, monotone), _extension_is_monotone),
        Property("uniqueness rejects a doubled extension", "free", lambda ps: _on(ps, maps), _doubled_extension_breaks_unit),
        Property("naturality", "free", lambda ps: _on(ps, natural), _naturality),
    ]


# ---------------------------------------------------------------------------
# functor
# ---------------------------------------------------------------------------


def _functor_laws(case: Case) -> str | None:
    f, g, xi, eta = case["f"], case["g"], case["xi"], case["eta"]
    if map_pp(identity_map(xi.space), xi) != xi:
        return "identity law"
    if map_pp(compose(g, f), xi) != map_pp(g, map_pp(f, xi)):
        return "composition law"
    if leq(xi, eta) and not leq(map_pp(f, xi), map_pp(f, eta)):
        return "pushforward not order preserving"
    if map_pp(f, xi).total_mass != xi.total_mass:
        return "pushforward changed total mass"
    return None


def _functor_suite() -> list[Property]:
    @st.composite
    def maps(draw: st.DrawFn, space: FinitePoset) -> Case:
        f = draw(gen.chain_maps(space))
        xi, eta = draw(gen.valuation_pairs(space))
        return {"f": f, "g": draw(gen.chain_endomaps(f.target)), "xi": xi, "eta": eta}

    return [Property("map_pp functor laws", "functor", lambda ps: _on(ps, maps), _functor_laws)]


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------


def _converge_sound(case: Case) -> str | None:
    family, xi = case["family"], case["xi"]
    result = converge_P(family, xi)
    if result.verdict and not leq(xi, family_max(family)):
        return "⇒_P holds but ξ is not below the family maximum"
    singleton = converge_P([case["eta"]], xi).verdict
    if singleton != leq(xi, case["eta"]).verdict:
        return "{η} ⇒_P ξ disagrees with ξ ≤ η"
    return None


def _converge_matches_brute_force(case: Case) -> str | None:
    decided = converge_P(case["family"], case["xi"]).verdict
    literal = converge_P_brute_force(case["family"], case["xi"])
    if decided != literal:
        return f"characterization {decided}, literal definition {literal}"
    return None


def _waybelow_set_is_open(case: Case) -> str | None:
    family, xi, mu = case["family"], case["xi"], case["mu"]
    if not (converge_P(family, xi) and llcurly(mu, xi)):
        return None
    if not any(llcurly(mu, member) for member in family.members):
        return "no family member is above μ in ⋘"
    return None


def _c_space(case: Case) -> str | None:
    xi = case["xi"]
    if not is_c_space(xi.space):
        return "finite poset is not a c-space"
    family = c_space_family(xi)
    if not xi.is_zero and not all(llcurly(member, xi) for member in family.members):
        return "c-space family member not ⋘ ξ"
    return None


def _converge_suite() -> list[Property]:
    @st.composite
    def families(draw: st.DrawFn, space: FinitePoset, *, small: bool = False) -> Case:
        family = draw(gen.directed_families(space, max_members=3 if small else 4))
        top = family_max(family)
        bound = 3 if small else None
        xi = draw(st.one_of(gen.below(top), gen.valuations(space, max_support=bound)))
        if small and len(xi.support) > 3:
            xi = draw(gen.valuations(space, max_support=3))
        return {
            "family": family,
            "xi": xi,
            "eta": draw(gen.valuations(space)),
            "mu": draw(st.one_of(gen.below(xi, strict=True), gen.valuations(space))),
        }

    return [
        Property("⇒_P is sound and matches the order", "converge", lambda ps: _on(ps, families), _converge_sound),
        Property(
            "⇒_P matches its literal definition",
            "converge",
            lambda ps: _on(ps, lambda space: families(space, small=True)),
            _converge_matches_brute_force,
            max_elements=4,
        ),
        Property("⇑μ is open", "converge", lambda ps: _on(ps, families), _waybelow_set_is_open),
        Property(
            "CX is a c-space",
            "converge",
            lambda ps: _on(ps, lambda space: gen.valuations(space).map(lambda xi: {"xi": xi})),
            _c_space,
        ),
    ]


# ---------------------------------------------------------------------------
# semantics
# ---------------------------------------------------------------------------


def _monad_laws(case: Case) -> str | None:
    space, e, k, h, x = case["space"], case["e"], case["k"], case["h"], case["x"]
    if not equal(denote(Bind(Ret(x), k), space), denote(dict(k)[x], space)):
        return "left identity"
    if not equal(denote(Bind(e, gen.identity_table(space)), space), denote(e, space)):
        return "right identity"
    nested = tuple((s, Bind(body, h)) for s, body in k)
    if not equal(denote(Bind(Bind(e, k), h), space), denote(Bind(e, nested), space)):
        return "associativity"
    return None


def _program_structure(case: Case) -> str | None:
    space, e = case["space"], case["e"]
    meaning = denote(e, space)
    if meaning.total_mass != expected_mass(e, space):
        return f"mass {format_rational(meaning.total_mass)} != expected {format_rational(expected_mass(e, space))}"
    if parse(pretty(e), space) != e:
        return "pretty/parse round trip changed the program"
    x, y = case["x"], case["y"]
    if space.leq(x, y) and not leq(denote(Ret(x), space), denote(Ret(y), space)):
        return "ret is not monotone"
    return None


def _semantics_suite() -> list[Property]:
    def programs(space: FinitePoset) -> st.SearchStrategy[Case]:
        children = gen.programs(space, max_leaves=3)
        return st.fixed_dictionaries(
            {
                "e": gen.programs(space),
                "k": gen.binder_tables(space, children),
                "h": gen.binder_tables(space, children),
                "x": st.sampled_from(space.elements),
                "y": st.sampled_from(space.elements),
            }
        )

    return [
        Property("monad laws", "semantics", lambda ps: _on(ps, programs), _monad_laws, max_elements=4),
        Property("program structure", "semantics", lambda ps: _on(ps, programs), _program_structure, max_elements=4),
    ]


# ---------------------------------------------------------------------------
# Catalogue
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[[], list[Property]]] = {
    "order": _order_suite,
    "cone": _cone_suite,
    "free": _free_suite,
    "functor": _functor_suite,
    "converge": _converge_suite,
    "semantics": _semantics_suite,
}


def suite_names() -> list[str]:
    return [*SUITES, "all"]


def properties(suite: str) -> list[Property]:
    """Properties of one suite, or of every suite for ``"all"``.

    Raises:
        UnknownSuite: For any other name.
    """
    if suite == "all":
        return [prop for build in SUITES.values() for prop in build()]
    try:
        return SUITES[suite]()
    except KeyError:
        raise UnknownSuite(
            f"unknown suite {suite!r}; expected one of {suite_names()}", suite=suite
        ) from None

