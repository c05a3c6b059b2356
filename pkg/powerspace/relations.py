"""Order relations on simple valuations, with certificates.

- ``leq``: the pointwise order, decided as a transportation problem
  (Splitting Lemma) over ``{(b, c) : b ≤ c}``.
- ``waybelow_prec``: ``ξ ≺ μ``, the strict subset-sum condition
  ``Σ_{b∈K} r_b < μ(↑K)`` for every nonempty ``K ⊆ supp ξ``.
- ``llcurly``: ``μ ⋘ ν``, strict transport over ``{(b, c) : c ∈ int(↑b)}``,
  which is ``b ≤ c`` on a finite poset.
- ``interpolate`` / ``separate``: constructive witnesses with fixed ε rules.
- ``converge_P``: the finite ``⇒_P`` decision for a directed family.

Degenerate inputs follow vacuous quantification: the zero valuation is
``≤``, ``≺`` and ``⋘`` every valuation, the zero valuation included.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from powerspace.config import get_settings
from powerspace.errors import (
    InternalError,
    NotDirected,
    PreconditionFailed,
    SpaceMismatch,
)
from powerspace.poset import FinitePoset, up_set
from powerspace.transport import (
    HallViolation,
    TransportInstance,
    TransportPlan,
    feasible_transport,
    min_strict_slack,
)
from powerspace.valuation import (
    SimpleValuation,
    format_rational,
    make_valuation,
    mass_in,
    scale,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Decisions (immutable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderDecision:
    """A verdict with exactly one certificate: a plan, or a refutation.

    Refutations are a Hall subset (strict relations) or a separating upper
    set ``U`` with ``ξ(U) > η(U)`` (``leq``, which also keeps the Hall
    subset it was derived from).
    """

    relation: str
    verdict: bool
    witness: TransportPlan | None = None
    hall: HallViolation | None = None
    separating_upper_set: tuple[str, ...] | None = None
    left_value: Fraction | None = None
    right_value: Fraction | None = None

    def __post_init__(self) -> None:
        refuted = self.hall is not None or self.separating_upper_set is not None
        if self.verdict != (self.witness is not None) or self.verdict == refuted:
            raise InternalError(f"malformed {self.relation} decision: certificate does not match verdict")

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict[str, object]:
        body: dict[str, object] = {"relation": self.relation, "verdict": self.verdict}
        if self.witness is not None:
            body["witness"] = self.witness.to_json()
        if self.separating_upper_set is not None:
            body["separating_upper_set"] = list(self.separating_upper_set)
            body["left_value"] = format_rational(self.left_value or Fraction(0))
            body["right_value"] = format_rational(self.right_value or Fraction(0))
        if self.hall is not None:
            body.update(self.hall.to_json())
        return body


@dataclass(frozen=True)
class DirectedFamily:
    """A nonempty finite family of valuations, directed under ``≤``."""

    members: tuple[SimpleValuation, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise NotDirected("a directed family must be nonempty")
        space = self.members[0].space
        for member in self.members[1:]:
            if member.space != space:
                raise SpaceMismatch(
                    f"family members live on different spaces: {space.name!r} vs {member.space.name!r}",
                    left=space.name,
                    right=member.space.name,
                )
        if not is_directed_family(self.members):
            raise NotDirected(
                "family is not directed: some pair has no upper bound in the family",
                members=[str(m) for m in self.members],
            )

    @classmethod
    def of(cls, members: Iterable[SimpleValuation]) -> DirectedFamily:
        unique = list(dict.fromkeys(members))
        return cls(members=tuple(unique))

    @property
    def space(self) -> FinitePoset:
        return self.members[0].space


@dataclass(frozen=True)
class ConvergenceResult:
    """Outcome of ``converge_P``: an assignment ``b ↦ m`` or a mass deficit."""

    verdict: bool
    maximum: SimpleValuation
    assignment: tuple[tuple[str, str], ...] | None = None
    separating_upper_set: tuple[str, ...] | None = None
    deficit: Fraction | None = None

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict[str, object]:
        body: dict[str, object] = {"verdict": self.verdict, "family_max": str(self.maximum)}
        if self.assignment is not None:
            body["assignment"] = {b: m for b, m in self.assignment}
        if self.separating_upper_set is not None:
            body["separating_upper_set"] = list(self.separating_upper_set)
            body["deficit"] = format_rational(self.deficit or Fraction(0))
        return body


# ---------------------------------------------------------------------------
# Transport helpers
# ---------------------------------------------------------------------------


def _check_space(xi: SimpleValuation, eta: SimpleValuation) -> None:
    if xi.space != eta.space:
        raise SpaceMismatch(
            f"valuations live on different spaces: {xi.space.name!r} vs {eta.space.name!r}",
            left=xi.space.name,
            right=eta.space.name,
        )


def transport_instance(
    xi: SimpleValuation, eta: SimpleValuation, *, strict: bool = False
) -> TransportInstance:
    """Rows from ``ξ``, columns from ``η``, allowed pairs ``b ≤ c``."""
    _check_space(xi, eta)
    space = xi.space
    allowed = frozenset(
        (b, c) for b in xi.support for c in eta.support if space.leq(b, c)
    )
    return TransportInstance(supplies=xi.mass, capacities=eta.mass, allowed=allowed, strict=strict)


# ---------------------------------------------------------------------------
# Deciders
# ---------------------------------------------------------------------------


def leq(xi: SimpleValuation, eta: SimpleValuation) -> OrderDecision:
    """``ξ ≤ η``, with a transport plan or a separating upper set."""
    instance = transport_instance(xi, eta)
    outcome = feasible_transport(instance)
    if isinstance(outcome, TransportPlan):
        return OrderDecision(relation="leq", verdict=True, witness=outcome)

    u = up_set(xi.space, outcome.subset)
    left, right = mass_in(xi, u), mass_in(eta, u)
    if left <= right:
        raise InternalError(
            f"Hall subset {list(outcome.subset)} does not separate: "
            f"{format_rational(left)} <= {format_rational(right)}"
        )
    return OrderDecision(
        relation="leq",
        verdict=False,
        hall=outcome,
        separating_upper_set=tuple(xi.space.sort(u)),
        left_value=left,
        right_value=right,
    )


@lru_cache(maxsize=8192)
def _leq_verdict(xi: SimpleValuation, eta: SimpleValuation) -> bool:
    return leq(xi, eta).verdict


def llcurly(mu: SimpleValuation, nu: SimpleValuation) -> OrderDecision:
    """``μ ⋘ ν``: a strict transport plan, or a strict Hall subset."""
    outcome = feasible_transport(transport_instance(mu, nu, strict=True))
    if isinstance(outcome, TransportPlan):
        return OrderDecision(relation="llcurly", verdict=True, witness=outcome)
    return OrderDecision(relation="llcurly", verdict=False, hall=outcome)


def _prec_violation(xi: SimpleValuation, mu: SimpleValuation) -> HallViolation | None:
    for size in range(1, len(xi.support) + 1):
        for k in itertools.combinations(xi.support, size):
            supply = sum((xi.coefficient(b) for b in k), Fraction(0))
            reach = mass_in(mu, up_set(xi.space, k))
            if supply >= reach:
                return HallViolation(subset=k, supply=supply, reach_capacity=reach, strict=True)
    return None


def waybelow_prec(xi: SimpleValuation, mu: SimpleValuation) -> OrderDecision:
    """``ξ ≺ μ`` by subset enumeration, cross-checked against strict transport.

    Supports larger than ``settings.prec_support_cap`` skip the enumeration
    and take the strict-transport verdict and certificate.

    Raises:
        InternalError: If the two deciders disagree.
    """
    _check_space(xi, mu)
    flow = llcurly(xi, mu)
    limit = get_settings().prec_support_cap
    if len(xi.support) > limit:
        logger.debug(
            "≺: support of size %d above enumeration cap %d, using ⋘ only", len(xi.support), limit
        )
        return OrderDecision(relation="prec", verdict=flow.verdict, witness=flow.witness, hall=flow.hall)
    violation = _prec_violation(xi, mu)
    if flow.verdict != (violation is None):
        raise InternalError(
            f"≺ and ⋘ disagree on {xi} vs {mu}: enumeration {violation is None}, flow {flow.verdict}"
        )
    if violation is None:
        return OrderDecision(relation="prec", verdict=True, witness=flow.witness)
    return OrderDecision(relation="prec", verdict=False, hall=violation)


# ---------------------------------------------------------------------------
# Constructive witnesses
# ---------------------------------------------------------------------------


def interpolate(mu: SimpleValuation, nu: SimpleValuation, xi: SimpleValuation) -> SimpleValuation:
    """``ξ′`` with ``μ, ν ⋘ ξ′ ⋘ ξ``.

    ``ξ′ = Σ_c (s_c − ε)·η_c`` over ``supp ξ`` (coordinates reaching 0 are
    dropped), ``ε = min slack / (2·|supp ξ|)`` where the slack is the
    smaller strict slack of ``μ`` and ``ν`` against ``ξ``. A zero ``μ``
    or ``ν`` has no slack; when both are zero, the total mass of ``ξ``
    stands in.

    Raises:
        PreconditionFailed: If ``μ ⋘ ξ`` or ``ν ⋘ ξ`` fails.
        InternalError: If the constructed ``ξ′`` fails verification.
    """
    for name, lower in (("μ", mu), ("ν", nu)):
        if not llcurly(lower, xi):
            raise PreconditionFailed(f"interpolation needs {name} ⋘ ξ; got {lower} vs {xi}")
    if xi.is_zero:
        return xi

    slacks = [
        found[0]
        for found in (
            min_strict_slack(transport_instance(lower, xi, strict=True)) for lower in (mu, nu)
        )
        if found is not None
    ]
    slack = min(slacks) if slacks else xi.total_mass
    eps = slack / (2 * len(xi.support))
    logger.debug("interpolate: slack %s, ε %s", format_rational(slack), format_rational(eps))

    candidate = make_valuation(xi.space, [(c, s - eps) for c, s in xi.mass if s > eps])
    for lower in (mu, nu):
        if not llcurly(lower, candidate):
            raise InternalError(f"interpolant {candidate} is not above {lower}")
    if not llcurly(candidate, xi):
        raise InternalError(f"interpolant {candidate} is not ⋘ {xi}")
    return candidate


def separate(mu: SimpleValuation, nu: SimpleValuation) -> SimpleValuation:
    """``ξ′`` with ``ξ′ ⋘ μ`` and ``ξ′ ≰ ν``, given ``μ ≰ ν``.

    ``ξ′ = Σ_b (r_b − ε)·η_b`` with ``ε`` half the minimum of the smallest
    coefficient of ``μ`` and ``(μ(U) − ν(U)) / |supp μ|``, ``U`` being the
    separating upper set from ``leq(μ, ν)``.

    Raises:
        PreconditionFailed: If ``μ ≤ ν``.
        InternalError: If the constructed ``ξ′`` fails verification.
    """
    decision = leq(mu, nu)
    if decision.verdict:
        raise PreconditionFailed(f"separation needs μ ≰ ν; got {mu} ≤ {nu}")
    assert decision.left_value is not None and decision.right_value is not None
    margin = decision.left_value - decision.right_value
    eps = min(min(r for _, r in mu.mass), margin / len(mu.support)) / 2
    logger.debug("separate: margin %s, ε %s", format_rational(margin), format_rational(eps))

    candidate = make_valuation(mu.space, [(b, r - eps) for b, r in mu.mass if r > eps])
    if not llcurly(candidate, mu):
        raise InternalError(f"separator {candidate} is not ⋘ {mu}")
    if leq(candidate, nu):
        raise InternalError(f"separator {candidate} is still ≤ {nu}")
    return candidate


# ---------------------------------------------------------------------------
# Directed families and ⇒_P
# ---------------------------------------------------------------------------


def is_directed_family(members: Iterable[SimpleValuation]) -> bool:
    """Nonempty, and every pair has an upper bound inside the family."""
    family = list(dict.fromkeys(members))
    if not family:
        return False
    return all(
        any(_leq_verdict(x, z) and _leq_verdict(y, z) for z in family)
        for x, y in itertools.combinations(family, 2)
    )


def family_max(family: DirectedFamily | Iterable[SimpleValuation]) -> SimpleValuation:
    """The unique member above every other member.

    Raises:
        NotDirected: If a plain iterable is not directed.
    """
    fam = family if isinstance(family, DirectedFamily) else DirectedFamily.of(family)
    for candidate in fam.members:
        if all(_leq_verdict(m, candidate) for m in fam.members):
            return candidate
    raise InternalError("directed family without a maximum")


def converge_P(family: DirectedFamily | Iterable[SimpleValuation], xi: SimpleValuation) -> ConvergenceResult:
    """Decide ``𝒟 ⇒_P ξ`` for a finite directed family.

    At finite scale a directed ``D_i → b_i`` has a maximum ``m_i ≥ b_i``
    and every ``∀ r′ < r`` collapses to its supremum, so ``𝒟 ⇒_P ξ`` iff
    some lifting ``b_i ↦ m_i ≥ b_i`` has ``Σ r_{b_i}·η_{m_i} ≤ max 𝒟``.
    The search tries, for each support point, lifts into the support of
    the maximum first, then the remaining points of ``↑b_i``; a partial
    lifting is kept only while it can still be completed (completing
    with ``m = b`` is the cheapest completion).

    Raises:
        NotDirected: If the family is not directed.
        SpaceMismatch: If ``ξ`` lives on another space.
    """
    fam = family if isinstance(family, DirectedFamily) else DirectedFamily.of(family)
    _check_space(xi, fam.members[0])
    top = family_max(fam)

    decision = leq(xi, top)
    if not decision.verdict:
        assert decision.left_value is not None and decision.right_value is not None
        return ConvergenceResult(
            verdict=False,
            maximum=top,
            separating_upper_set=decision.separating_upper_set,
            deficit=decision.left_value - decision.right_value,
        )

    space = xi.space
    in_top = set(top.support)
    chosen: list[str] = []
    for i, b in enumerate(xi.support):
        lifts = space.sort(space.principal_up[b])
        ordered = [m for m in lifts if m in in_top] + [m for m in lifts if m not in in_top]
        for m in ordered:
            trial = [*chosen, m, *xi.support[i + 1 :]]
            if _leq_verdict(_lifted(xi, trial), top):
                chosen.append(m)
                break
        else:
            raise InternalError(f"no lift for {b!r} although {xi} ≤ {top}")
    return ConvergenceResult(
        verdict=True, maximum=top, assignment=tuple(zip(xi.support, chosen, strict=True))
    )


def _lifted(xi: SimpleValuation, targets: list[str]) -> SimpleValuation:
    return make_valuation(xi.space, [(m, r) for m, (_, r) in zip(targets, xi.mass, strict=True)])


def waybelow_set(mu: SimpleValuation, candidates: Iterable[SimpleValuation]) -> list[SimpleValuation]:
    """Members of ``candidates`` in ``⇑μ = {ν : μ ⋘ ν}``."""
    return [nu for nu in candidates if llcurly(mu, nu)]


def c_space_family(xi: SimpleValuation, steps: int = 4) -> DirectedFamily:
    """The chain ``(k/steps)·ξ`` for ``k < steps``; every member is ``⋘ ξ``."""
    return DirectedFamily.of(scale(Fraction(k, steps), xi) for k in range(steps))
