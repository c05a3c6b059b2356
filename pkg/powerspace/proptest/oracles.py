"""Brute-force oracles: literal definitions, no transport or search tricks."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable
from fractions import Fraction

from powerspace.config import get_settings
from powerspace.poset import FinitePoset, Subset, all_upper_sets, is_directed_subset, maximum
from powerspace.relations import DirectedFamily
from powerspace.valuation import SimpleValuation, make_valuation, mass_in

logger = logging.getLogger(__name__)


def pointwise_leq(
    xi: SimpleValuation, eta: SimpleValuation, *, cap: int | None = None
) -> tuple[bool, Subset | None]:
    """``ξ(U) ≤ η(U)`` for every upper set, or the first ``U`` that fails."""
    for u in all_upper_sets(xi.space, cap=cap):
        if mass_in(xi, u) > mass_in(eta, u):
            return False, u
    return True, None


def pointwise_equal(xi: SimpleValuation, eta: SimpleValuation) -> bool:
    return all(mass_in(xi, u) == mass_in(eta, u) for u in all_upper_sets(xi.space))


def converging_directed_subsets(space: FinitePoset, b: str, size: int) -> list[Subset]:
    """Directed subsets of at most ``size`` points whose net converges to ``b``.

    Singletons come first, so the usual witnesses are tried early.
    """
    found: list[Subset] = []
    for n in range(1, size + 1):
        for members in itertools.combinations(space.elements, n):
            if not is_directed_subset(space, members):
                continue
            top = maximum(space, members)
            if top is not None and space.leq(b, top):
                found.append(frozenset(members))
    return found


def converge_P_brute_force(
    family: DirectedFamily | Iterable[SimpleValuation],
    xi: SimpleValuation,
    *,
    family_size: int | None = None,
    grid_step: Fraction = Fraction(1, 8),
) -> bool:
    """The ``⇒_P`` definition over bounded choices.

    Some choice of directed ``D_i → b_i`` (at most ``family_size`` points
    each) must make every tuple ``d_i ∈ D_i`` and every grid vector
    ``r′ < r`` satisfy ``Σ r′_i·η_{d_i} ≤`` some member. Each coordinate's
    grid is ``{r − k·grid_step > 0 : k = 1, 2} ∪ {r − h}`` with
    ``h = 1/(2·n·L)``, ``L`` the common denominator of every coefficient
    in play; ``h`` sits below every separation margin.
    """
    fam = family if isinstance(family, DirectedFamily) else DirectedFamily.of(family)
    size = family_size or get_settings().brute_force_family_size
    space = xi.space
    n = len(xi.support)
    if n == 0:
        return True

    denominators = [r.denominator for _, r in xi.mass]
    denominators += [r.denominator for member in fam.members for _, r in member.mass]
    h = Fraction(1, 2 * n * math.lcm(*denominators))
    grids = [
        sorted({r - k * grid_step for k in (1, 2) if r - k * grid_step > 0} | {r - h})
        for _, r in xi.mass
    ]
    choices = [converging_directed_subsets(space, b, size) for b in xi.support]

    verdicts: dict[tuple[tuple[str, ...], tuple[Fraction, ...]], bool] = {}

    def dominated(points: tuple[str, ...], coefficients: tuple[Fraction, ...]) -> bool:
        key = (points, coefficients)
        if key not in verdicts:
            lifted = make_valuation(space, zip(points, coefficients, strict=True))
            verdicts[key] = any(pointwise_leq(lifted, m)[0] for m in fam.members)
        return verdicts[key]

    for choice in itertools.product(*choices):
        tuples = itertools.product(*(space.sort(d) for d in choice))
        if all(
            dominated(points, coefficients)
            for points in tuples
            for coefficients in itertools.product(*grids)
        ):
            logger.debug("brute force ⇒_P: witness choice %s", [space.sort(d) for d in choice])
            return True
    return False
