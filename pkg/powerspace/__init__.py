"""Order, way-below and convergence on the probabilistic powerspace of finite posets.

Usage:
    from powerspace import build_poset, make_valuation, leq

    diamond = build_poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
    xi = make_valuation(diamond, {"bot": "1/2"})
    leq(xi, make_valuation(diamond, {"top": 1})).verdict    # True
"""

from powerspace.cone import (
    ConeSpec,
    LawRow,
    MonotoneMap,
    check_cone_axioms,
    check_homomorphism,
    cx_cone,
    extend,
    map_pp,
    rational_cone,
)
from powerspace.errors import PowerspaceError
from powerspace.poset import FinitePoset, all_upper_sets, build_poset, chain, up_set
from powerspace.relations import (
    ConvergenceResult,
    DirectedFamily,
    OrderDecision,
    converge_P,
    interpolate,
    leq,
    llcurly,
    separate,
    waybelow_prec,
)
from powerspace.valuation import (
    SimpleValuation,
    add,
    evaluate,
    make_valuation,
    point_valuation,
    scale,
    value_range,
    zero_valuation,
)

__all__ = [
    "ConeSpec",
    "ConvergenceResult",
    "DirectedFamily",
    "FinitePoset",
    "LawRow",
    "MonotoneMap",
    "OrderDecision",
    "PowerspaceError",
    "SimpleValuation",
    "add",
    "all_upper_sets",
    "build_poset",
    "chain",
    "check_cone_axioms",
    "check_homomorphism",
    "converge_P",
    "cx_cone",
    "evaluate",
    "extend",
    "interpolate",
    "leq",
    "llcurly",
    "make_valuation",
    "map_pp",
    "point_valuation",
    "rational_cone",
    "scale",
    "separate",
    "up_set",
    "value_range",
    "waybelow_prec",
    "zero_valuation",
]
