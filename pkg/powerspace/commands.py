"""Command implementations behind the CLI.

Each command loads its documents through a ``Workspace``, calls the
library, and returns a ``CommandResult``: the JSON document to print and
the verdict that decides the exit code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel

from powerspace.cone import (
    ConeSpec,
    all_pass,
    broken_max_cone,
    check_cone_axioms,
    cx_cone,
    extend,
    rational_cone,
)
from powerspace.documents import (
    AxiomReportDocument,
    AxiomRowDocument,
    ConvergenceDocument,
    DecisionDocument,
    RangeDocument,
    SpaceReportDocument,
    ValuationDocument,
    ValueDocument,
    Workspace,
)
from powerspace.errors import DocumentError, SizeLimitExceeded
from powerspace.poset import all_upper_sets, hasse_edges, is_c_space
from powerspace.proptest.runner import run_suite
from powerspace.relations import (
    converge_P,
    interpolate,
    leq,
    llcurly,
    separate,
    waybelow_prec,
)
from powerspace.semantics import denote, parse
from powerspace.valuation import (
    SimpleValuation,
    make_valuation,
    point_valuation,
    uniform_chain_valuation,
    value_range,
    zero_valuation,
)

logger = logging.getLogger(__name__)

Relation = Literal["leq", "prec", "llcurly"]
ConeName = Literal["cx", "rational", "broken-max"]

_DECIDERS = {"leq": leq, "prec": waybelow_prec, "llcurly": llcurly}
_DEFAULT_SCALARS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass(frozen=True)
class CommandResult:
    document: BaseModel
    verdict: bool = True

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict else 1


def _workspace(spaces: list[str] | None) -> Workspace:
    workspace = Workspace()
    for path in spaces or ():
        workspace.load_poset(path)
    return workspace


def _valuation_document(xi: SimpleValuation) -> ValuationDocument:
    return ValuationDocument.from_valuation(xi)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_check_space(poset_path: str | Path) -> CommandResult:
    """Element count, Hasse edges, and the lattice of opens when under the cap."""
    space = Workspace().load_poset(poset_path)
    report = SpaceReportDocument(
        id=space.name, elements=len(space), hasse_edges=hasse_edges(space)
    )
    try:
        opens = set(all_upper_sets(space))
    except SizeLimitExceeded as exc:
        logger.warning("skipping open-set checks: %s", exc.message)
        return CommandResult(report)
    closed = all(u | v in opens and u & v in opens for u in opens for v in opens)
    report = report.model_copy(
        update={
            "upper_sets": len(opens),
            "opens_closed_under_union_and_intersection": closed,
            "c_space": is_c_space(space),
        }
    )
    return CommandResult(report, verdict=closed)


def cmd_order(
    xi_path: str | Path,
    eta_path: str | Path,
    *,
    spaces: list[str],
    relation: Relation = "leq",
) -> CommandResult:
    workspace = _workspace(spaces)
    xi = workspace.load_valuation(xi_path)
    eta = workspace.load_valuation(eta_path)
    decision = _DECIDERS[relation](xi, eta)
    return CommandResult(DecisionDocument.model_validate(decision.to_json()), decision.verdict)


def cmd_extend(
    map_path: str | Path, xi_path: str | Path, *, spaces: list[str]
) -> CommandResult:
    workspace = _workspace(spaces)
    f = workspace.load_map(map_path)
    xi = workspace.load_valuation(xi_path)
    value = extend(f, xi)
    if isinstance(value, SimpleValuation):
        return CommandResult(_valuation_document(value))
    return CommandResult(ValueDocument(value=str(value)))


def cmd_converge(
    family_path: str | Path, xi_path: str | Path, *, spaces: list[str]
) -> CommandResult:
    workspace = _workspace(spaces)
    family = workspace.load_family(family_path)
    xi = workspace.load_valuation(xi_path)
    result = converge_P(family, xi)
    return CommandResult(ConvergenceDocument.model_validate(result.to_json()), result.verdict)


def cmd_denote(program_path: str | Path, poset_path: str | Path) -> CommandResult:
    space = Workspace().load_poset(poset_path)
    try:
        text = Path(program_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {program_path}: {exc.strerror}", source=str(program_path)) from exc
    return CommandResult(_valuation_document(denote(parse(text, space), space)))


def cmd_range(
    xi_path: str | Path | None = None,
    *,
    spaces: list[str] | None = None,
    uniform_chain: int | None = None,
) -> CommandResult:
    """``range(ξ)`` and its size; ``uniform_chain`` builds ``Σ (1/n)·η_{i/n}`` instead of loading."""
    if uniform_chain is not None:
        xi = uniform_chain_valuation(uniform_chain)
    elif xi_path is not None:
        xi = _workspace(spaces).load_valuation(xi_path)
    else:
        raise DocumentError("range needs a valuation file or --uniform-chain N")
    values = sorted(value_range(xi))
    return CommandResult(
        RangeDocument(
            space=xi.space.name, valuation=str(xi), size=len(values), range=[str(v) for v in values]
        )
    )


def cmd_interpolate(
    mu_path: str | Path, nu_path: str | Path, xi_path: str | Path, *, spaces: list[str]
) -> CommandResult:
    workspace = _workspace(spaces)
    mu, nu, xi = (workspace.load_valuation(p) for p in (mu_path, nu_path, xi_path))
    return CommandResult(_valuation_document(interpolate(mu, nu, xi)))


def cmd_separate(mu_path: str | Path, nu_path: str | Path, *, spaces: list[str]) -> CommandResult:
    workspace = _workspace(spaces)
    mu, nu = (workspace.load_valuation(p) for p in (mu_path, nu_path))
    return CommandResult(_valuation_document(separate(mu, nu)))


def cmd_axioms(
    cone: ConeName = "cx",
    *,
    spaces: list[str] | None = None,
    family_path: str | Path | None = None,
) -> CommandResult:
    """Cone axiom report over default samples (or a family file's members for ``cx``)."""
    samples: list[object]
    spec: ConeSpec
    if cone == "cx":
        workspace = _workspace(spaces)
        if family_path is not None:
            members = workspace.load_family(family_path).members
            space = members[0].space
            samples = list(members)
        else:
            if len(workspace.posets) != 1:
                raise DocumentError("axioms --cone cx needs exactly one --space poset")
            (space,) = workspace.posets.values()
            samples = _default_cx_samples(space)
        spec = cx_cone(space)
    else:
        spec = rational_cone() if cone == "rational" else broken_max_cone()
        samples = [Fraction(0), Fraction(1, 2), Fraction(1)]
    rows = check_cone_axioms(spec, samples, _DEFAULT_SCALARS)
    document = AxiomReportDocument(
        cone=spec.name,
        passed=all_pass(rows),
        rows=[AxiomRowDocument.model_validate(row.to_json()) for row in rows],
    )
    return CommandResult(document, document.passed)


def _default_cx_samples(space) -> list[object]:
    points = [point_valuation(space, x) for x in space.elements[:3]]
    samples: list[object] = [zero_valuation(space), *points]
    if len(space) >= 2:
        a, b = space.elements[:2]
        samples.append(make_valuation(space, {a: Fraction(1, 2), b: Fraction(1, 2)}))
    return samples


def cmd_proptest(
    suite: str = "all",
    *,
    seed: int | None = None,
    cases: int | None = None,
    exhaustive: bool = False,
    max_elements: int | None = None,
) -> CommandResult:
    summary = run_suite(
        suite, seed=seed, cases=cases, exhaustive=exhaustive, max_elements=max_elements
    )
    return CommandResult(summary.to_document(), summary.passed)
