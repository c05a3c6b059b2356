"""JSON documents read and written by the CLI.

Rationals travel as ``"p/q"`` strings (integers are accepted on input);
floats are rejected so exactness survives a round trip. Valuations,
families and maps name their poset by id, and a ``Workspace`` resolves
those ids against the posets loaded for the command.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Any, Literal, TypeVar

from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from powerspace.cone import ConeSpec, MonotoneMap, rational_cone
from powerspace.errors import DocumentError, PowerspaceError, SpaceMismatch
from powerspace.poset import FinitePoset, build_poset
from powerspace.relations import DirectedFamily
from powerspace.valuation import SimpleValuation, format_rational, make_valuation, to_fraction

logger = logging.getLogger(__name__)

RATIONAL_CONE = "rational-cone"


# ---------------------------------------------------------------------------
# Rational fields
# ---------------------------------------------------------------------------


def _rational(value: object) -> str:
    try:
        return format_rational(to_fraction(value))
    except DocumentError as exc:
        raise ValueError(exc.message) from exc


def _positive_rational(value: object) -> str:
    text = _rational(value)
    if to_fraction(text) <= 0:
        raise ValueError(f"mass must be positive, got {text}")
    return text


Rational = Annotated[str, BeforeValidator(_rational)]
PositiveRational = Annotated[str, BeforeValidator(_positive_rational)]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------


class PosetDocument(_Document):
    """``{"id": "D", "elements": [...], "le": [[x, y], ...]}``; only generators are stored."""

    id: str = "P"
    elements: list[str]
    le: list[tuple[str, str]] = []

    def to_poset(self) -> FinitePoset:
        return build_poset(self.elements, self.le, name=self.id)

    @classmethod
    def from_poset(cls, poset: FinitePoset) -> PosetDocument:
        return cls(id=poset.name, elements=list(poset.elements), le=list(poset.generators))


class ValuationDocument(_Document):
    """``{"space": "<poset-id>", "mass": {"a": "1/2"}}``."""

    space: str = "P"
    mass: dict[str, PositiveRational] = {}

    @classmethod
    def from_valuation(cls, xi: SimpleValuation) -> ValuationDocument:
        return cls(space=xi.space.name, mass={b: format_rational(r) for b, r in xi.mass})


class FamilyDocument(_Document):
    space: str = "P"
    members: list[dict[str, PositiveRational]]


class MonotoneMapDocument(_Document):
    """``{"source": id, "target": id | "rational-cone", "graph": {x: value}}``."""

    source: str = "P"
    target: str = RATIONAL_CONE
    graph: dict[str, str | int]


# ---------------------------------------------------------------------------
# Output documents
# ---------------------------------------------------------------------------


class DecisionDocument(_Document):
    relation: Literal["leq", "prec", "llcurly"]
    verdict: bool
    witness: dict[str, Rational] | None = None
    separating_upper_set: list[str] | None = None
    left_value: Rational | None = None
    right_value: Rational | None = None
    hall_subset: list[str] | None = None
    supply: Rational | None = None
    reach_capacity: Rational | None = None


class ConvergenceDocument(_Document):
    verdict: bool
    family_max: str
    assignment: dict[str, str] | None = None
    separating_upper_set: list[str] | None = None
    deficit: Rational | None = None


class AxiomRowDocument(_Document):
    axiom: str
    status: Literal["pass", "fail", "info"]
    index: int | None = None
    counterexample: dict[str, str] | None = None


class AxiomReportDocument(_Document):
    cone: str
    passed: bool
    rows: list[AxiomRowDocument]


class SpaceReportDocument(_Document):
    id: str
    elements: int
    hasse_edges: list[tuple[str, str]]
    upper_sets: int | None = None
    opens_closed_under_union_and_intersection: bool | None = None
    c_space: bool | None = None


class ValueDocument(_Document):
    """A rational-cone value, e.g. the result of ``extend``."""

    value: Rational


class RangeDocument(_Document):
    space: str
    valuation: str
    size: int
    range: list[Rational]


class PropertyResultDocument(_Document):
    name: str
    status: Literal["pass", "fail"]
    cases: int
    counterexample: dict[str, Any] | None = None


class ProptestSummaryDocument(_Document):
    suite: str
    seed: int
    cases: int
    exhaustive: bool
    passed: bool
    properties: list[PropertyResultDocument]


class ErrorDocument(BaseModel):
    """``{"error": code, "message": text, ...details}``."""

    model_config = ConfigDict(extra="allow")

    error: str
    message: str

    @classmethod
    def from_error(cls, exc: PowerspaceError) -> ErrorDocument:
        return cls.model_validate(exc.to_dict())


# ---------------------------------------------------------------------------
# Load / dump
# ---------------------------------------------------------------------------

D = TypeVar("D", bound=BaseModel)


def parse_document(raw: str | bytes, model: type[D], *, source: str = "<input>") -> D:
    """Validate JSON text against ``model``.

    Raises:
        DocumentError: On malformed JSON or a schema violation.
    """
    try:
        return model.model_validate(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: malformed JSON: {exc.msg}", source=source) from exc
    except ValidationError as exc:
        problems = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()]
        raise DocumentError(
            f"{source}: not a valid {model.__name__}: {'; '.join(problems)}",
            source=source,
            problems=problems,
        ) from exc


def load_document(path: str | Path, model: type[D]) -> D:
    file = Path(path)
    try:
        raw = file.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {file}: {exc.strerror}", source=str(file)) from exc
    return parse_document(raw, model, source=str(file))


def dump_document(document: BaseModel) -> str:
    return document.model_dump_json(indent=2, exclude_none=True)


# ---------------------------------------------------------------------------
# Workspace
# ---------------------------------------------------------------------------


@dataclass
class Workspace:
    """Posets loaded for one command, resolved by id."""

    posets: dict[str, FinitePoset] = field(default_factory=dict)

    def add(self, poset: FinitePoset) -> FinitePoset:
        if poset.name in self.posets and self.posets[poset.name] != poset:
            raise DocumentError(f"two different posets share the id {poset.name!r}", id=poset.name)
        self.posets[poset.name] = poset
        return poset

    def load_poset(self, path: str | Path) -> FinitePoset:
        return self.add(load_document(path, PosetDocument).to_poset())

    def poset(self, space_id: str) -> FinitePoset:
        try:
            return self.posets[space_id]
        except KeyError:
            raise SpaceMismatch(
                f"document names space {space_id!r}, loaded: {sorted(self.posets)}",
                left=space_id,
                right=sorted(self.posets),
            ) from None

    def valuation(self, document: ValuationDocument) -> SimpleValuation:
        return make_valuation(self.poset(document.space), document.mass)

    def load_valuation(self, path: str | Path) -> SimpleValuation:
        return self.valuation(load_document(path, ValuationDocument))

    def family(self, document: FamilyDocument) -> DirectedFamily:
        space = self.poset(document.space)
        return DirectedFamily.of(make_valuation(space, member) for member in document.members)

    def load_family(self, path: str | Path) -> DirectedFamily:
        return self.family(load_document(path, FamilyDocument))

    def target(self, target_id: str) -> FinitePoset | ConeSpec:
        return rational_cone() if target_id == RATIONAL_CONE else self.poset(target_id)

    def monotone_map(self, document: MonotoneMapDocument) -> MonotoneMap:
        return MonotoneMap.build(
            self.poset(document.source), self.target(document.target), document.graph
        )

    def load_map(self, path: str | Path) -> MonotoneMap:
        return self.monotone_map(load_document(path, MonotoneMapDocument))
