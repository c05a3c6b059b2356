"""End-to-end CLI tests: python -m powerspace in a subprocess.

Tests: cli/001-016
Covers: every subcommand, exit codes (0 true, 1 false, 2 rejected),
        error documents on stdout, --output
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from powerspace.documents import Workspace
from powerspace.relations import leq, llcurly
from tests.helpers.assertions import assert_cli_error
from tests.helpers.cli import run_cli

DIAMOND = {
    "id": "D",
    "elements": ["bot", "a", "b", "top"],
    "le": [["bot", "a"], ["bot", "b"], ["a", "top"], ["b", "top"]],
}

pytestmark = [pytest.mark.auto, pytest.mark.cli]


@pytest.fixture
def space(write_json) -> Path:
    return write_json("diamond.json", DIAMOND)


@pytest.fixture
def valuation(write_json):
    """Factory: write a valuation on the diamond and return its path."""

    def _write(name: str, mass: dict[str, str], space_id: str = "D") -> Path:
        return write_json(f"{name}.json", {"space": space_id, "mass": mass})

    return _write


class TestCheckSpace:
    """check-space."""

    def test_diamond(self, space: Path) -> None:
        """cli/001: The diamond has 4 elements and 6 opens."""
        result = run_cli("check-space", str(space))
        assert result.exit_code == 0, result.stderr
        body = result.json()
        assert body["id"] == "D"
        assert body["elements"] == 4
        assert body["upper_sets"] == 6
        assert body["opens_closed_under_union_and_intersection"] is True
        assert body["c_space"] is True
        assert body["hasse_edges"] == [["a", "top"], ["b", "top"], ["bot", "a"], ["bot", "b"]]

    def test_singleton(self, write_json) -> None:
        """cli/002: One point, two opens."""
        path = write_json("s.json", {"id": "S", "elements": ["s"]})
        result = run_cli("check-space", str(path))
        assert result.exit_code == 0
        assert result.json()["upper_sets"] == 2

    def test_cycle_rejected(self, write_json) -> None:
        """cli/003: A cyclic relation exits 2 with cycle_error."""
        path = write_json("c.json", {"elements": ["x", "y"], "le": [["x", "y"], ["y", "x"]]})
        assert_cli_error(run_cli("check-space", str(path)), code="cycle_error")

    def test_malformed_json(self, tmp_path: Path) -> None:
        """cli/004: Unparseable input exits 2 with document_error."""
        path = tmp_path / "bad.json"
        path.write_text("{elements: ", encoding="utf-8")
        assert_cli_error(run_cli("check-space", str(path)), code="document_error")


class TestOrder:
    """order --relation leq|prec|llcurly."""

    def test_leq_with_witness(self, space: Path, valuation) -> None:
        """cli/005: η_a ≤ η_⊤ exits 0 with the plan a⇒top."""
        xi, eta = valuation("xi", {"a": "1"}), valuation("eta", {"top": "1"})
        result = run_cli("order", str(xi), str(eta), "--space", str(space))
        assert result.exit_code == 0, result.stderr
        assert result.json() == {"relation": "leq", "verdict": True, "witness": {"a⇒top": "1"}}

    def test_leq_false(self, space: Path, valuation) -> None:
        """cli/006: η_⊤ ≰ η_a exits 1 with a separating upper set."""
        xi, eta = valuation("xi", {"top": "1"}), valuation("eta", {"a": "1"})
        result = run_cli("order", str(xi), str(eta), "--space", str(space))
        assert result.exit_code == 1
        body = result.json()
        assert body["verdict"] is False
        assert "top" in body["separating_upper_set"]
        assert "a" not in body["separating_upper_set"]

    def test_llcurly_reflexive_fails(self, space: Path, valuation) -> None:
        """cli/007: η_⊤ ⋘ η_⊤ fails with Hall subset {top}."""
        xi = valuation("xi", {"top": "1"})
        result = run_cli("order", str(xi), str(xi), "--space", str(space), "--relation", "llcurly")
        assert result.exit_code == 1
        body = result.json()
        assert body["hall_subset"] == ["top"]
        assert (body["supply"], body["reach_capacity"]) == ("1", "1")

    def test_prec(self, space: Path, valuation) -> None:
        """cli/008: ½η_a ≺ η_⊤."""
        xi, eta = valuation("xi", {"a": "1/2"}), valuation("eta", {"top": "1"})
        result = run_cli("order", str(xi), str(eta), "--space", str(space), "--relation", "prec")
        assert result.exit_code == 0
        assert result.json()["relation"] == "prec"

    def test_cross_space(self, space: Path, valuation, write_json) -> None:
        """cli/009: Valuations on different spaces exit 2 with space_mismatch."""
        other = write_json("s.json", {"id": "S", "elements": ["s"]})
        xi, eta = valuation("xi", {"a": "1"}), valuation("eta", {"s": "1"}, space_id="S")
        result = run_cli("order", str(xi), str(eta), "--space", str(space), "--space", str(other))
        assert_cli_error(result, code="space_mismatch")

    def test_missing_space(self, valuation) -> None:
        """cli/009b: A valuation naming an unloaded space is rejected."""
        xi = valuation("xi", {"a": "1"})
        assert_cli_error(run_cli("order", str(xi), str(xi)), code="space_mismatch")

    def test_non_positive_mass(self, space: Path, valuation) -> None:
        """cli/009c: Zero coefficients are a document error."""
        xi = valuation("xi", {"a": "0"})
        assert_cli_error(run_cli("order", str(xi), str(xi), "--space", str(space)), code="document_error")


class TestExtendAndConverge:
    """extend and converge."""

    def test_extend_into_rationals(self, space: Path, valuation, write_json) -> None:
        """cli/010: height extended to ½η_a + ½η_b is 3/2."""
        f = write_json(
            "height.json",
            {"source": "D", "target": "rational-cone", "graph": {"bot": "0", "a": "1", "b": "2", "top": "3"}},
        )
        xi = valuation("xi", {"a": "1/2", "b": "1/2"})
        result = run_cli("extend", str(f), str(xi), "--space", str(space))
        assert result.exit_code == 0, result.stderr
        assert result.json() == {"value": "3/2"}

    def test_extend_non_monotone(self, space: Path, valuation, write_json) -> None:
        """cli/010b: A decreasing map exits 2 with non_monotone_map."""
        f = write_json(
            "down.json",
            {"source": "D", "graph": {"bot": "3", "a": "1", "b": "1", "top": "0"}},
        )
        xi = valuation("xi", {"a": "1"})
        assert_cli_error(run_cli("extend", str(f), str(xi), "--space", str(space)), code="non_monotone_map")

    def test_converge_true(self, space: Path, valuation, write_json) -> None:
        """cli/011: {η_⊤} ⇒_P η_a with a ↦ top."""
        family = write_json("fam.json", {"space": "D", "members": [{"top": "1"}]})
        xi = valuation("xi", {"a": "1"})
        result = run_cli("converge", str(family), str(xi), "--space", str(space))
        assert result.exit_code == 0, result.stderr
        body = result.json()
        assert body["verdict"] is True
        assert body["assignment"] == {"a": "top"}

    def test_converge_false(self, space: Path, valuation, write_json) -> None:
        """cli/012: {½η_a, η_a} does not converge to 2η_a."""
        family = write_json("fam.json", {"space": "D", "members": [{"a": "1/2"}, {"a": "1"}]})
        xi = valuation("xi", {"a": "2"})
        result = run_cli("converge", str(family), str(xi), "--space", str(space))
        assert result.exit_code == 1
        body = result.json()
        assert body["verdict"] is False
        assert body["family_max"] == "1·η_a"
        assert "deficit" in body

    def test_not_directed(self, space: Path, valuation, write_json) -> None:
        """cli/013: {η_a, η_b} has no upper bound in the family."""
        family = write_json("fam.json", {"space": "D", "members": [{"a": "1"}, {"b": "1"}]})
        xi = valuation("xi", {"a": "1"})
        assert_cli_error(run_cli("converge", str(family), str(xi), "--space", str(space)), code="not_directed")


class TestInterpolateSeparate:
    """interpolate and separate return valuations that re-check."""

    def test_interpolate(self, space: Path, valuation, tmp_path: Path) -> None:
        """cli/014: μ, ν ⋘ ξ′ ⋘ ξ for the printed ξ′."""
        mu, nu, xi = (
            valuation("mu", {"a": "1/2"}),
            valuation("nu", {"b": "1/2"}),
            valuation("xi", {"top": "2"}),
        )
        out = tmp_path / "mid.json"
        result = run_cli("interpolate", str(mu), str(nu), str(xi), "--space", str(space), "-o", str(out))
        assert result.exit_code == 0, result.stderr
        workspace = Workspace()
        workspace.load_poset(space)
        mid = workspace.load_valuation(out)
        for low in (mu, nu):
            assert llcurly(workspace.load_valuation(low), mid).verdict
        assert llcurly(mid, workspace.load_valuation(xi)).verdict

    def test_interpolate_precondition(self, space: Path, valuation) -> None:
        """cli/014b: μ not ⋘ ξ exits 2 with precondition_failed."""
        mu, xi = valuation("mu", {"top": "1"}), valuation("xi", {"top": "1"})
        result = run_cli("interpolate", str(mu), str(mu), str(xi), "--space", str(space))
        assert_cli_error(result, code="precondition_failed")

    def test_separate(self, space: Path, valuation, tmp_path: Path) -> None:
        """cli/015: ξ′ ⋘ μ and ξ′ ≰ ν."""
        mu, nu = valuation("mu", {"top": "1"}), valuation("nu", {"a": "1"})
        out = tmp_path / "sep.json"
        result = run_cli("separate", str(mu), str(nu), "--space", str(space), "--output", str(out))
        assert result.exit_code == 0, result.stderr
        workspace = Workspace()
        workspace.load_poset(space)
        sep = workspace.load_valuation(out)
        assert llcurly(sep, workspace.load_valuation(mu)).verdict
        assert not leq(sep, workspace.load_valuation(nu)).verdict


class TestDenote:
    """denote PROGRAM POSET."""

    def test_coin(self, space: Path, tmp_path: Path) -> None:
        """cli/016: A fair coin over a and b."""
        program = tmp_path / "coin.prog"
        program.write_text("# fair coin\nchoice 1/2 (ret a) (ret b)\n", encoding="utf-8")
        result = run_cli("denote", str(program), str(space))
        assert result.exit_code == 0, result.stderr
        assert result.json() == {"space": "D", "mass": {"a": "1/2", "b": "1/2"}}

    def test_non_monotone_binder(self, space: Path, tmp_path: Path) -> None:
        """cli/017: A decreasing binder table exits 2."""
        program = tmp_path / "bad.prog"
        program.write_text("bind (ret a) {bot -> ret top, a -> ret bot}", encoding="utf-8")
        assert_cli_error(run_cli("denote", str(program), str(space)), code="non_monotone_binder")

    def test_syntax_error_position(self, space: Path, tmp_path: Path) -> None:
        """cli/018: Syntax errors report line and column."""
        program = tmp_path / "typo.prog"
        program.write_text("choice 1/2\n  (ret a)\n  (rte b)", encoding="utf-8")
        result = run_cli("denote", str(program), str(space))
        assert_cli_error(result, code="syntax_error")
        assert (result.json()["line"], result.json()["column"]) == (3, 4)


class TestReports:
    """range, axioms and proptest."""

    def test_uniform_chain_range(self) -> None:
        """cli/019: The uniform 8-chain valuation takes 9 values."""
        result = run_cli("range", "--uniform-chain", "8")
        assert result.exit_code == 0, result.stderr
        body = result.json()
        assert body["size"] == 9
        assert body["range"] == [str(Fraction(k, 8)) for k in range(9)]
        assert body["space"] == "chain8"

    def test_range_needs_input(self) -> None:
        """cli/019b: No valuation and no --uniform-chain is rejected."""
        assert_cli_error(run_cli("range"), code="document_error")

    def test_axioms_broken_cone(self) -> None:
        """cli/020: plus = max fails the cone axioms: exit 1."""
        result = run_cli("axioms", "--cone", "broken-max")
        assert result.exit_code == 1
        body = result.json()
        assert body["cone"] == "broken-max-cone"
        assert body["passed"] is False
        assert any(row["status"] == "fail" for row in body["rows"])

    def test_axioms_cx(self, space: Path) -> None:
        """cli/021: CX(D) passes on the default samples."""
        result = run_cli("axioms", "--cone", "cx", "--space", str(space))
        assert result.exit_code == 0, result.stderr
        assert result.json()["cone"] == "CX(D)"

    def test_proptest_vacuous(self, tmp_path: Path) -> None:
        """cli/022: --cases 0 passes and --output mirrors stdout."""
        out = tmp_path / "summary.json"
        result = run_cli("proptest", "--suite", "all", "--cases", "0", "--output", str(out))
        assert result.exit_code == 0, result.stderr
        assert result.json()["passed"] is True
        assert json.loads(out.read_text(encoding="utf-8")) == result.json()

    def test_unknown_subcommand(self) -> None:
        """cli/023: argparse rejects unknown commands with exit 2."""
        result = run_cli("frobnicate")
        assert result.exit_code == 2
        assert "invalid choice" in result.stderr
