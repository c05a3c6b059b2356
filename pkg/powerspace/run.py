"""CLI entry point: python -m powerspace

Usage:
    python -m powerspace check-space diamond.json
    python -m powerspace order xi.json eta.json --space diamond.json --relation prec
    python -m powerspace extend f.json xi.json --space diamond.json
    python -m powerspace converge family.json xi.json --space diamond.json
    python -m powerspace interpolate mu.json nu.json xi.json --space diamond.json
    python -m powerspace separate mu.json nu.json --space diamond.json
    python -m powerspace denote coin.prog two.json
    python -m powerspace range --uniform-chain 8
    python -m powerspace axioms --cone broken-max
    python -m powerspace proptest --suite order --seed 7 --cases 200

JSON goes to stdout, logs to stderr. Exit status: 0 when the verdict is
true (or the command just computes a value), 1 for a false verdict or a
failing property, 2 when the input is rejected.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from powerspace.commands import (
    CommandResult,
    cmd_axioms,
    cmd_check_space,
    cmd_converge,
    cmd_denote,
    cmd_extend,
    cmd_interpolate,
    cmd_order,
    cmd_proptest,
    cmd_range,
    cmd_separate,
)
from powerspace.config import get_settings
from powerspace.documents import ErrorDocument, dump_document
from powerspace.errors import PowerspaceError
from powerspace.proptest import suite_names

logger = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output", "-o",
        metavar="FILE",
        help="Also write the JSON result to FILE",
    )
    common.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable debug logging",
    )

    spaced = argparse.ArgumentParser(add_help=False)
    spaced.add_argument(
        "--space",
        action="append",
        metavar="POSET",
        dest="spaces",
        default=[],
        help="Poset document the inputs refer to (repeatable)",
    )

    parser = argparse.ArgumentParser(
        prog="powerspace",
        description="Order, way-below and convergence on the probabilistic powerspace of finite posets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-space", parents=[common], help="Validate a poset and report its opens")
    p.add_argument("poset")

    p = sub.add_parser("order", parents=[common, spaced], help="Decide ≤, ≺ or ⋘ between valuations")
    p.add_argument("xi")
    p.add_argument("eta")
    p.add_argument("--relation", choices=["leq", "prec", "llcurly"], default="leq")

    p = sub.add_parser("extend", parents=[common, spaced], help="Evaluate the extension of a monotone map")
    p.add_argument("map")
    p.add_argument("xi")

    p = sub.add_parser("converge", parents=[common, spaced], help="Decide whether a directed family converges to ξ")
    p.add_argument("family")
    p.add_argument("xi")

    p = sub.add_parser("interpolate", parents=[common, spaced], help="Find ξ' with μ, ν ⋘ ξ' ⋘ ξ")
    p.add_argument("mu")
    p.add_argument("nu")
    p.add_argument("xi")

    p = sub.add_parser("separate", parents=[common, spaced], help="Find ξ' ⋘ μ with ξ' ≰ ν")
    p.add_argument("mu")
    p.add_argument("nu")

    p = sub.add_parser("denote", parents=[common], help="Evaluate a probabilistic program")
    p.add_argument("program")
    p.add_argument("poset")

    p = sub.add_parser("range", parents=[common, spaced], help="List the values a valuation takes on opens")
    p.add_argument("xi", nargs="?")
    p.add_argument("--uniform-chain", type=int, metavar="N", help="Use Σ (1/N)·η_{i/N} on the chain 1/N..N/N")

    p = sub.add_parser("axioms", parents=[common, spaced], help="Check the cone axioms on a sample set")
    p.add_argument("--cone", choices=["cx", "rational", "broken-max"], default="cx")
    p.add_argument("--samples", metavar="FAMILY", help="Family document whose members are the samples (cx only)")

    p = sub.add_parser("proptest", parents=[common], help="Run a seeded property suite")
    p.add_argument("--suite", choices=suite_names(), default="all")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true", help="Walk every small poset instead of sampling")
    p.add_argument("--max-elements", type=int, default=None)
    return parser


def dispatch(args: argparse.Namespace) -> CommandResult:
    match args.command:
        case "check-space":
            return cmd_check_space(args.poset)
        case "order":
            return cmd_order(args.xi, args.eta, spaces=args.spaces, relation=args.relation)
        case "extend":
            return cmd_extend(args.map, args.xi, spaces=args.spaces)
        case "converge":
            return cmd_converge(args.family, args.xi, spaces=args.spaces)
        case "interpolate":
            return cmd_interpolate(args.mu, args.nu, args.xi, spaces=args.spaces)
        case "separate":
            return cmd_separate(args.mu, args.nu, spaces=args.spaces)
        case "denote":
            return cmd_denote(args.program, args.poset)
        case "range":
            return cmd_range(args.xi, spaces=args.spaces, uniform_chain=args.uniform_chain)
        case "axioms":
            return cmd_axioms(args.cone, spaces=args.spaces, family_path=args.samples)
        case "proptest":
            return cmd_proptest(
                args.suite,
                seed=args.seed,
                cases=args.cases,
                exhaustive=args.exhaustive,
                max_elements=args.max_elements,
            )
    raise AssertionError(f"unhandled command {args.command!r}")


def _emit(text: str, output: str | None) -> None:
    print(text)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else get_settings().logging_level
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    # Suppress noisy libraries unless verbose
    if not args.verbose:
        logging.getLogger("hypothesis").setLevel(logging.WARNING)
        logging.getLogger("networkx").setLevel(logging.WARNING)

    try:
        result = dispatch(args)
    except PowerspaceError as exc:
        logger.error("%s: %s", exc.code, exc.message)
        _emit(dump_document(ErrorDocument.from_error(exc)), args.output)
        return EXIT_ERROR

    _emit(dump_document(result.document), args.output)
    logger.debug("%s -> exit %d", args.command, result.exit_code)
    return EXIT_TRUE if result.verdict else EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
