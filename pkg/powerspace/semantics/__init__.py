"""A small probabilistic-choice language denoted in the free cone."""

from powerspace.semantics.denote import denote, expected_mass
from powerspace.semantics.parser import parse
from powerspace.semantics.program import Bind, Choice, Par, Program, Ret, Scale, pretty

__all__ = [
    "Bind",
    "Choice",
    "Par",
    "Program",
    "Ret",
    "Scale",
    "denote",
    "expected_mass",
    "parse",
    "pretty",
]
