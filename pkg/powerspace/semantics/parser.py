"""Recursive-descent parser for program text.

Whitespace and newlines are free; ``#`` starts a comment running to the
end of the line. Errors carry the 1-based line and column of the
offending token.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

from powerspace.errors import DocumentError, ProgramSyntaxError, UnknownState
from powerspace.poset import FinitePoset
from powerspace.semantics.program import Bind, Choice, Par, Program, Ret, Scale, states
from powerspace.valuation import format_rational, to_fraction

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"(?P<comment>\#[^\n]*)"
    r"|(?P<space>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<punct>[(){},])"
    r"|(?P<word>(?:(?!->)[^\s(){},\#])+)"
)
_KEYWORDS = frozenset({"ret", "choice", "scale", "par", "bind"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ProgramSyntaxError(
                f"unexpected character {text[pos]!r}", line=line, column=pos - line_start + 1
            )
        kind = match.lastgroup or ""
        if kind not in ("comment", "space"):
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        for offset, char in enumerate(match.group()):
            if char == "\n":
                line, line_start = line + 1, pos + offset + 1
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None) -> ProgramSyntaxError:
        at = token or self.current
        return ProgramSyntaxError(message, line=at.line, column=at.column)

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "word":
            raise self.error(f"expected {text!r}, found {self.current.text or 'end of input'!r}")
        return self.advance()

    def word(self, what: str) -> Token:
        if self.current.kind != "word":
            raise self.error(f"expected {what}, found {self.current.text or 'end of input'!r}")
        return self.advance()

    def rational(self, what: str) -> tuple[Fraction, Token]:
        token = self.word(what)
        try:
            return to_fraction(token.text), token
        except DocumentError as exc:
            raise self.error(f"{what} {token.text!r} is not a rational", token) from exc

    def program(self) -> Program:
        program = self.expr()
        if self.current.kind != "eof":
            raise self.error(f"unexpected trailing input {self.current.text!r}")
        return program

    def expr(self) -> Program:
        token = self.current
        if token.text == "(" and token.kind == "punct":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind != "word" or token.text not in _KEYWORDS:
            raise self.error(f"expected an expression, found {token.text or 'end of input'!r}")
        self.advance()
        match token.text:
            case "ret":
                return Ret(self.word("a state").text)
            case "choice":
                p, at = self.rational("probability")
                if not 0 < p < 1:
                    raise self.error(f"probability {format_rational(p)} out of range (0, 1)", at)
                return Choice(p, self.expr(), self.expr())
            case "scale":
                a, at = self.rational("scale factor")
                if a < 0:
                    raise self.error(f"scale factor {format_rational(a)} is negative", at)
                return Scale(a, self.expr())
            case "par":
                return Par(self.expr(), self.expr())
            case _:
                return Bind(self.expr(), self.table())

    def table(self) -> tuple[tuple[str, Program], ...]:
        self.expect("{")
        entries: list[tuple[str, Program]] = []
        seen: set[str] = set()
        while not (self.current.kind == "punct" and self.current.text == "}"):
            if entries:
                self.expect(",")
            key = self.word("a state")
            if key.text in seen:
                raise self.error(f"duplicate binder entry for {key.text!r}", key)
            seen.add(key.text)
            self.expect("->")
            entries.append((key.text, self.expr()))
        self.expect("}")
        return tuple(entries)


def parse(text: str, space: FinitePoset | None = None) -> Program:
    """Parse program text; with ``space``, also check every state is known.

    Raises:
        ProgramSyntaxError: On malformed text, with line and column.
        UnknownState: If a state is not an element of ``space``.
    """
    program = _Parser(text).program()
    if space is not None:
        check_states(program, space)
    return program


def check_states(program: Program, space: FinitePoset) -> None:
    unknown = sorted(states(program) - space.carrier)
    if unknown:
        raise UnknownState(
            f"states not in poset {space.name!r}: {unknown}", states=unknown
        )
