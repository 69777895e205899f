"""Textual polynomial expressions.

Grammar (whitespace ignored everywhere):

    poly   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := 'x' INDEX ('^' EXP)?      INDEX >= 1, EXP >= 1

Variables are fixed to x1..xk.  Coefficients are implicitly 1; an
explicit coefficient such as "2*x1" is rejected loudly rather than
silently reduced mod 2.  Repeated monomials cancel.
"""

from __future__ import annotations

from .errors import InputError, ParseError
from .poly import Monomial, PolyF2


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            raise ParseError(self.pos, "unexpected end of input")
        self.pos += 1
        return ch

    def integer(self, what: str) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            found = self.text[start] if start < len(self.text) else "end of input"
            raise ParseError(start, f"expected {what}, found {found!r}")
        return int(self.text[start : self.pos])


def _parse_factor(scanner: _Scanner, k: int) -> tuple[int, int]:
    """One factor 'xI' or 'xI^E'; returns (variable index 0-based, exponent)."""
    pos = scanner.pos
    ch = scanner.peek()
    if ch is None:
        raise ParseError(scanner.pos, "expected a factor, found end of input")
    if ch.isdigit():
        raise ParseError(
            scanner.pos,
            "explicit coefficients are not supported (arithmetic is mod 2); "
            "write each monomial with coefficient 1",
        )
    if ch != "x":
        raise ParseError(scanner.pos, f"expected 'x', found {ch!r}")
    scanner.take()
    pos = scanner.pos
    index = scanner.integer("a variable index after 'x'")
    if index < 1:
        raise ParseError(pos, "variable indices start at 1")
    if index > k:
        raise ParseError(pos, f"variable x{index} exceeds the declared count k={k}")
    exponent = 1
    if scanner.peek() == "^":
        scanner.take()
        pos = scanner.pos
        exponent = scanner.integer("an exponent after '^'")
        if exponent < 1:
            raise ParseError(pos, "exponents must be >= 1")
    return index - 1, exponent


def _parse_term(scanner: _Scanner, k: int) -> Monomial:
    exps = [0] * k
    var, e = _parse_factor(scanner, k)
    exps[var] += e
    while scanner.peek() == "*":
        scanner.take()
        var, e = _parse_factor(scanner, k)
        exps[var] += e
    return tuple(exps)


def parse_poly(text: str, k: int) -> PolyF2:
    """Parse a polynomial over x1..xk; raises ParseError / InputError."""
    if k < 1:
        raise InputError(f"variable count must be >= 1, got {k}")
    scanner = _Scanner(text)
    if scanner.peek() is None:
        raise ParseError(0, "empty polynomial expression")
    terms: list[tuple[int, Monomial]] = []  # (position, monomial)
    terms.append((scanner.pos, _parse_term(scanner, k)))
    while True:
        ch = scanner.peek()
        if ch is None:
            break
        if ch != "+":
            raise ParseError(scanner.pos, f"expected '+' or end of input, found {ch!r}")
        scanner.take()
        terms.append((scanner.pos, _parse_term(scanner, k)))
    first_pos, first = terms[0]
    d0 = sum(first)
    for pos, m in terms[1:]:
        if sum(m) != d0:
            raise InputError(
                f"polynomial is not homogeneous: term at position {pos} has "
                f"degree {sum(m)}, the first term has degree {d0}"
            )
    return PolyF2(k, (m for _, m in terms))


def format_mono(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(f: PolyF2) -> str:
    """Canonical text: terms ascending in the monomial order, '0' for zero."""
    if f.is_zero():
        return "0"
    return " + ".join(format_mono(m) for m in f.sorted_terms())
