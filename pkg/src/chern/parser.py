"""Polynomial text grammar.

    poly   := term (("+" | "-") term)*
    term   := ["-"] factor ("*" factor)*
    factor := coeff | var ["^" nat]
    coeff  := nat ["/" nat]
    var    := letter (letter | digit)*

Whitespace is ignored between tokens. Multiplication must be explicit.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError, ParseError
from .poly import PolyRing, Polynomial


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.pos = 0
        self.index = {v: i for i, v in enumerate(ring.variables)}

    def error(self, msg: str, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def factor(self):
        """Return (coefficient, exponent list)."""
        ch = self.peek()
        n = self.ring.nvars
        if ch.isdigit():
            num = self.nat()
            if self.peek() == "/":
                slash = self.pos
                self.pos += 1
                den = self.nat()
                if den == 0:
                    self.error("zero denominator", slash)
                return Fraction(num, den), [0] * n
            return Fraction(num), [0] * n
        if ch.isalpha():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isalnum():
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.index:
                raise ParseError(f"unknown variable {name!r}", start, self.text)
            exp = 1
            if self.peek() == "^":
                self.pos += 1
                exp = self.nat()
            m = [0] * n
            m[self.index[name]] = exp
            return Fraction(1), m
        self.error("expected a coefficient or variable" if ch else "unexpected end of input")

    def term(self):
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        coeff, mon = self.factor()
        while self.peek() == "*":
            self.pos += 1
            c, m = self.factor()
            coeff *= c
            mon = [a + b for a, b in zip(mon, m)]
        return sign * coeff, tuple(mon)

    def poly(self) -> Polynomial:
        terms = {}

        def push(c, m):
            terms[m] = terms.get(m, 0) + self.ring.field(c)

        push(*self.term())
        while True:
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
            c, m = self.term()
            push(c if ch == "+" else -c, m)
        return Polynomial(self.ring, terms)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    if not isinstance(text, str):
        raise InputError(f"polynomial must be given as text, got {text!r}", "E_SYNTAX")
    return _Parser(text, ring).poly()


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: descending terms, explicit '*', unit coefficients omitted."""
    if not f.terms:
        return "0"
    ring = f.ring
    out = []
    for i, (m, c) in enumerate(f.terms):
        s = ring.field.to_text(c)
        neg = s.startswith("-")
        s = s.lstrip("-")
        factors = []
        for name, e in zip(ring.variables, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if s != "1" or not factors:
            factors.insert(0, s)
        body = "*".join(factors)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
