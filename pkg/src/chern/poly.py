"""Exact multivariate polynomials over F_p or Q.

Monomials are exponent tuples. Coefficients are ints in [0, p) over F_p and
``fractions.Fraction`` over Q; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Optional, Tuple

from .errors import InputError

Monomial = Tuple[int, ...]

DEFAULT_PRIME = 32003
MAX_EXPONENT = 2**32 - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either F_p (``p`` an odd prime below 2**31) or the rationals (``p is None``)."""

    p: Optional[int] = DEFAULT_PRIME

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not (2 < self.p < 2**31) or not _is_prime(self.p):
                raise InputError(f"field characteristic must be an odd prime < 2^31, got {self.p}",
                                 "E_FIELD")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    def __call__(self, value) -> object:
        """Coerce an int or Fraction into the field."""
        p = self.p
        if p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise InputError(f"denominator {value.denominator} vanishes mod {p}", "E_ZERO_DENOM")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def inv(self, c):
        if self.p is None:
            return 1 / Fraction(c)
        return pow(c, -1, self.p)

    def neg(self, c):
        return (-c) % self.p if self.p is not None else -c

    def describe(self) -> dict:
        if self.p is None:
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.p}

    def to_text(self, c) -> str:
        """Signed representative: over F_p the one in (-p/2, p/2]."""
        if self.p is not None:
            c = c if c <= self.p // 2 else c - self.p
            return str(c)
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def elim_key(m: Monomial):
    """First variable eliminated (lex on it), grevlex on the remaining block."""
    return (m[0],) + grevlex_key(m[1:])


_ORDERS = {"grevlex": grevlex_key, "elim": elim_key}


@dataclass(frozen=True)
class PolyRing:
    """k[x_1..x_n] with a fixed monomial order ("grevlex", or "elim" for one
    auxiliary variable in front)."""

    variables: Tuple[str, ...]
    field: FieldSpec = field(default_factory=FieldSpec)
    order: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise InputError("a polynomial ring needs at least one variable", "E_RING")
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"duplicate variable names in {self.variables}", "E_RING")
        if self.order not in _ORDERS:
            raise InputError(f"unknown monomial order {self.order!r}", "E_RING")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def key(self):
        return _ORDERS[self.order]

    @property
    def homogeneous_order(self) -> bool:
        return self.order == "grevlex"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: 1})

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field(c)})

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.variables.index(i)
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, m: Monomial, c=1) -> "Polynomial":
        return Polynomial(self, {tuple(m): self.field(c)})

    def monomials_of_degree(self, t: int) -> list:
        """All degree-t monomials, descending in the ring order."""
        n = self.nvars
        out = []
        for combo in combinations_with_replacement(range(n), t):
            m = [0] * n
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
        out.sort(key=self.key, reverse=True)
        return out

    def elimination_ring(self) -> "PolyRing":
        name = "_t"
        while name in self.variables:
            name += "_"
        return PolyRing((name,) + self.variables, self.field, "elim")


class Polynomial:
    """Immutable polynomial; ``terms`` is sorted strictly descending."""

    __slots__ = ("ring", "terms", "_dict")

    def __init__(self, ring: PolyRing, coeffs: Dict[Monomial, object]):
        self.ring = ring
        p = ring.field.p
        if p is not None:
            items = [(m, c % p) for m, c in coeffs.items() if c % p]
        else:
            items = [(m, c) for m, c in coeffs.items() if c]
        for m, _ in items:
            if len(m) != ring.nvars:
                raise InputError(f"monomial {m} has wrong arity for {ring.variables}", "E_RING")
            if any(e > MAX_EXPONENT or e < 0 for e in m):
                raise InputError(f"exponent out of range in {m}", "E_OVERFLOW")
        items.sort(key=lambda t: ring.key(t[0]), reverse=True)
        self.terms = tuple(items)
        self._dict = None

    # -- basic queries -------------------------------------------------
    def as_dict(self) -> dict:
        if self._dict is None:
            self._dict = dict(self.terms)
        return self._dict

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def lm(self) -> Monomial:
        return self.terms[0][0]

    @property
    def lc(self):
        return self.terms[0][1]

    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m, _ in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.lc)
        return Polynomial(self.ring, {m: c * inv for m, c in self.terms})

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InputError("polynomials live in different rings", "E_RING_MISMATCH")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._check(other)
        d = dict(self.as_dict())
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                d[m] = d.get(m, 0) + c1 * c2
        return Polynomial(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative polynomial power", "E_INPUT")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        from .parser import format_polynomial

        return format_polynomial(self)
