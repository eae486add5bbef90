"""Graded quotient rings A = S/I and cyclic modules M = S/K over them.

The maximal ideal is the ideal of the variables. Lengths of graded pieces come
from exact Hilbert series numerators, so every length here is an exact
integer or ``math.inf``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import series
from .errors import CertificationError, InconsistencyError, InputError
from .groebner import Ideal
from .parser import parse_polynomial
from .poly import FieldSpec, PolyRing, Polynomial

INFINITE = math.inf

PolyLike = Union[Polynomial, "RingElement"]


@dataclass(frozen=True, eq=False)
class GradedRing:
    ambient: PolyRing
    defining: Ideal

    @property
    def dim(self) -> int:
        return self.defining.krull_dim()

    @property
    def maximal_ideal(self) -> Ideal:
        return Ideal.maximal(self.ambient)

    def as_module(self) -> "CyclicModule":
        return CyclicModule(self, self.defining)

    def module(self, relations: Sequence[Polynomial] = ()) -> "CyclicModule":
        return CyclicModule(self, self.defining + Ideal(self.ambient, relations))

    def element(self, f: Polynomial) -> "RingElement":
        return RingElement(self, f)


def make_ring(variables: Sequence[str], relations: Sequence = (), field: FieldSpec = None) -> GradedRing:
    """Build A = k[variables]/(relations); relations may be text or polynomials."""
    ring = PolyRing(tuple(variables), field or FieldSpec())
    polys = [parse_polynomial(r, ring) if isinstance(r, str) else r for r in relations]
    for f in polys:
        if not f.is_homogeneous():
            raise InputError(f"relation {f} is not homogeneous", "E_NONHOMOGENEOUS")
    I = Ideal(ring, polys)
    if I.is_unit():
        raise InputError("the relations generate the unit ideal", "E_UNIT_IDEAL")
    return GradedRing(ring, I)


class RingElement:
    """Element of A, stored by its normal form modulo I."""

    __slots__ = ("ring", "representative")

    def __init__(self, ring: GradedRing, f: Polynomial):
        self.ring = ring
        self.representative = ring.defining.reduce(f)

    @property
    def degree(self) -> Optional[int]:
        f = self.representative
        return f.degree() if f and f.is_homogeneous() else None

    def is_zero(self) -> bool:
        return self.representative.is_zero()

    def __str__(self):
        return str(self.representative)


def _poly(a: PolyLike) -> Polynomial:
    return a.representative if isinstance(a, RingElement) else a


class CyclicModule:
    """M = S/K with I contained in K."""

    def __init__(self, ring: GradedRing, K: Ideal):
        if not K.homogeneous:
            raise InputError("module relations must be homogeneous", "E_NONHOMOGENEOUS")
        if K.is_unit():
            raise InputError("the module is zero (unit ideal)", "E_UNIT_IDEAL")
        if not ring.defining.issubset(K):
            raise InputError("module relations must contain the ring relations", "E_MODULE")
        self.ring = ring
        self.defining = K
        self._dim = None

    @property
    def S(self) -> PolyRing:
        return self.ring.ambient

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = self.defining.krull_dim()
        return self._dim

    @property
    def finite_length(self) -> bool:
        return self.dim == 0

    def quotient(self, elements: Sequence[PolyLike]) -> "CyclicModule":
        """M / (a_1, ..., a_r) M."""
        extra = Ideal(self.S, [_poly(a) for a in elements])
        return CyclicModule(self.ring, Ideal.from_groebner(self.defining + extra))

    def __repr__(self):
        return f"CyclicModule(S/{self.defining!r})"


# -- lengths ---------------------------------------------------------------

def series_length(numerator: Sequence[int], n: int):
    """Sum of coefficients of numerator/(1-z)^n if it is a polynomial, else inf."""
    q = list(numerator)
    for _ in range(n):
        q = series.div_one_minus_z(q)
        if q is None:
            return INFINITE
    return sum(q)


def length(M: CyclicModule):
    """lambda(M): the number of standard monomials of K, or inf."""
    return M.defining.colength()


def quotient_length(X: Ideal, Y: Ideal):
    """lambda(X/Y) for ideals Y contained in X."""
    num = series.sub(Y.hilbert_numerator(), X.hilbert_numerator())
    return series_length(num, X.ring.nvars)


def kernel_numerator(K: Ideal, a: Polynomial, X: Optional[Ideal] = None) -> list:
    """Hilbert numerator of the kernel of multiplication by a on X/K.

    From 0 -> ker_t -> (X/K)_t -> (X/K)_{t+e} -> (X/(aX+K))_{t+e} -> 0."""
    if a.is_zero() or not a.is_homogeneous():
        raise InputError("multiplier must be a nonzero homogeneous element", "E_INPUT")
    e = a.degree()
    S = K.ring
    aX = Ideal(S, [a]) if X is None else Ideal(S, [a]) * X
    NK = K.hilbert_numerator()
    base = NK if X is None else series.sub(NK, X.hilbert_numerator())
    image_gap = series.sub(NK, (aX + K).hilbert_numerator())
    return series.sub(base, series.shift(image_gap, -e))


def annihilator_length(M: CyclicModule, a: PolyLike, X: Optional[Ideal] = None):
    """lambda(0 :_{X M} a), where X M is the submodule (X + K)/K (default M)."""
    return series_length(kernel_numerator(M.defining, _poly(a), X), M.S.nvars)


# -- operations --------------------------------------------------------------

def zero_colon(M: CyclicModule, a: PolyLike) -> Ideal:
    """(K : a), which represents (0 :_M a) = (K : a)/K."""
    f = _poly(a)
    if M.ring.defining.contains(f):
        raise InputError("zero_colon needs a nonzero element of A", "E_ZERO_DIVISOR")
    return M.defining.colon(Ideal(M.S, [f]))


def h0_and_saturate(M: CyclicModule):
    """(lambda(W), M/W) with W the m-torsion of M; M/W is None when W = M."""
    K = M.defining
    K_sat = K.saturate(M.ring.maximal_ideal)
    w = quotient_length(K_sat, K)
    if w == INFINITE:
        raise InconsistencyError("H^0 of a finitely generated module has infinite length")
    if K_sat.is_unit():
        return w, None
    return w, CyclicModule(M.ring, K_sat)


def is_regular(M: CyclicModule, a: PolyLike) -> bool:
    """True iff (K : a) = K, decided by the Hilbert series of (K : a)/K."""
    return not kernel_numerator(M.defining, _poly(a))


def has_depth_zero(M: CyclicModule) -> bool:
    """True iff the maximal ideal is associated to M, i.e. (K : m) != K."""
    K = M.defining
    return K.colon(M.ring.maximal_ideal) != K


def generic_element(gens: Sequence[Polynomial], rng: random.Random) -> Polynomial:
    """Random linear combination of ``gens`` with nonzero seeded coefficients."""
    ring = gens[0].ring
    p = ring.field.p
    hi = p - 1 if p else 1000
    out = ring.zero()
    for g in gens:
        out = out + ring.constant(rng.randint(1, hi)) * g
    return out


def check_m_primary(q: Ideal, M: CyclicModule) -> None:
    if (q + M.defining).colength() == INFINITE:
        raise InputError("q is not primary to the maximal ideal", "E_Q_NOT_PRIMARY")


def grade(q: Ideal, M: CyclicModule, seed: int = 42, retries: int = 8) -> int:
    """Length of a maximal M-regular sequence of generic elements of q."""
    check_m_primary(q, M)
    rng = random.Random(seed)
    depth, cur = 0, M
    gens = list(q.gens)
    while True:
        if cur.dim == 0:
            return depth
        found = None
        for attempt in range(retries):
            a = generic_element(gens, rng)
            if is_regular(cur, a):
                found = a
                break
            if attempt == 0 and has_depth_zero(cur):
                return depth
        if found is None:
            raise CertificationError(
                f"no regular element found in {retries} tries although depth > 0; "
                "try another seed or a larger prime", "E_GENERICITY")
        depth += 1
        cur = cur.quotient([found])


def is_cohen_macaulay(M: CyclicModule, seed: int = 42, J: Optional[Ideal] = None,
                      e0: Optional[int] = None) -> bool:
    """depth M == dim M. When a maximal superficial ideal J and the multiplicity
    e0 are supplied, also checks that lambda(M/JM) == e0 agrees with the verdict."""
    verdict = grade(M.ring.maximal_ideal, M, seed) == M.dim
    if J is not None and e0 is not None:
        colength = length(M.quotient(J.gens))
        if (colength == e0) != verdict:
            raise InconsistencyError(
                f"CM verdict {verdict} disagrees with lambda(M/JM)={colength}, e0={e0}")
    return verdict
