"""Buchberger's algorithm and ideal operations.

Pairs are selected by the normal strategy (smallest lcm, ties by index pair)
and pruned with the Gebauer-Moller criteria. Reduced Groebner bases are
monic and sorted ascending by leading monomial, which makes them canonical:
two ideals are equal exactly when their bases are identical term lists.
"""

from __future__ import annotations

import heapq
import math
from itertools import combinations
from operator import add, sub
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import series
from .errors import InputError
from .poly import Monomial, PolyRing, Polynomial

_NEGKEY_CACHE: Dict[str, dict] = {"grevlex": {}, "elim": {}}


def _negkey_fn(ring: PolyRing):
    """Heap key: smallest value = largest monomial in the ring order."""
    cache = _NEGKEY_CACHE[ring.order]
    if ring.order == "grevlex":
        def nk(m):
            v = cache.get(m)
            if v is None:
                v = cache[m] = (-sum(m), m[::-1])
            return v
    else:
        def nk(m):
            v = cache.get(m)
            if v is None:
                r = m[1:]
                v = cache[m] = (-m[0], -sum(r), r[::-1])
            return v
    return nk


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


class _Basis:
    """Growing list of monic polynomials (leading monomial + tail) with a
    cached divisor lookup. Divisors are chosen first-in-list, so results are
    deterministic."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.p = ring.field.p
        self.inv = ring.field.inv
        self.nk = _negkey_fn(ring)
        self.lms: List[Monomial] = []
        self.tails: List[list] = []
        self._div: Dict[Monomial, Tuple[int, int]] = {}

    def __len__(self):
        return len(self.lms)

    def append(self, lm: Monomial, tail: list) -> None:
        self.lms.append(lm)
        self.tails.append(tail)

    def divisor(self, m: Monomial) -> int:
        hit = self._div.get(m)
        start = 0
        if hit is not None:
            if hit[0] >= 0:
                return hit[0]
            start = hit[1]
        lms = self.lms
        for k in range(start, len(lms)):
            g = lms[k]
            for a, b in zip(g, m):
                if a > b:
                    break
            else:
                self._div[m] = (k, 0)
                return k
        self._div[m] = (-1, len(lms))
        return -1

    def reduce(self, f: dict, skip: int = -1) -> dict:
        """Full normal form of the polynomial dict ``f``; ``skip`` excludes one
        basis element (used for interreduction)."""
        p = self.p
        nk = self.nk
        acc = dict(f)
        heap = [(nk(m), m) for m in acc]
        heapq.heapify(heap)
        rem = {}
        lms, tails = self.lms, self.tails
        while heap:
            m = heapq.heappop(heap)[1]
            c = acc.pop(m)
            if not c:
                continue
            if skip >= 0:
                k = -1
                for idx, g in enumerate(lms):
                    if idx != skip and _divides(g, m):
                        k = idx
                        break
            else:
                k = self.divisor(m)
            if k < 0:
                rem[m] = c
                continue
            q = tuple(map(sub, m, lms[k]))
            for gm, gc in tails[k]:
                mm = tuple(map(add, q, gm))
                old = acc.get(mm)
                if old is None:
                    acc[mm] = (-c * gc) % p if p else -c * gc
                    heapq.heappush(heap, (nk(mm), mm))
                else:
                    acc[mm] = (old - c * gc) % p if p else old - c * gc
        return rem

    def monic_split(self, f: dict) -> Tuple[Monomial, list]:
        """Leading monomial and monic tail of a nonzero polynomial dict."""
        items = sorted(f.items(), key=lambda t: self.nk(t[0]))
        lm, lc = items[0]
        inv = self.inv(lc)
        p = self.p
        tail = [(m, (c * inv) % p if p else c * inv) for m, c in items[1:]]
        return lm, tail


def _spoly(basis: _Basis, i: int, j: int, lcm: Monomial) -> dict:
    p = basis.p
    out: dict = {}
    qi = tuple(map(sub, lcm, basis.lms[i]))
    for m, c in basis.tails[i]:
        out[tuple(map(add, qi, m))] = c
    qj = tuple(map(sub, lcm, basis.lms[j]))
    for m, c in basis.tails[j]:
        mm = tuple(map(add, qj, m))
        v = out.get(mm, 0) - c
        out[mm] = v % p if p else v
    return {m: c for m, c in out.items() if c}


def _all_monomials_covered(lms: Sequence[Monomial], n: int, t: int, ring: PolyRing) -> bool:
    """True if every degree-t monomial is divisible by some element of lms."""
    pure = [False] * n
    for g in lms:
        s = [i for i, e in enumerate(g) if e]
        if len(s) == 1:
            pure[s[0]] = True
    if not all(pure):
        return False
    if math.comb(t + n - 1, n - 1) > 20000:
        return False
    for m in ring.monomials_of_degree(t):
        if not any(_divides(g, m) for g in lms):
            return False
    return True


def buchberger(polys: Iterable[dict], ring: PolyRing,
               base: Sequence[Tuple[Monomial, list]] = ()) -> List[Tuple[Monomial, list]]:
    """Reduced Groebner basis of the ideal generated by the polynomial dicts
    together with ``base``, a reduced Groebner basis given as (leading
    monomial, monic tail) pairs whose mutual S-pairs are skipped.

    Returns (leading monomial, monic tail) pairs sorted ascending."""
    p = ring.field.p
    if p:
        polys = [{m: c % p for m, c in f.items() if c % p} for f in polys]
    polys = [f for f in polys if f]
    if not polys and not base:
        return []
    basis = _Basis(ring)
    key = ring.key
    n = ring.nvars

    if all(not t for _, t in base) and all(len(f) == 1 for f in polys):
        lms = series.minimalize([next(iter(f)) for f in polys] + [m for m, _ in base])
        return sorted(((m, []) for m in lms), key=lambda t: key(t[0]))

    homogeneous = ring.homogeneous_order and all(
        len({sum(m) for m in f}) == 1 for f in polys) and all(
        all(sum(m) == sum(lm) for m, _ in tail) for lm, tail in base)
    for lm, tail in base:
        basis.append(lm, list(tail))

    pairs: Dict[Tuple[int, int], Monomial] = {}
    heap: list = []

    def update(lm_f: Monomial) -> None:
        k = len(basis) - 1
        lms = basis.lms
        # criterion B on old pairs
        for (i, j), L in list(pairs.items()):
            if (_divides(lm_f, L) and L != _lcm(lms[i], lm_f) and L != _lcm(lms[j], lm_f)):
                del pairs[(i, j)]
        groups: Dict[Monomial, List[int]] = {}
        for i in range(k):
            groups.setdefault(_lcm(lms[i], lm_f), []).append(i)
        kept: List[Monomial] = []
        for L in sorted(groups, key=key):
            if any(_divides(L2, L) for L2 in kept):
                continue
            kept.append(L)
        for L in kept:
            idx = groups[L]
            if any(L == tuple(map(add, lms[i], lm_f)) for i in idx):
                continue  # coprime leading monomials: product criterion
            i = min(idx)
            pairs[(i, k)] = L
            heapq.heappush(heap, (key(L), i, k))

    def insert(r: dict) -> None:
        lm, tail = basis.monic_split(r)
        basis.append(lm, tail)
        update(lm)

    for f in sorted(polys, key=lambda f: key(max(f, key=key))):
        r = basis.reduce(f)
        if r:
            insert(r)

    checked_degree = -1
    covered = False
    while heap:
        _, i, j = heapq.heappop(heap)
        L = pairs.pop((i, j), None)
        if L is None:
            continue
        if homogeneous:
            t = sum(L)
            if t > checked_degree:
                covered = _all_monomials_covered(basis.lms, n, t, ring)
                checked_degree = t
            if covered:
                # every remaining S-polynomial has degree >= t and reduces to 0
                break
        s = _spoly(basis, i, j, L)
        if s:
            r = basis.reduce(s)
            if r:
                insert(r)
                checked_degree = -1

    return _interreduce(basis, ring)


def _interreduce(basis: _Basis, ring: PolyRing) -> List[Tuple[Monomial, list]]:
    key = ring.key
    order = sorted(range(len(basis)), key=lambda k: key(basis.lms[k]))
    minimal: List[int] = []
    for k in order:
        if not any(_divides(basis.lms[i], basis.lms[k]) for i in minimal):
            minimal.append(k)
    red = _Basis(ring)
    for k in minimal:
        red.append(basis.lms[k], basis.tails[k])
    out = []
    for idx in range(len(red)):
        tail = red.reduce(dict(red.tails[idx]), skip=idx)
        items = sorted(tail.items(), key=lambda t: red.nk(t[0]))
        out.append((red.lms[idx], items))
    return out


# -- Ideal ---------------------------------------------------------------

_GB_MEMO: Dict[tuple, tuple] = {}
_GB_MEMO_SIZE = 50_000

def _as_dict(f: Polynomial) -> dict:
    return dict(f.terms)


class Ideal:
    """Ideal of a polynomial ring with a lazily cached reduced Groebner basis.

    The cache is written once with a finished tuple, so concurrent readers see
    either nothing or the canonical basis."""

    __slots__ = ("ring", "gens", "_gb", "_numerator", "_reducer", "_base")

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial] = (), _base=None):
        gens = tuple(gens)
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise InputError("ideal generators must lie in the same ring", "E_RING_MISMATCH")
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        self._gb = None
        self._numerator = None
        self._reducer = None
        # a reduced Groebner basis contained in the ideal, used to seed Buchberger
        self._base = _base

    @classmethod
    def from_groebner(cls, ideal: "Ideal") -> "Ideal":
        """Copy of ``ideal`` generated by its reduced Groebner basis."""
        out = cls(ideal.ring, ideal.gb)
        out._gb = ideal.gb
        out._numerator = ideal._numerator
        out._reducer = ideal._reducer
        return out

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def maximal(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, ring.gens())

    # -- Groebner data ------------------------------------------------------
    @property
    def gb(self) -> Tuple[Polynomial, ...]:
        if self._gb is None:
            key = (self.ring, tuple(sorted(g.terms for g in self.gens)))
            hit = _GB_MEMO.get(key)
            if hit is not None:
                self._gb = hit
                return hit
            if self._base:
                base_set = set(self._base)
                base = [(g.lm, list(g.terms[1:])) for g in self._base]
                rest = [_as_dict(g) for g in self.gens if g not in base_set]
                raw = buchberger(rest, self.ring, base)
            else:
                raw = buchberger([_as_dict(g) for g in self.gens], self.ring)
            self._gb = tuple(Polynomial(self.ring, dict([(lm, 1)] + tail)) for lm, tail in raw)
            if len(_GB_MEMO) >= _GB_MEMO_SIZE:
                _GB_MEMO.pop(next(iter(_GB_MEMO)))
            _GB_MEMO[key] = self._gb
        return self._gb

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.lm for g in self.gb)

    @property
    def homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def _basis(self) -> _Basis:
        if self._reducer is None:
            b = _Basis(self.ring)
            for g in self.gb:
                b.append(g.lm, list(g.terms[1:]))
            self._reducer = b
        return self._reducer

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form of f modulo the ideal."""
        if f.ring != self.ring:
            raise InputError("polynomial and ideal live in different rings", "E_RING_MISMATCH")
        return Polynomial(self.ring, self._basis().reduce(_as_dict(f)))

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials)

    def is_zero(self) -> bool:
        return not self.gens

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gb)

    def _canonical(self):
        return tuple(g.terms for g in self.gb)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.gens) + ")"

    def _small_gens(self) -> Tuple[Polynomial, ...]:
        if self._gb is not None and len(self._gb) <= len(self.gens):
            return self._gb
        return self.gens

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "Ideal") -> None:
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise InputError("ideals live in different rings", "E_RING_MISMATCH")

    def __add__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        a, b = self, other
        if b._gb is not None and (a._gb is None or len(b._gb) > len(a._gb)):
            a, b = b, a
        if a._gb is not None:
            return Ideal(self.ring, a._gb + b._small_gens(), _base=a._gb)
        return Ideal(self.ring, a.gens + b._small_gens())

    def __mul__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        a, b = self._small_gens(), other._small_gens()
        return Ideal(self.ring, [f * g for f in a for g in b])

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise InputError("negative ideal power", "E_INPUT")
        result = Ideal.unit(self.ring)
        for _ in range(k):
            result = Ideal.from_groebner(result * self)
        return result

    def intersect(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Ideal(self.ring)
        if self.is_monomial() and other.is_monomial():
            lcms = [_lcm(a, b) for a in self.leading_monomials for b in other.leading_monomials]
            return Ideal(self.ring, [self.ring.monomial(m) for m in series.minimalize(lcms)])
        er = self.ring.elimination_ring()
        t = (1,) + (0,) * self.ring.nvars
        polys = []
        for g in self._small_gens():
            polys.append({(1,) + m: c for m, c in g.terms})
        for g in other._small_gens():
            d = {(0,) + m: c for m, c in g.terms}
            for m, c in g.terms:
                mm = (1,) + m
                d[mm] = d.get(mm, 0) - c
            polys.append(d)
        gb = buchberger(polys, er)
        gens = []
        for lm, tail in gb:
            if lm[0] == 0:
                gens.append(Polynomial(self.ring, {m[1:]: c for m, c in [(lm, 1)] + tail}))
        return Ideal(self.ring, gens)

    def colon(self, other: "Ideal") -> "Ideal":
        """(self : other), computed as the intersection of (self : f) over the
        generators f of ``other``."""
        self._check(other)
        if other.is_zero():
            raise InputError("colon by the zero ideal", "E_ZERO_DIVISOR")
        result: Optional[Ideal] = None
        for f in other._small_gens():
            part = self._colon_principal(f)
            result = part if result is None else result.intersect(part)
        return Ideal.from_groebner(result)

    def _colon_principal(self, f: Polynomial) -> "Ideal":
        if self.contains(f):
            return Ideal.unit(self.ring)
        if f.is_monomial() and self.is_monomial():
            m = f.lm
            gens = series.minimalize(
                [tuple(max(a - b, 0) for a, b in zip(g, m)) for g in self.leading_monomials])
            return Ideal(self.ring, [self.ring.monomial(g) for g in gens])
        inter = self.intersect(Ideal(self.ring, [f]))
        return Ideal(self.ring, [_divide_exact(g, f) for g in inter.gb])

    def saturate(self, other: "Ideal") -> "Ideal":
        """(self : other^infinity) by iterated colon until the chain stabilizes."""
        cur = Ideal.from_groebner(self)
        while True:
            nxt = cur.colon(other)
            if nxt == cur:
                return cur
            cur = nxt

    # -- combinatorics of the leading-term ideal -----------------------------
    def hilbert_numerator(self) -> List[int]:
        """N(z) with HS(S/I) = N(z) / (1-z)^n (n = number of variables)."""
        if not self.homogeneous:
            raise InputError("Hilbert series needs a homogeneous ideal", "E_NONHOMOGENEOUS")
        if self._numerator is None:
            self._numerator = tuple(series.hilbert_numerator(self.leading_monomials, self.ring.nvars))
        return list(self._numerator)

    def graded_piece_dim(self, t: int) -> int:
        """dim_k (S/I)_t."""
        if t < 0:
            return 0
        return series.series_coeffs(self.hilbert_numerator(), self.ring.nvars, t)[t]

    def krull_dim(self) -> int:
        """dim S/I: size of a largest set of variables no leading monomial lives in."""
        if self.is_unit():
            raise InputError("the unit ideal has no dimension", "E_UNIT_IDEAL")
        n = self.ring.nvars
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in self.leading_monomials]
        for size in range(n, -1, -1):
            for U in combinations(range(n), size):
                U = frozenset(U)
                if not any(s <= U for s in supports):
                    return size
        return 0

    def colength(self):
        """dim_k S/I, or math.inf."""
        q = self.hilbert_numerator()
        for _ in range(self.ring.nvars):
            q = series.div_one_minus_z(q)
            if q is None:
                return math.inf
        return sum(q)


def _divide_exact(g: Polynomial, f: Polynomial) -> Polynomial:
    ring = g.ring
    quotient: dict = {}
    r = g
    inv = ring.field.inv(f.lc)
    while r:
        m, c = r.terms[0]
        if not _divides(f.lm, m):
            raise ArithmeticError("inexact polynomial division")
        qm = tuple(map(sub, m, f.lm))
        qc = c * inv
        quotient[qm] = quotient.get(qm, 0) + qc
        r = r - Polynomial(ring, {qm: qc}) * f
    return Polynomial(ring, quotient)


# -- functional surface ----------------------------------------------------

def groebner_basis(gens: Sequence[Polynomial]) -> Ideal:
    gens = list(gens)
    if gens:
        ring = gens[0].ring
        if any(g.ring != ring for g in gens):
            raise InputError("generators come from different rings", "E_RING_MISMATCH")
    else:
        raise InputError("groebner_basis needs a ring; pass Ideal(ring, []) for the zero ideal",
                         "E_INPUT")
    ideal = Ideal(ring, gens)
    ideal.gb
    return ideal


def normal_form(f: Polynomial, ideal: Ideal) -> Polynomial:
    return ideal.reduce(f)


def ideal_arith(op: str, I: Ideal, other) -> Ideal:
    if op == "sum":
        return I + other
    if op == "product":
        return I * other
    if op == "power":
        return I ** int(other)
    raise InputError(f"unknown ideal operation {op!r}", "E_INPUT")


def ideal_colon(I: Ideal, J: Ideal) -> Ideal:
    return I.colon(J)


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    return I.intersect(J)


def saturation(I: Ideal, J: Ideal) -> Ideal:
    if J.is_zero():
        raise InputError("saturation by the zero ideal", "E_ZERO_DIVISOR")
    return I.saturate(J)


def graded_piece_dim(I: Ideal, t: int) -> int:
    return I.graded_piece_dim(t)


def krull_dim(I: Ideal) -> int:
    return I.krull_dim()
