"""Integer polynomials in z (coefficient lists, lowest degree first) and Hilbert
series numerators of monomial ideals."""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import List, Optional, Sequence, Tuple

ZPoly = List[int]


def trim(a: Sequence[int]) -> ZPoly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a: Sequence[int], b: Sequence[int]) -> ZPoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: Sequence[int], b: Sequence[int]) -> ZPoly:
    return add(a, [-c for c in b])


def mul(a: Sequence[int], b: Sequence[int]) -> ZPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def shift(a: Sequence[int], k: int) -> ZPoly:
    """Multiply by z^k; k may be negative if the low coefficients vanish."""
    if k >= 0:
        return trim([0] * k + list(a))
    if any(a[:-k]):
        raise ValueError("negative shift would drop nonzero coefficients")
    return trim(list(a[-k:]))


def div_one_minus_z(a: Sequence[int]) -> Optional[ZPoly]:
    """Exact division by (1 - z); None if (1 - z) does not divide ``a``."""
    a = trim(a)
    if not a:
        return []
    if sum(a) != 0:
        return None
    out, acc = [], 0
    for c in a[:-1]:
        acc += c
        out.append(acc)
    return trim(out)


def order_at_one(a: Sequence[int]) -> int:
    """Multiplicity of z = 1 as a root; -1 for the zero polynomial."""
    a = trim(a)
    if not a:
        return -1
    k = 0
    while True:
        q = div_one_minus_z(a)
        if q is None:
            return k
        a, k = q, k + 1


def series_coeffs(num: Sequence[int], d: int, upto: int) -> ZPoly:
    """Coefficients 0..upto of num(z)/(1-z)^d."""
    out = []
    for t in range(upto + 1):
        s = 0
        for k, c in enumerate(num):
            if k > t:
                break
            if c:
                s += c * (comb(t - k + d - 1, d - 1) if d > 0 else int(t == k))
        out.append(s)
    return out


def hilbert_coefficients(h: Sequence[int], upto: Optional[int] = None) -> ZPoly:
    """e_i = h^{(i)}(1)/i! = sum_k C(k, i) h_k for i = 0..upto (default deg h)."""
    if upto is None:
        upto = max(len(h) - 1, 0)
    return [sum(comb(k, i) * c for k, c in enumerate(h)) for i in range(upto + 1)]


def evaluate(a: Sequence[int], z: int) -> int:
    return sum(c * z**k for k, c in enumerate(a))


# -- monomial ideals --------------------------------------------------------

def minimalize(gens) -> Tuple[Tuple[int, ...], ...]:
    """Minimal generators of a monomial ideal, in a canonical (sorted) order."""
    ms = sorted(set(gens), key=sum)
    keep: list = []
    for m in ms:
        if not any(all(a <= b for a, b in zip(g, m)) for g in keep):
            keep.append(m)
    return tuple(sorted(keep))


def hilbert_numerator(gens, n: int) -> ZPoly:
    """Numerator N with HS(S/I) = N(z)/(1-z)^n for the monomial ideal I."""
    return list(_numerator(minimalize(gens), n))


@lru_cache(maxsize=200_000)
def _numerator(gens: Tuple[Tuple[int, ...], ...], n: int) -> Tuple[int, ...]:
    if not gens:
        return (1,)
    supports = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    if any(not s for s in supports):  # unit ideal
        return ()
    used: set = set()
    disjoint = True
    for s in supports:
        if used.intersection(s):
            disjoint = False
            break
        used.update(s)
    if disjoint:
        out = [1]
        for g in gens:
            out = mul(out, [1] + [0] * (sum(g) - 1) + [-1])
        return tuple(out)
    # pivot on the variable occurring in most generators
    counts = [0] * n
    for s in supports:
        for i in s:
            counts[i] += 1
    i = max(range(n), key=lambda k: (counts[k], -k))
    exps = sorted(g[i] for g in gens if g[i])
    e = exps[(len(exps) - 1) // 2]
    pivot = tuple(e if k == i else 0 for k in range(n))
    plus = minimalize([g for g in gens if g[i] < e] + [pivot])
    colon = minimalize([tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens])
    return tuple(add(_numerator(plus, n), shift(_numerator(colon, n), e)))
