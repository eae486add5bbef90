"""Good q-filtrations of cyclic modules, their Hilbert data, and superficial
sequences.

A filtration of M = S/K is stored through ideals a_j of S containing K, with
M_j = a_j/K. The first terms come from an explicit head, later ones from the
continuation rule a_{j+1} = q a_j + K. Every length used below is the
colength of some a_j, so all numbers are exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence

from . import series
from .errors import CertificationError, InconsistencyError, InputError
from .groebner import Ideal
from .local import (
    INFINITE,
    CyclicModule,
    annihilator_length,
    generic_element,
    h0_and_saturate,
    quotient_length,
)
from .poly import Polynomial

DEFAULT_WINDOW = 4
DEFAULT_MAX_INDEX = 64


def _reduced(I: Ideal) -> Ideal:
    return Ideal.from_groebner(I)


def check_equigenerated(q: Ideal) -> int:
    """Common degree of the generators of q."""
    if q.is_zero():
        raise InputError("q must be nonzero", "E_Q_NOT_PRIMARY")
    degrees = {g.degree() for g in q.gens}
    if len(degrees) != 1 or not all(g.is_homogeneous() for g in q.gens):
        raise InputError("q must be generated by homogeneous elements of one degree",
                         "E_Q_NOT_EQUIGENERATED")
    return degrees.pop()


class Filtration:
    """M = M_0 ⊇ M_1 ⊇ ... with q M_j ⊆ M_{j+1} and M_{j+1} = q M_j past the head."""

    def __init__(self, module: CyclicModule, q: Ideal, head: Sequence[Ideal] = (),
                 validate: bool = True):
        self.module = module
        self.q = q
        self.delta = check_equigenerated(q)
        K = module.defining
        self.head = [_reduced(a + K) for a in head]
        self._terms: Dict[int, Ideal] = {0: Ideal.unit(module.S)}
        self._colength: Dict[int, int] = {}
        self._hd: Dict[tuple, "HilbertData"] = {}
        if validate:
            self._validate()

    @classmethod
    def adic(cls, module: CyclicModule, q: Ideal) -> "Filtration":
        return cls(module, q, ())

    @property
    def S(self):
        return self.module.S

    @property
    def K(self) -> Ideal:
        return self.module.defining

    @property
    def is_adic(self) -> bool:
        return not self.head

    def _validate(self) -> None:
        if (self.q + self.K).colength() == INFINITE:
            raise InputError("q is not primary to the maximal ideal", "E_Q_NOT_PRIMARY")
        for j, a in enumerate(self.head, start=1):
            if not a.homogeneous:
                raise InputError(f"filtration term {j} is not homogeneous", "E_NONHOMOGENEOUS")
            if a.is_unit():
                raise InputError(f"filtration term {j} is the whole module", "E_BAD_FILTRATION")
        for j in range(len(self.head)):
            if not self.term(j + 1).issubset(self.term(j)):
                raise InputError(f"filtration is not descending at index {j + 1}",
                                 "E_BAD_FILTRATION")
        for j in range(len(self.head)):
            if not (self.q * self.term(j)).issubset(self.term(j + 1)):
                raise InputError(f"filtration is not good at index {j + 1}: "
                                 f"q M_{j} is not contained in M_{j + 1}", "E_BAD_FILTRATION")

    def term(self, j: int) -> Ideal:
        """The ideal a_j (containing K) with M_j = a_j / K."""
        if j < 0:
            raise InputError("filtration index must be nonnegative", "E_INPUT")
        t = self._terms.get(j)
        if t is None:
            if j <= len(self.head):
                t = self.head[j - 1]
            else:
                t = _reduced(self.q * self.term(j - 1) + self.K)
            self._terms[j] = t
        return t

    def colength(self, j: int) -> int:
        """lambda(M / M_j)."""
        v = self._colength.get(j)
        if v is None:
            v = self.term(j).colength() if j else 0
            if v == INFINITE:
                raise InconsistencyError(f"M/M_{j} has infinite length")
            self._colength[j] = v
        return v

    def hilbert_function(self, j: int) -> int:
        """H(j) = lambda(M_j / M_{j+1})."""
        return self.colength(j + 1) - self.colength(j)

    def hilbert_samuel(self, j: int) -> int:
        """H^1(j) = lambda(M / M_{j+1})."""
        return self.colength(j + 1)

    def hilbert_data(self, J: Optional[Ideal] = None, window: int = DEFAULT_WINDOW,
                     max_index: int = DEFAULT_MAX_INDEX) -> "HilbertData":
        return hilbert_data(self, J, window, max_index)

    def quotient(self, a: Polynomial) -> "Filtration":
        return quotient_filtration(self, a)

    def describe(self) -> dict:
        return {
            "module": [str(g) for g in self.K.gb],
            "q": [str(g) for g in self.q.gens],
            "head": [[str(g) for g in a.gb] for a in self.head],
        }


@dataclass
class HilbertData:
    d: int
    H: List[int]
    h: List[int]
    e: List[int]
    T: int
    window: int
    postulation: int
    reduction_index: Optional[int] = None

    def e_at(self, i: int) -> int:
        """e_i for any i >= 0 (zero beyond deg h)."""
        return sum(comb(k, i) * c for k, c in enumerate(self.h))

    @property
    def h0(self) -> int:
        return self.H[0]

    def hilbert_polynomial(self, x: int) -> int:
        d = self.d
        return sum((-1) ** i * self.e[i] * comb(x + d - i - 1, d - i - 1) for i in range(d))

    def samuel_polynomial(self, x: int) -> int:
        d = self.d
        return sum((-1) ** i * self.e[i] * comb(x + d - i, d - i) for i in range(d + 1))

    def series(self, upto: int) -> List[int]:
        """Coefficients of h(z)/(1-z)^d, i.e. H(0..upto) as predicted by h."""
        return series.series_coeffs(self.h, self.d, upto)

    def as_dict(self) -> dict:
        return {
            "d": self.d, "H": self.H, "h": self.h, "e": self.e, "T": self.T,
            "window": self.window, "postulation": self.postulation,
            "reduction_index": self.reduction_index,
        }


def _h_coefficient(H: Sequence[int], d: int, k: int) -> int:
    return sum((-1) ** i * comb(d, i) * H[k - i] for i in range(min(k, d) + 1))


def hilbert_data(F: Filtration, J: Optional[Ideal] = None, window: int = DEFAULT_WINDOW,
                 max_index: int = DEFAULT_MAX_INDEX) -> HilbertData:
    """Hilbert function up to an adaptive index T, certified by ``window``
    trailing zero h-coefficients; with J, e0 is cross-checked against the
    J-adic filtration."""
    cache_key = (window, max_index, None if J is None else J)
    if cache_key in F._hd:
        return F._hd[cache_key]
    d = F.module.dim
    T = max(d + 2, len(F.head) + d, window)
    H: List[int] = []
    while True:
        if T > max_index:
            raise CertificationError(
                f"h-polynomial not certified by index {max_index}; raise --max-index",
                "E_TRUNCATION")
        while len(H) <= T:
            H.append(F.hilbert_function(len(H)))
        h = [_h_coefficient(H, d, k) for k in range(T + 1)]
        if all(c == 0 for c in h[T - window + 1:]):
            break
        T += 1
    h = series.trim(h)
    e = series.hilbert_coefficients(h, d)
    if e[0] < 1:
        raise InconsistencyError(f"multiplicity {e[0]} < 1")
    hd = HilbertData(d, H, h, e, T, window, 0)
    # the Samuel polynomial must reproduce H^1 on the certification window
    for j in range(T - window + 1, T + 1):
        if hd.samuel_polynomial(j) != F.hilbert_samuel(j):
            raise CertificationError(f"Samuel polynomial disagrees with H^1 at {j}", "E_TRUNCATION")
    post = 0
    for j in range(T, -1, -1):
        if H[j] != hd.hilbert_polynomial(j):
            post = j + 1
            break
    hd.postulation = post
    if J is not None:
        hd.reduction_index = reduction_index(F, J, T + window)
        N = Filtration(F.module, J, validate=False)
        e0N = hilbert_data(N, None, window, max_index).e[0]
        if e0N != hd.e[0]:
            raise CertificationError(
                f"e0 = {hd.e[0]} but the J-adic filtration has e0 = {e0N}", "E_TRUNCATION")
    F._hd[cache_key] = hd
    return hd


def hilbert_function(F: Filtration, j: int) -> int:
    return F.hilbert_function(j)


# -- reductions --------------------------------------------------------------

def reduction_flags(F: Filtration, J: Ideal, upto: int) -> List[bool]:
    """flags[n] is True iff M_{n+1} = J M_n, for n = 0..upto."""
    return [quotient_length(F.term(n + 1), _reduced(J * F.term(n) + F.K)) == 0
            for n in range(upto + 1)]


def reduction_index(F: Filtration, J: Ideal, upto: int) -> int:
    """Least r with M_{n+1} = J M_n for every computed n >= r."""
    flags = reduction_flags(F, J, upto)
    if not flags[-1]:
        raise CertificationError(f"M_(n+1) != J M_n at n = {upto}; J is not a reduction "
                                 "within the computed range", "E_GENERICITY")
    r = len(flags)
    while r > 0 and flags[r - 1]:
        r -= 1
    return r


# -- superficial elements ----------------------------------------------------

@dataclass
class SuperficialCertificate:
    element: Polynomial
    c: int
    window: int
    definition_checks: List[dict]
    property_checks: Dict[str, bool]
    seed: Optional[int] = None
    attempts: int = 1

    @property
    def valid(self) -> bool:
        return all(chk["kernel"] == 0 for chk in self.definition_checks)

    def as_dict(self) -> dict:
        return {
            "element": str(self.element), "c": self.c, "window": self.window,
            "definition_checks": self.definition_checks,
            "property_checks": self.property_checks, "seed": self.seed,
            "attempts": self.attempts, "valid": self.valid,
        }


def definition_defect(F: Filtration, a: Polynomial, c: int, j: int) -> int:
    """lambda(((M_{j+1} : a) ∩ M_c) / M_j) for j >= c.

    This is the kernel of  M_c/M_j --a--> M/M_{j+1}, whose image is
    (a M_c + M_{j+1})/M_{j+1}."""
    image = _reduced(Ideal(F.S, [a]) * F.term(c) + F.term(j + 1))
    return (F.colength(j) - F.colength(c)) - (F.colength(j + 1) - image.colength())


def definition_holds_ideal(F: Filtration, a: Polynomial, c: int, j: int) -> bool:
    """(M_{j+1} : a) ∩ M_c == M_j evaluated with colon and intersection."""
    lhs = F.term(j + 1).colon(Ideal(F.S, [a])).intersect(F.term(c))
    return lhs == F.term(j)


def superficial_properties(F: Filtration, a: Polynomial, window: int = DEFAULT_WINDOW,
                           max_index: int = DEFAULT_MAX_INDEX,
                           stab_window: Optional[int] = None) -> Dict[str, object]:
    """Dimension drop, e_j equality and the e_{d-1} shift for M/aM, plus the
    coefficientwise bound H_M(j) <= H^1_{M/aM}(j)."""
    hd = hilbert_data(F, None, stab_window or window, max_index)
    d = hd.d
    Fq = quotient_filtration(F, a)
    hq = hilbert_data(Fq, None, stab_window or window, max_index)
    ann = annihilator_length(F.module, a)
    upto = max(hd.T, hq.T)
    series_bound = all(F.hilbert_function(j) <= Fq.hilbert_samuel(j) for j in range(upto + 1))
    out: Dict[str, object] = {
        "series_bound": series_bound,
        "dim_drop": hq.d == d - 1,
        "annihilator_length": ann if ann != INFINITE else "inf",
    }
    out["e_equal"] = all(hd.e[j] == hq.e[j] for j in range(max(d - 1, 0))) if hq.d == d - 1 else False
    if d >= 1 and ann != INFINITE and hq.d == d - 1:
        out["e_shift"] = hq.e[d - 1] == hd.e[d - 1] + (-1) ** (d - 1) * ann
    else:
        out["e_shift"] = False
    return out


def certify_superficial(F: Filtration, a: Polynomial, window: int = DEFAULT_WINDOW,
                        max_index: int = DEFAULT_MAX_INDEX,
                        stab_window: Optional[int] = None) -> Optional[SuperficialCertificate]:
    """Window-based certificate that a is F-superficial, or None.

    The constant c is the stabilization index of F (past the head and the
    postulation index) plus the window; the definition is checked for
    j = c..c+window."""
    if a.is_zero() or not F.q.contains(a):
        return None
    hd = hilbert_data(F, None, stab_window or window, max_index)
    c = max(hd.postulation, len(F.head)) + window
    checks = [{"j": j, "kernel": definition_defect(F, a, c, j)} for j in range(c, c + window + 1)]
    if not all(chk["kernel"] == 0 for chk in checks):
        return None
    # the consequences of superficiality are recorded, not used to reject a
    props = superficial_properties(F, a, window, max_index, stab_window)
    return SuperficialCertificate(a, c, window, checks, props)


def find_superficial(Fs: Sequence[Filtration], seed=42, gens: Optional[Sequence[Polynomial]] = None,
                     window: int = DEFAULT_WINDOW, max_index: int = DEFAULT_MAX_INDEX,
                     retries: int = 8, stab_window: Optional[int] = None):
    """Generic element certified superficial for every filtration in ``Fs``.

    ``seed`` is an int or a ``random.Random``. Returns (element, certificates)."""
    if not Fs:
        raise InputError("find_superficial needs at least one filtration", "E_INPUT")
    S = Fs[0].S
    if any(F.S != S for F in Fs):
        raise InputError("filtrations live over different rings", "E_RING_MISMATCH")
    if any(F.module.dim < 1 for F in Fs):
        raise InputError("superficial elements need a module of positive dimension", "E_INPUT")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    seed_value = seed if isinstance(seed, int) else None
    gens = list(gens if gens is not None else Fs[0].q.gens)
    for attempt in range(1, retries + 1):
        a = generic_element(gens, rng)
        certs = []
        for F in Fs:
            cert = certify_superficial(F, a, window, max_index, stab_window)
            if cert is None:
                break
            cert.seed, cert.attempts = seed_value, attempt
            certs.append(cert)
        else:
            return a, certs
    raise CertificationError(
        f"no superficial element certified after {retries} attempts; "
        "try another seed or a larger prime", "E_GENERICITY")


@dataclass
class SuperficialSequence:
    elements: List[Polynomial]
    J: Ideal
    certificates: List[SuperficialCertificate]
    reduction_index: Optional[int]
    seed: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "elements": [str(a) for a in self.elements],
            "certificates": [c.as_dict() for c in self.certificates],
            "reduction_index": self.reduction_index,
            "seed": self.seed,
        }


def superficial_sequence(F: Filtration, seed=42, window: int = DEFAULT_WINDOW,
                         max_index: int = DEFAULT_MAX_INDEX, retries: int = 8,
                         stab_window: Optional[int] = None) -> SuperficialSequence:
    """a_1..a_d with a_i superficial on F/(a_1..a_{i-1})M; returns J and the
    reduction index of F with respect to J."""
    d = F.module.dim
    if d < 1:
        raise InputError("superficial sequences need a module of positive dimension", "E_INPUT")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cur, elements, certs = F, [], []
    for _ in range(d):
        a, (cert,) = find_superficial([cur], rng, F.q.gens, window, max_index, retries, stab_window)
        elements.append(a)
        certs.append(cert)
        if len(elements) < d:
            cur = quotient_filtration(cur, a)
    J = Ideal(F.S, elements)
    hd = hilbert_data(F, None, stab_window or window, max_index)
    r = reduction_index(F, J, hd.T + (stab_window or window))
    return SuperficialSequence(elements, J, certs, r, seed if isinstance(seed, int) else None)


def sequence_from_elements(F: Filtration, elements: Sequence[Polynomial],
                           window: int = DEFAULT_WINDOW,
                           max_index: int = DEFAULT_MAX_INDEX,
                           stab_window: Optional[int] = None) -> SuperficialSequence:
    """Certify a user-supplied sequence; raises CertificationError if any
    element fails its certificate."""
    d = F.module.dim
    if len(elements) != d:
        raise InputError(f"J needs exactly {d} generators, got {len(elements)}", "E_J")
    cur, certs = F, []
    for i, a in enumerate(elements):
        if a.degree() != F.delta or not a.is_homogeneous():
            raise InputError(f"J generator {a} must be homogeneous of degree {F.delta}", "E_J")
        cert = certify_superficial(cur, a, window, max_index, stab_window)
        if cert is None:
            raise CertificationError(f"J generator {i + 1} ({a}) is not certified superficial",
                                     "E_NOT_SUPERFICIAL")
        certs.append(cert)
        if i + 1 < d:
            cur = quotient_filtration(cur, a)
    J = Ideal(F.S, list(elements))
    hd = hilbert_data(F, None, stab_window or window, max_index)
    return SuperficialSequence(list(elements), J, certs, reduction_index(F, J, hd.T + (stab_window or window)))


# -- derived filtrations -----------------------------------------------------

def quotient_filtration(F: Filtration, a) -> Filtration:
    """F/aM on M/aM, with terms a_j + (a) + K (``a`` may be a list)."""
    elems = list(a) if isinstance(a, (list, tuple)) else [a]
    extra = Ideal(F.S, elems)
    module = F.module.quotient(elems)
    head = [F.term(j) + extra for j in range(1, len(F.head) + 1)]
    return Filtration(module, F.q, head, validate=False)


def derived_N(F: Filtration, J: Ideal) -> Filtration:
    """The J-adic filtration {J^j M}."""
    return Filtration(F.module, J, (), validate=False)


def derived_E(F: Filtration, J: Ideal) -> Filtration:
    """M ⊇ M_1 ⊇ J M_1 ⊇ J^2 M_1 ⊇ ..."""
    return Filtration(F.module, J, [F.term(1)], validate=False)


def saturated_filtration(F: Filtration):
    """(lambda(W), F/W) where W is the m-torsion of M."""
    w, Msat = h0_and_saturate(F.module)
    if Msat is None:
        raise InputError("M has finite length, so M/W = 0", "E_INPUT")
    Ksat = Msat.defining
    head = [F.term(j) + Ksat for j in range(1, len(F.head) + 1)]
    return w, Filtration(Msat, F.q, head, validate=False)


def as_J_filtration(F: Filtration, J: Ideal, r: int) -> Filtration:
    """F regarded as a good J-filtration: explicit head up to M_{r+s}, then
    M_{n+1} = J M_n."""
    s = max(len(F.head), r)
    return Filtration(F.module, J, [F.term(j) for j in range(1, s + 1)], validate=False)


# -- the integers v_j and u_j -------------------------------------------------

def v_values(F: Filtration, J: Ideal, upto: Optional[int] = None,
             window: int = DEFAULT_WINDOW, max_index: int = DEFAULT_MAX_INDEX) -> List[int]:
    """v_j = lambda(M_{j+1} / J M_j) for j = 0..upto; zero from the reduction
    index on."""
    hd = hilbert_data(F, None, window, max_index)
    r = reduction_index(F, J, hd.T + window)
    if upto is None:
        upto = max(hd.T, r + window)
    out = [quotient_length(F.term(j + 1), _reduced(J * F.term(j) + F.K)) for j in range(upto + 1)]
    if any(out[r:]):
        raise InconsistencyError("v_j nonzero past the reduction index")
    return out


def u_values(F: Filtration, a: Polynomial, upto: Optional[int] = None,
             window: int = DEFAULT_WINDOW, max_index: int = DEFAULT_MAX_INDEX) -> List[int]:
    """u_j = e0 - H(j) for a one-dimensional module."""
    if F.module.dim != 1:
        raise InputError("u_j is defined for modules of dimension one", "E_INPUT")
    hd = hilbert_data(F, None, window, max_index)
    if upto is None:
        upto = hd.T
    return [hd.e[0] - F.hilbert_function(j) for j in range(upto + 1)]
