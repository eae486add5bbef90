"""Numerical verification of the structure theory of Hilbert coefficients.

Each check evaluates a family of identities, inequalities and equivalences on
one filtration and returns a ``TheoremReport``. Outcomes are:

* ``equality`` / ``strict``  the governing inequality is tight / not tight;
* ``holds``                  identities and equivalences are all satisfied;
* ``skipped``                a hypothesis is not met by the input;
* ``inconsistent``           a proved statement fails numerically (a bug).

Independent code paths are used wherever a statement can be evaluated in two
ways, so a disagreement is a real signal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Callable, Dict, List, Optional, Sequence

from . import series
from .errors import InconsistencyError
from .filtration import (
    DEFAULT_MAX_INDEX,
    DEFAULT_WINDOW,
    Filtration,
    HilbertData,
    SuperficialSequence,
    as_J_filtration,
    derived_E,
    derived_N,
    find_superficial,
    hilbert_data,
    quotient_filtration,
    saturated_filtration,
    sequence_from_elements,
    superficial_sequence,
    v_values,
    u_values,
)
from .groebner import Ideal
from .local import (
    INFINITE,
    annihilator_length,
    grade,
    is_cohen_macaulay,
    is_regular,
    length,
    quotient_length,
)
from .poly import Polynomial

HOLDS, EQUALITY, STRICT, INCONSISTENT, SKIPPED = "holds", "equality", "strict", "inconsistent", "skipped"


def _num(x):
    return "inf" if x == INFINITE else x


@dataclass
class TheoremReport:
    id: str
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    quantities: Dict[str, object] = field(default_factory=dict)
    results: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    verdict: str = HOLDS
    _primary: Optional[str] = None

    # -- recording helpers ---------------------------------------------------

    def require(self, name: str, flag: bool) -> bool:
        self.hypotheses[name] = bool(flag)
        return bool(flag)

    def skip(self, reason: str) -> "TheoremReport":
        self.verdict = SKIPPED
        self.notes.append(f"skipped: {reason}")
        return self

    def _add(self, name: str, kind: str, outcome: str, **values) -> str:
        self.results.append({"name": name, "kind": kind, "outcome": outcome,
                             **{k: _num(v) for k, v in values.items()}})
        return outcome

    def identity(self, name: str, lhs, rhs) -> bool:
        ok = lhs == rhs
        self._add(name, "identity", HOLDS if ok else INCONSISTENT, lhs=lhs, rhs=rhs)
        return ok

    def fact(self, name: str, ok: bool, **values) -> bool:
        self._add(name, "fact", HOLDS if ok else INCONSISTENT, **values)
        return ok

    def inequality(self, name: str, lhs, rhs, primary: bool = False) -> str:
        """Records lhs <= rhs."""
        out = EQUALITY if lhs == rhs else STRICT if lhs < rhs else INCONSISTENT
        self._add(name, "inequality", out, lhs=lhs, rhs=rhs)
        if primary:
            self._primary = out
        return out

    def equivalence(self, name: str, conditions: Dict[str, bool]) -> bool:
        vals = set(conditions.values())
        ok = len(vals) <= 1
        self._add(name, "equivalence", HOLDS if ok else INCONSISTENT,
                  conditions={k: bool(v) for k, v in conditions.items()})
        return ok

    def implication(self, name: str, premise: bool, conclusion: bool) -> bool:
        ok = (not premise) or conclusion
        self._add(name, "implication", HOLDS if ok else INCONSISTENT,
                  premise=bool(premise), conclusion=bool(conclusion))
        return ok

    def note_result(self, name: str, text: str) -> None:
        self._add(name, "note", HOLDS, text=text)

    def finish(self) -> "TheoremReport":
        if self.verdict == SKIPPED:
            return self
        if any(r["outcome"] == INCONSISTENT for r in self.results):
            self.verdict = INCONSISTENT
        elif self._primary is not None:
            self.verdict = self._primary
        else:
            self.verdict = HOLDS
        return self

    def result(self, name: str) -> Optional[dict]:
        for r in self.results:
            if r["name"] == name:
                return r
        return None

    def as_dict(self) -> dict:
        results = [{**r, "covers": covered_result(self.id, r["name"])} for r in self.results]
        return {
            "id": self.id, "verdict": self.verdict, "hypotheses": self.hypotheses,
            "quantities": {k: _num(v) for k, v in self.quantities.items()},
            "results": results, "notes": self.notes,
        }


@dataclass
class Settings:
    seed: int = 42
    stab_window: int = DEFAULT_WINDOW
    superficial_window: int = DEFAULT_WINDOW
    vv_window: int = DEFAULT_WINDOW
    max_index: int = DEFAULT_MAX_INDEX


def _lengths_of_intersection_match(F: Filtration, I: Ideal, j: int) -> bool:
    """(I M) ∩ M_j == I M_{j-1}, compared through Hilbert series.

    HS(S/(X∩Y)) = HS(S/X) + HS(S/Y) - HS(S/(X+Y)), and I M_{j-1} ⊆ (I M) ∩ M_j,
    so equal series mean equal submodules."""
    K = F.K
    IK = I + K
    aj = F.term(j)
    lhs = (I * F.term(j - 1) + K).hilbert_numerator()
    rhs = series.sub(series.add(IK.hilbert_numerator(), aj.hilbert_numerator()),
                     (aj + IK).hilbert_numerator())
    return series.sub(lhs, rhs) == []


def valabrega_valla(F: Filtration, elements: Sequence[Polynomial], upto: int) -> dict:
    """Regularity of the elements on M together with the intersection
    condition for j = 1..upto; both hold iff the initial forms are a regular
    sequence on the associated graded module."""
    r = len(elements)
    regular, cur = [], F.module
    for a in elements:
        regular.append(is_regular(cur, a))
        cur = cur.quotient([a])
    failures: List[int] = []
    if r:
        I = Ideal(F.S, list(elements))
        failures = [j for j in range(1, upto + 1) if not _lengths_of_intersection_match(F, I, j)]
    return {"r": r, "regular": regular, "failed_indices": failures, "upto": upto,
            "holds": all(regular) and not failures}


def valabrega_valla_ideal(F: Filtration, elements: Sequence[Polynomial], upto: int) -> bool:
    """The intersection condition with explicit intersections (slow path)."""
    I = Ideal(F.S, list(elements))
    IK = I + F.K
    return all(IK.intersect(F.term(j)) == I * F.term(j - 1) + F.K for j in range(1, upto + 1))


def gr_series_criterion(F: Filtration, elements: Sequence[Polynomial], upto: int) -> bool:
    """P_{M/(a)M}(z) == (1-z)^r P_M(z) on indices 0..upto."""
    r = len(elements)
    Fq = quotient_filtration(F, list(elements)) if r else F
    for j in range(upto + 1):
        expected = sum((-1) ** i * comb(r, i) * F.hilbert_function(j - i)
                       for i in range(min(j, r) + 1))
        if Fq.hilbert_function(j) != expected:
            return False
    return True


class Analysis:
    """Lazily computed invariants of one filtration shared by the checks."""

    def __init__(self, F: Filtration, settings: Optional[Settings] = None,
                 J_elements: Optional[Sequence[Polynomial]] = None):
        self.F = F
        self.settings = settings or Settings()
        self._J_elements = J_elements
        self._vv: Dict[int, dict] = {}

    @property
    def M(self):
        return self.F.module

    @cached_property
    def d(self) -> int:
        return self.M.dim

    @property
    def w(self) -> int:
        """Certification window for Hilbert data."""
        return self.settings.stab_window

    @property
    def sw(self) -> int:
        return self.settings.superficial_window

    @property
    def mi(self) -> int:
        return self.settings.max_index

    @cached_property
    def seq(self) -> Optional[SuperficialSequence]:
        if self.d == 0:
            return None
        if self._J_elements is not None:
            return sequence_from_elements(self.F, self._J_elements, self.sw, self.mi,
                                          stab_window=self.w)
        return superficial_sequence(self.F, self.settings.seed, self.sw, self.mi,
                                    stab_window=self.w)

    @property
    def J(self) -> Ideal:
        return self.seq.J

    @property
    def elements(self) -> List[Polynomial]:
        return self.seq.elements

    @cached_property
    def hd(self) -> HilbertData:
        return hilbert_data(self.F, self.J if self.d else None, self.w, self.mi)

    @cached_property
    def N(self) -> Filtration:
        return derived_N(self.F, self.J)

    @cached_property
    def E(self) -> Filtration:
        return derived_E(self.F, self.J)

    @cached_property
    def hdN(self) -> HilbertData:
        return hilbert_data(self.N, None, self.w, self.mi)

    @cached_property
    def hdE(self) -> HilbertData:
        return hilbert_data(self.E, None, self.w, self.mi)

    @cached_property
    def horizon(self) -> int:
        """Index up to which sequences (v, u, H_S, ...) are reported."""
        return max(self.hd.T, self.hdN.T, self.hdE.T, self.hd.reduction_index + self.w)

    @cached_property
    def v(self) -> List[int]:
        return v_values(self.F, self.J, self.horizon, self.w, self.mi)

    @cached_property
    def u(self) -> List[int]:
        return u_values(self.F, self.elements[0], self.horizon, self.w, self.mi)

    @cached_property
    def saturation(self):
        """(lambda(W), F^sat or None)."""
        if self.d == 0:
            return length(self.M), None
        return saturated_filtration(self.F)

    @property
    def W(self) -> int:
        return self.saturation[0]

    @cached_property
    def hd_sat(self) -> Optional[HilbertData]:
        Fs = self.saturation[1]
        return None if Fs is None else hilbert_data(Fs, None, self.w, self.mi)

    @cached_property
    def grade(self) -> int:
        return grade(self.F.q, self.M, self.settings.seed)

    @cached_property
    def cm(self) -> bool:
        if self.d == 0:
            return True
        verdict = is_cohen_macaulay(self.M, self.settings.seed, self.J, self.hd.e[0])
        if verdict != (self.grade == self.d):
            raise InconsistencyError("grade along q and depth disagree")
        return verdict

    def vv(self, r: int) -> dict:
        if r not in self._vv:
            upto = self.hd.T + self.settings.vv_window
            self._vv[r] = valabrega_valla(self.F, self.elements[:r], upto)
        return self._vv[r]

    @cached_property
    def gr_depth_lower(self) -> int:
        """Largest r <= d for which the first r superficial elements have
        regular initial forms."""
        r = 0
        while r < self.d and self.vv(r + 1)["holds"]:
            r += 1
        return r

    def e1(self, hd: HilbertData) -> int:
        return hd.e_at(1)

    @cached_property
    def sum_v(self) -> int:
        return sum(self.v)

    @cached_property
    def is_ring_madic(self) -> bool:
        """True when M = A and the filtration is the m-adic one."""
        return (self.F.is_adic and self.M.defining == self.M.ring.defining
                and self.F.q == self.M.ring.maximal_ideal)

    @cached_property
    def madic(self) -> "Analysis":
        if self.is_ring_madic:
            return self
        ring = self.M.ring
        F = Filtration.adic(ring.as_module(), ring.maximal_ideal)
        return Analysis(F, self.settings)

    @cached_property
    def sally(self) -> "SallyData":
        return sally_data(self)

    def summary(self) -> dict:
        out = {"dim": self.d, "lambda_W": _num(self.W)}
        if self.d:
            out.update(grade=self.grade, cohen_macaulay=self.cm,
                       gr_depth_at_least=self.gr_depth_lower)
        return out


# -- Sally module ------------------------------------------------------------

@dataclass
class SallyData:
    H_S: List[int]
    P_S_series: List[int]
    numerator: List[int]
    h_S: List[int]
    e_S: List[int]
    dim_is_d: bool
    e0_S: int
    bound: int

    def as_dict(self) -> dict:
        return {
            "H_S": self.H_S, "P_S_series": self.P_S_series, "numerator": self.numerator,
            "h_S": self.h_S, "e_S": self.e_S, "dim_is_d": self.dim_is_d,
            "e0_S": self.e0_S, "bound": self.bound,
        }


def sally_data(an: Analysis) -> SallyData:
    """H_S(n) = lambda(M_{n+1}/J^n M_1) directly, and from (h_E - h_M)/(1-z)^{d+1}."""
    F, J, d = an.F, an.J, an.d
    upto = an.horizon + an.w
    a1 = F.term(1)
    direct = [0]
    power = Ideal.unit(F.S)
    for n in range(1, upto + 1):
        power = Ideal.from_groebner(power * J)
        direct.append(quotient_length(F.term(n + 1), power * a1 + F.K))
    g = series.sub(an.hdE.h, an.hd.h)
    g1 = series.div_one_minus_z(g)
    if g1 is None:
        raise InconsistencyError("e0(E) != e0(M): (1-z) does not divide h_E - h_M")
    via_series = series.series_coeffs(g1, d, upto)
    h_S = series.trim([sum((-1) ** i * comb(d, i) * direct[k - i] for i in range(min(k, d) + 1))
                       for k in range(upto + 1)])
    e_S = series.hilbert_coefficients(h_S, max(d - 1, 0))
    e0_S = an.e1(an.hd) - an.e1(an.hdE)
    return SallyData(direct, via_series, g1, h_S, e_S, e0_S > 0, e0_S, sum(an.v[1:]))


# -- the checks ----------------------------------------------------------------

def _needs_dim(rep: TheoremReport, an: Analysis, least: int) -> bool:
    return rep.require(f"dim >= {least}", an.d >= least)


def check_superficial_properties(an: Analysis) -> TheoremReport:
    """Consequences of superficiality, reduction and multiplicity invariance."""
    rep = TheoremReport("superficial_properties")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    cur = an.F
    for i, (a, cert) in enumerate(zip(an.elements, an.seq.certificates), start=1):
        p = cert.property_checks
        rep.fact(f"series_bound[{i}]", p["series_bound"])
        rep.fact(f"dim_drop[{i}]", p["dim_drop"])
        rep.fact(f"e_equal[{i}]", p["e_equal"])
        rep.fact(f"e_shift[{i}]", p["e_shift"], annihilator=p["annihilator_length"])
        q2 = cur.q * cur.q + cur.K
        rep.fact(f"order_one[{i}]", not q2.contains(a))
        rep.fact(f"definition_window[{i}]", cert.valid, c=cert.c)
        if i < an.d:
            cur = quotient_filtration(cur, a)
    r = an.hd.reduction_index
    rep.fact("reduction_eventually", r is not None, reduction_index=r)
    rep.quantities.update(reduction_index=r, e0=an.hd.e[0])
    rep.identity("multiplicity_independence[N]", an.hd.e[0], an.hdN.e[0])
    rep.identity("multiplicity_independence[E]", an.hd.e[0], an.hdE.e[0])
    rep.notes.append(f"superficial constant checked on a window of {an.sw + 1} indices")
    return rep.finish()


def check_valabrega_valla(an: Analysis) -> TheoremReport:
    """Initial forms of the superficial prefixes: the intersection criterion, the
    Hilbert series criterion, and regularity versus grade."""
    rep = TheoremReport("valabrega_valla")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    upto = an.hd.T + an.settings.vv_window
    grade_ = an.grade
    for r in range(1, an.d + 1):
        vv = an.vv(r)
        rep.quantities[f"vv[{r}]"] = vv["holds"]
        series_ok = gr_series_criterion(an.F, an.elements[:r], upto)
        rep.equivalence(f"valabrega_valla_criterion[{r}]",
                        {"intersection_criterion": vv["holds"], "series_criterion": series_ok})
        regular_prefix = all(vv["regular"])
        rep.implication(f"gr_regular_sequence_depth[{r}]", vv["holds"], regular_prefix)
        rep.equivalence(f"regular_sequence_depth[{r}]",
                        {"prefix_regular_on_M": regular_prefix, "grade_at_least_r": grade_ >= r})
    rep.quantities.update(grade=grade_, gr_depth_at_least=an.gr_depth_lower)
    rep.notes.append(f"intersections compared for j = 1..{upto}")
    return rep.finish()


def check_sally_machine(an: Analysis) -> TheoremReport:
    """grade(q,M) >= j+1 iff grade(q, M/aM) >= j, for a superficial a and j >= 1."""
    rep = TheoremReport("sally_machine")
    if not _needs_dim(rep, an, 2):
        return rep.skip("dimension below two")
    a = an.elements[0]
    Mq = an.M.quotient([a])
    g_M = an.grade
    g_Q = grade(an.F.q, Mq, an.settings.seed)
    rep.quantities.update(grade_M=g_M, grade_quotient=g_Q)
    for j in range(1, an.d):
        rep.equivalence(f"grade_shift[j={j}]", {"grade_M>=j+1": g_M >= j + 1, "grade_M/aM>=j": g_Q >= j})
    return rep.finish()


def _torsion_of_power(an: Analysis, a: Polynomial):
    """(t, lambda(0 :_M a^t)) with t doubled until the length stabilizes."""
    t = 1
    cur = annihilator_length(an.M, a)
    while True:
        nxt = annihilator_length(an.M, a ** (2 * t))
        if nxt == cur or 2 * t > an.mi:
            return 2 * t, nxt
        t, cur = 2 * t, nxt


def check_dim1_package(an: Analysis) -> TheoremReport:
    """One-dimensional identities: u_j, e_j from u, e1(N) and lambda(W), the
    upper bound for e1(M) - e1(N) with its Cohen-Macaulay criterion."""
    rep = TheoremReport("dim1_package")
    if not rep.require("dim = 1", an.d == 1):
        return rep.skip("dimension is not one")
    F, a, M = an.F, an.elements[0], an.M
    upto = an.horizon
    u = an.u
    aI = Ideal(F.S, [a])
    gaps = [quotient_length(F.term(j + 1), aI * F.term(j) + F.K) for j in range(upto + 1)]
    kernels = [annihilator_length(M, a, F.term(j) if j else None) for j in range(upto + 1)]
    rep.identity("u_formula", u, [g - k for g, k in zip(gaps, kernels)])
    for i in range(1, len(an.hd.h) + 2):
        rep.identity(f"e_from_u[{i}]", an.hd.e_at(i),
                     sum(comb(k, i - 1) * uk for k, uk in enumerate(u) if k >= i - 1))
    t, tors = _torsion_of_power(an, a)
    e1N = an.e1(an.hdN)
    rep.identity("e1_of_principal_adic", e1N, -tors)
    rep.identity("torsion_length_e1", an.W, -e1N)
    e1M = an.e1(an.hd)
    bound = sum(gaps)
    out = rep.inequality("dim_one_bound", e1M - e1N, bound, primary=True)
    W_in_M1 = an.saturation[1] is None or an.saturation[1].K.issubset(F.term(1))
    rep.implication("dim_one_bound_cm", W_in_M1 and out == EQUALITY, an.cm)
    if an.cm:
        rep.fact("cm_u_nonnegative", all(x >= 0 for x in u))
        rep.fact("cm_H_below_e0", all(F.hilbert_function(j) <= an.hd.e[0] for j in range(upto + 1)))
        rep.identity("cm_e1_sum_u", e1M, sum(u))
        rep.inequality("cm_northcott_dim_one", an.hd.e[0] - F.colength(1), e1M)
        rep.inequality("cm_second_bound_dim_one", 2 * an.hd.e[0] - F.colength(2), e1M)
    rep.quantities.update(e1_M=e1M, e1_N=e1N, lambda_W=an.W, torsion_power=t,
                          sum_gaps=bound, u=u, W_in_M1=W_in_M1, cohen_macaulay=an.cm)
    return rep.finish()


def check_saturation(an: Analysis) -> TheoremReport:
    """e_i(M) = e_i(M^sat) for i < d and e_d(M) = e_d(M^sat) + (-1)^d lambda(W)."""
    rep = TheoremReport("saturation")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    hs, d, W = an.hd_sat, an.d, an.W
    rep.identity("saturated_dimension", hs.d, d)
    for i in range(d):
        rep.identity(f"e_equal[{i}]", an.hd.e[i], hs.e[i])
    rep.identity("e_top_shift", an.hd.e[d], hs.e[d] + (-1) ** d * W)
    rep.quantities.update(lambda_W=W, e=an.hd.e, e_sat=hs.e)
    return rep.finish()


def check_EN_and_northcott(an: Analysis) -> TheoremReport:
    """e1(M) >= e1(E) >= e1(N), the bound e1(E) - e1(N) >= e0 - h0 and the
    generalized Northcott inequality."""
    rep = TheoremReport("EN_and_northcott")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    e0, h0 = an.hd.e[0], an.hd.h0
    e1M, e1E, e1N = an.e1(an.hd), an.e1(an.hdE), an.e1(an.hdN)
    rep.inequality("e1_chain_upper", e1E, e1M)
    rep.inequality("e1_chain_lower", e1N, e1E)
    if an.d == 1:
        rep.inequality("en_dim_one", e0 - h0, e1E - e1N)
    rep.inequality("en_general", e0 - h0, e1E - e1N)
    rep.inequality("northcott_general", e0 - h0, e1M - e1N, primary=True)
    if an.cm:
        rep.inequality("northcott_cm", e0 - h0, e1M)
    rep.quantities.update(e0=e0, h0=h0, e1_M=e1M, e1_E=e1E, e1_N=e1N, cohen_macaulay=an.cm)
    return rep.finish()


def check_common_superficial_elements(an: Analysis) -> TheoremReport:
    """A common superficial element for M, N and E regarded as J-filtrations;
    for d >= 2 the drop of e1 modulo that element agrees for all three."""
    rep = TheoremReport("common_superficial_elements")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    FJ = as_J_filtration(an.F, an.J, an.hd.reduction_index)
    filts = {"M": FJ, "N": an.N, "E": an.E}
    rng = random.Random(an.settings.seed + 1)
    a, certs = find_superficial(list(filts.values()), rng, an.J.gens, an.sw, an.mi,
                                stab_window=an.w)
    rep.fact("common_superficial", all(c.valid for c in certs), element=str(a))
    for name, c in zip(filts, certs):
        p = c.property_checks
        rep.fact(f"properties[{name}]", all(v for v in p.values() if isinstance(v, bool)))
    if an.d >= 2:
        drops = {}
        for name, X in filts.items():
            hx = hilbert_data(X, None, an.w, an.mi)
            hq = hilbert_data(quotient_filtration(X, a), None, an.w, an.mi)
            drops[name] = hx.e_at(1) - hq.e_at(1)
        expected = annihilator_length(an.M, a) if an.d == 2 else 0
        for name, value in drops.items():
            rep.identity(f"e1_drop[{name}]", value, expected)
        rep.quantities["e1_drops"] = drops
    rep.quantities["element"] = str(a)
    return rep.finish()


def check_hm_bound(an: Analysis) -> TheoremReport:
    """e1(M) - e1(N) <= sum_j v_j."""
    rep = TheoremReport("hm_bound")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    e1M, e1N = an.e1(an.hd), an.e1(an.hdN)
    rep.inequality("e1_upper_bound", e1M - e1N, an.sum_v, primary=True)
    if not an.is_ring_madic:
        rep.notes.append("equality is only characterized for the m-adic filtration; "
                         "the outcome here is descriptive")
    rep.quantities.update(e1_M=e1M, e1_N=e1N, sum_v=an.sum_v, v=an.v)
    return rep.finish()


def check_cm_equivalences(an: Analysis) -> TheoremReport:
    """For Cohen-Macaulay M: e1 <= sum v_j, e2 <= sum j v_j, and the five
    conditions characterizing equality."""
    rep = TheoremReport("cm_equivalences")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    if not rep.require("M is Cohen-Macaulay", an.cm):
        return rep.skip("M is not Cohen-Macaulay")
    d, v, hd = an.d, an.v, an.hd
    e1, e2 = hd.e_at(1), hd.e_at(2)
    sv = sum(v)
    sjv = sum(j * x for j, x in enumerate(v))
    rep.inequality("e1_bound", e1, sv, primary=True)
    rep.inequality("e2_bound", e2, sjv)
    top = max(len(hd.h), len(v)) + 1
    cond2 = all(hd.e_at(i) == sum(comb(j, i - 1) * v[j] for j in range(i - 1, len(v)))
                for i in range(1, top + 1))
    numerator = [an.F.colength(1)] + [v[j] - (v[j + 1] if j + 1 < len(v) else 0)
                                      for j in range(len(v))]
    upto = hd.T
    cond5 = series.series_coeffs(numerator, d, upto) == [an.F.hilbert_function(j) for j in range(upto + 1)]
    conditions = {
        "gr_depth_at_least_d-1": an.vv(d - 1)["holds"],
        "e_i_from_v": cond2,
        "e1_equality": e1 == sv,
        "e2_equality": e2 == sjv,
        "series_formula": cond5,
    }
    rep.equivalence("cm_equivalences", conditions)
    colJ = length(an.M.quotient(an.elements))
    rep.identity("cm_adic_reduction_series", an.hdN.h, [colJ])
    rep.quantities.update(e1=e1, e2=e2, sum_v=sv, sum_jv=sjv, v=v,
                          series_numerator=series.trim(numerator), conditions=conditions)
    return rep.finish()


def check_madic_characterization(an: Analysis) -> TheoremReport:
    """On A with the m-adic filtration: e1(m) - e1(J) = sum v_j iff A is
    Cohen-Macaulay with depth gr_m(A) >= d - 1."""
    rep = TheoremReport("madic_characterization")
    m = an.madic
    if not rep.require("dim A >= 1", m.d >= 1):
        return rep.skip("ring of dimension zero")
    e1m, e1J, sv = m.e1(m.hd), m.e1(m.hdN), m.sum_v
    equal = e1m - e1J == sv
    cm_gr = m.cm and m.vv(m.d - 1)["holds"]
    rep.inequality("e1_upper_bound", e1m - e1J, sv, primary=True)
    rep.equivalence("madic_characterization", {"e1_equality": equal, "cm_and_gr_depth": cm_gr})
    if e1J <= 0:
        rep.inequality("madic_corollary_bound", e1m, sv)
        rep.equivalence("madic_corollary", {"e1_equals_sum_v": e1m == sv, "cm_and_gr_depth": cm_gr})
    else:
        rep.notes.append("e1(J) > 0: corollary hypothesis not met")
    if m.grade >= m.d - 1:
        rep.inequality("e1_reduction_nonpositive", e1J, 0)
    rep.quantities.update(e1_m=e1m, e1_J=e1J, sum_v=sv, cohen_macaulay=m.cm,
                          gr_depth_at_least=m.gr_depth_lower)
    return rep.finish()


def check_sally_analysis(an: Analysis) -> TheoremReport:
    """Hilbert function of the Sally module by lengths and by series, its
    coefficients, and the multiplicity bound."""
    rep = TheoremReport("sally_analysis")
    if not _needs_dim(rep, an, 1):
        return rep.skip("module of dimension zero")
    sd = an.sally
    d = an.d
    rep.identity("sally_series_identity", sd.H_S, sd.P_S_series)
    rep.fact("sally_series_nonnegative", all(x >= 0 for x in sd.P_S_series))
    rep.identity("sally_dimension_flag", sd.dim_is_d, an.e1(an.hd) > an.e1(an.hdE))
    if sd.dim_is_d:
        for i in range(d):
            rep.identity(f"sally_coefficients[{i}]", sd.e_S[i],
                         an.hd.e_at(i + 1) - an.hdE.e_at(i + 1))
        rep.inequality("sally_multiplicity_bound", sd.e0_S, sd.bound, primary=True)
    else:
        rep.notes.append("dim S < d: coefficient identities and bound not applicable")
    if an.F.is_adic and an.cm:
        nonzero = any(sd.H_S)
        M2_vs_JM1 = quotient_length(an.F.term(2), an.J * an.F.term(1) + an.F.K) != 0
        rep.equivalence("sally_nonzero_criterion",
                        {"dim_is_d": sd.dim_is_d, "S_nonzero": nonzero, "M2_ne_JM1": M2_vs_JM1})
    rep.quantities.update(**sd.as_dict())
    return rep.finish()


def check_sally_equivalences(an: Analysis) -> TheoremReport:
    """Equivalences involving the Sally module: on the m-adic filtration of A,
    and for a Cohen-Macaulay M with a q-adic filtration."""
    rep = TheoremReport("sally_equivalences")
    m = an.madic
    if m.d >= 1:
        sd = m.sally
        c2 = m.e1(m.hd) - m.e1(m.hdN) == m.sum_v
        c3 = m.cm and m.vv(m.d - 1)["holds"]
        conds = {"e1_equality": c2, "cm_and_gr_depth": c3}
        c1 = sd.e0_S == sd.bound
        if sd.dim_is_d:
            rep.inequality("sally_madic_bound", sd.e0_S, sd.bound)
            conds["sally_multiplicity_equality"] = c1
        else:
            rep.notes.append(f"m-adic Sally module has dimension < d; multiplicity condition "
                             f"({sd.e0_S} vs {sd.bound}) not part of the equivalence")
        rep.equivalence("sally_madic_equivalences", conds)
    else:
        rep.notes.append("ring of dimension zero: m-adic statements skipped")
    if not rep.require("M is Cohen-Macaulay of positive dimension", an.d >= 1 and an.cm):
        rep.notes.append("Cohen-Macaulay statements skipped")
        if m.d < 1:
            return rep.skip("no applicable hypothesis")
        return rep.finish()
    d, sd = an.d, an.sally
    e0, h0 = an.hd.e[0], an.hd.h0
    closed = series.trim([h0, e0 - h0])
    rep.identity("minimal_multiplicity_E", an.hdE.h, closed)
    rep.identity("minimal_multiplicity_E_e1", an.e1(an.hdE), e0 - h0)
    if sd.dim_is_d:
        rep.identity("sally_cm_multiplicity", sd.e0_S, an.e1(an.hd) - e0 + h0)
    upto = len(sd.H_S) - 1
    E_closed = series.series_coeffs(closed, d, upto)
    rebuilt = [0]
    for n in range(1, upto + 1):
        rebuilt.append(rebuilt[-1] - (an.F.hilbert_function(n) - E_closed[n]))
    rep.identity("sally_cm_series", sd.H_S, rebuilt)
    if rep.require("filtration is q-adic", an.F.is_adic):
        v = an.v
        e1_eq = an.e1(an.hd) == an.sum_v
        c1 = sd.e0_S == sum(v[1:])
        c2 = sd.H_S == series.series_coeffs([0] + v[1:], d, upto)
        rep.equivalence("sally_cm_equivalences", {
            "sally_multiplicity_equality": c1,
            "sally_series_form": c2,
            "sally_cohen_macaulay": c2,
            "e1_equality": e1_eq,
        })
        rep.notes.append("Cohen-Macaulayness of the Sally module is read off the series condition")
    rep.note_result("sally_depth_inequality",
                    "depth gr_M(M) >= min(depth S - 1, depth gr_E(M)); depths of S and gr_E "
                    "are not computed, so this is not asserted")
    return rep.finish()


CheckFn = Callable[[Analysis], TheoremReport]

CHECKS: Dict[str, CheckFn] = {
    "superficial_properties": check_superficial_properties,
    "valabrega_valla": check_valabrega_valla,
    "sally_machine": check_sally_machine,
    "dim1_package": check_dim1_package,
    "saturation": check_saturation,
    "EN_and_northcott": check_EN_and_northcott,
    "common_superficial_elements": check_common_superficial_elements,
    "hm_bound": check_hm_bound,
    "cm_equivalences": check_cm_equivalences,
    "madic_characterization": check_madic_characterization,
    "sally_analysis": check_sally_analysis,
    "sally_equivalences": check_sally_equivalences,
}

# which established results each check exercises; every result appears once
COVERAGE: Dict[str, List[str]] = {
    "superficial_properties": [
        "superficial_series_bound", "superficial_dimension_drop", "superficial_e_equality",
        "superficial_e_shift", "superficial_order_one", "reduction_eventually",
        "multiplicity_independence",
    ],
    "valabrega_valla": ["valabrega_valla_criterion", "regular_sequence_depth",
                        "gr_regular_sequence_depth"],
    "sally_machine": ["grade_shift_lemma"],
    "dim1_package": ["u_formula", "e_from_u", "e1_of_principal_adic", "torsion_length_e1",
                     "dim_one_bound", "cm_dim_one_bounds"],
    "saturation": ["saturation_coefficients"],
    "EN_and_northcott": ["e1_chain", "en_dim_one", "en_general", "northcott_general",
                         "northcott_cm"],
    "common_superficial_elements": ["common_superficial"],
    "hm_bound": ["e1_upper_bound"],
    "cm_equivalences": ["cm_equivalences", "cm_adic_reduction_series"],
    "madic_characterization": ["madic_characterization", "madic_corollary",
                               "e1_reduction_nonpositive"],
    "sally_analysis": ["sally_series_identity", "sally_coefficients",
                       "sally_multiplicity_bound", "sally_nonzero_criterion"],
    "sally_equivalences": ["sally_madic_equivalences", "sally_cm_equivalences",
                           "minimal_multiplicity_E", "sally_cm_consequences",
                           "sally_depth_inequality"],
}

RESULTS: List[str] = [
    "superficial_series_bound", "superficial_dimension_drop", "superficial_e_equality",
    "superficial_e_shift", "superficial_order_one", "reduction_eventually",
    "multiplicity_independence", "valabrega_valla_criterion", "regular_sequence_depth",
    "gr_regular_sequence_depth", "grade_shift_lemma", "u_formula", "e_from_u",
    "e1_of_principal_adic", "torsion_length_e1", "saturation_coefficients", "dim_one_bound",
    "cm_dim_one_bounds", "e1_chain", "en_dim_one", "common_superficial", "en_general",
    "northcott_general", "northcott_cm", "e1_upper_bound", "cm_equivalences",
    "cm_adic_reduction_series", "madic_characterization", "madic_corollary",
    "e1_reduction_nonpositive", "sally_series_identity", "sally_coefficients",
    "sally_multiplicity_bound", "sally_nonzero_criterion", "sally_madic_equivalences",
    "minimal_multiplicity_E", "sally_cm_consequences", "sally_cm_equivalences",
    "sally_depth_inequality",
]


# emitted result name (index suffix dropped) -> the result above it evaluates;
# None marks auxiliary checks such as the superficial definition window
RESULT_OF: Dict[str, Dict[str, Optional[str]]] = {
    "superficial_properties": {
        "series_bound": "superficial_series_bound", "dim_drop": "superficial_dimension_drop",
        "e_equal": "superficial_e_equality", "e_shift": "superficial_e_shift",
        "order_one": "superficial_order_one", "definition_window": None,
        "reduction_eventually": "reduction_eventually",
        "multiplicity_independence": "multiplicity_independence",
    },
    "valabrega_valla": {
        "valabrega_valla_criterion": "valabrega_valla_criterion",
        "regular_sequence_depth": "regular_sequence_depth",
        "gr_regular_sequence_depth": "gr_regular_sequence_depth",
    },
    "sally_machine": {"grade_shift": "grade_shift_lemma"},
    "dim1_package": {
        "u_formula": "u_formula", "e_from_u": "e_from_u",
        "e1_of_principal_adic": "e1_of_principal_adic", "torsion_length_e1": "torsion_length_e1",
        "dim_one_bound": "dim_one_bound", "dim_one_bound_cm": "cm_dim_one_bounds",
        "cm_H_below_e0": "cm_dim_one_bounds", "cm_e1_sum_u": "cm_dim_one_bounds",
        "cm_northcott_dim_one": "cm_dim_one_bounds", "cm_second_bound_dim_one": "cm_dim_one_bounds",
        "cm_u_nonnegative": "cm_dim_one_bounds",
    },
    "saturation": {"saturated_dimension": "saturation_coefficients",
                   "e_equal": "saturation_coefficients", "e_top_shift": "saturation_coefficients"},
    "EN_and_northcott": {
        "e1_chain_upper": "e1_chain", "e1_chain_lower": "e1_chain", "en_dim_one": "en_dim_one",
        "en_general": "en_general", "northcott_general": "northcott_general",
        "northcott_cm": "northcott_cm",
    },
    "common_superficial_elements": {"common_superficial": "common_superficial",
                                    "properties": "common_superficial",
                                    "e1_drop": "common_superficial"},
    "hm_bound": {"e1_upper_bound": "e1_upper_bound"},
    "cm_equivalences": {"e1_bound": "cm_equivalences", "e2_bound": "cm_equivalences",
                        "cm_equivalences": "cm_equivalences",
                        "cm_adic_reduction_series": "cm_adic_reduction_series"},
    "madic_characterization": {
        "e1_upper_bound": "madic_characterization",
        "madic_characterization": "madic_characterization",
        "madic_corollary_bound": "madic_corollary", "madic_corollary": "madic_corollary",
        "e1_reduction_nonpositive": "e1_reduction_nonpositive",
    },
    "sally_analysis": {
        "sally_series_identity": "sally_series_identity",
        "sally_series_nonnegative": "sally_series_identity",
        "sally_dimension_flag": "sally_coefficients", "sally_coefficients": "sally_coefficients",
        "sally_multiplicity_bound": "sally_multiplicity_bound",
        "sally_nonzero_criterion": "sally_nonzero_criterion",
    },
    "sally_equivalences": {
        "sally_madic_bound": "sally_madic_equivalences",
        "sally_madic_equivalences": "sally_madic_equivalences",
        "minimal_multiplicity_E": "minimal_multiplicity_E",
        "minimal_multiplicity_E_e1": "minimal_multiplicity_E",
        "sally_cm_multiplicity": "sally_cm_consequences",
        "sally_cm_series": "sally_cm_consequences",
        "sally_cm_equivalences": "sally_cm_equivalences",
        "sally_depth_inequality": "sally_depth_inequality",
    },
}


def base_name(name: str) -> str:
    """Result name without its index suffix, e.g. e_from_u[2] -> e_from_u."""
    return name.split("[", 1)[0]


def covered_result(check_id: str, name: str) -> Optional[str]:
    table = RESULT_OF.get(check_id, {})
    base = base_name(name)
    if base not in table:
        raise KeyError(f"result {name!r} of check {check_id!r} is not in RESULT_OF")
    return table[base]


def run_checks(an: Analysis, ids: Optional[Sequence[str]] = None) -> List[TheoremReport]:
    ids = list(CHECKS) if ids is None else list(ids)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        from .errors import InputError
        raise InputError(f"unknown check id(s): {', '.join(unknown)}", "E_CHECKS")
    return [CHECKS[i](an) for i in ids]
