from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from chern.errors import CertificationError, InputError
from chern.filtration import (Filtration, certify_superficial, definition_defect,
                              definition_holds_ideal, derived_E, derived_N, find_superficial,
                              hilbert_data, quotient_filtration, saturated_filtration,
                              sequence_from_elements, superficial_sequence, u_values, v_values)
from chern.groebner import Ideal
from chern.local import make_ring
from conftest import P, adic, as_dicts, ideal, ring_named


def oracle_H(F: Filtration, top: int):
    """H(j) from oracle colengths of the terms a_j."""
    n = F.S.nvars
    col = [0] + [oracle.colength(as_dicts(F.term(j)), n) for j in range(1, top + 2)]
    return [col[j + 1] - col[j] for j in range(top + 1)]


# -- construction -------------------------------------------------------------------

def test_head_equal_to_powers_gives_adic():
    A = ring_named("R1")
    m = A.maximal_ideal
    F = Filtration(A.as_module(), m, [m, m ** 2])
    G = adic("R1")
    assert all(F.term(j) == G.term(j) for j in range(6))


def test_head_not_descending():
    A = ring_named("R1")
    m = A.maximal_ideal
    with pytest.raises(InputError) as ei:
        Filtration(A.as_module(), m, [m ** 2, m])
    assert ei.value.code == "E_BAD_FILTRATION"
    assert "index 2" in str(ei.value)


def test_head_not_good():
    A = ring_named("R3")
    S = A.ambient
    with pytest.raises(InputError, match="q M_1"):
        Filtration(A.as_module(), A.maximal_ideal, [A.maximal_ideal, ideal(S, "y", "x^3")])


def test_q_checks():
    A = ring_named("R1")
    S = A.ambient
    with pytest.raises(InputError) as ei:
        Filtration(A.as_module(), ideal(S, "x", "y^2"))
    assert ei.value.code == "E_Q_NOT_EQUIGENERATED"
    with pytest.raises(InputError) as ei:
        Filtration(A.as_module(), ideal(S, "x"))
    assert ei.value.code == "E_Q_NOT_PRIMARY"


def test_terms():
    F = adic("R1")
    S = F.S
    assert F.term(0) == Ideal.unit(S)
    assert F.term(2) == ideal(S, "x^2", "x*y", "y^2")
    assert F.colength(2) == 3
    with pytest.raises(InputError):
        F.term(-1)


def test_hilbert_function_r1():
    F = adic("R1")
    assert [F.hilbert_function(j) for j in range(4)] == [1, 2, 1, 1]
    assert oracle_H(F, 3) == [1, 2, 1, 1]


@pytest.mark.parametrize("name, d, h, e", [
    ("R1", 1, [1, 1, -1], [1, -1]),
    ("R2", 1, [1, 1], [2, 1]),
    ("R3", 1, [1, 1, 1], [3, 3]),
    ("R4", 2, [1, 1, -1], [1, -1, -1]),
    ("k[x]", 1, [1], [1, 0]),
    ("k[x,y,z]", 3, [1], [1, 0, 0, 0]),
])
def test_hilbert_data(name, d, h, e):
    F = adic(name)
    hd = hilbert_data(F)
    assert (hd.d, hd.h, hd.e) == (d, h, e)
    assert hd.H[: hd.T + 1] == oracle_H(F, hd.T)
    assert hd.series(hd.T) == hd.H[: hd.T + 1]


def test_hilbert_data_truncation_error():
    with pytest.raises(CertificationError) as ei:
        hilbert_data(adic("R3"), max_index=3)
    assert ei.value.code == "E_TRUNCATION"


def test_postulation_and_polynomials():
    hd = hilbert_data(adic("R1"))
    assert hd.postulation == 2
    assert [hd.hilbert_polynomial(j) for j in range(2, 6)] == [1, 1, 1, 1]
    assert hd.samuel_polynomial(4) == adic("R1").hilbert_samuel(4)


# -- superficial elements --------------------------------------------------------

def test_x_is_not_superficial_on_r1():
    F = adic("R1")
    S = F.S
    assert certify_superficial(F, P("x", S)) is None
    cert = certify_superficial(F, P("y", S))
    assert cert is not None and cert.valid


def test_generic_element_on_r1_is_certified():
    F = adic("R1")
    a, (cert,) = find_superficial([F], seed=42)
    assert cert.valid
    assert len(a.terms) == 2  # both x and y appear with nonzero coefficients
    assert all(c["kernel"] == 0 for c in cert.definition_checks)


def test_superficial_in_one_variable():
    F = adic("k[x]")
    a, _ = find_superficial([F], seed=1)
    assert a.monic() == P("x", F.S)


def test_common_superficial_element_r2():
    F = adic("R2")
    N = derived_N(F, ideal(F.S, "y"))
    a, certs = find_superficial([F, N], seed=7, gens=[P("y", F.S)])
    assert len(certs) == 2 and all(c.valid for c in certs)


def test_definition_defect_matches_ideal_route():
    F = adic("R1")
    S = F.S
    for text in ("x", "y", "x + y"):
        a = P(text, S)
        for j in range(2, 6):
            assert (definition_defect(F, a, 2, j) == 0) == definition_holds_ideal(F, a, 2, j)


def test_superficial_sequence_examples():
    seq = superficial_sequence(adic("R1"), seed=42)
    assert len(seq.elements) == 1 and seq.reduction_index == 1
    F3 = adic("R3")
    seq3 = sequence_from_elements(F3, [P("y", F3.S)])
    assert seq3.reduction_index == 2
    seq2 = superficial_sequence(adic("k[x,y]"), seed=3)
    assert len(seq2.elements) == 2 and seq2.reduction_index == 0


def test_sequence_from_elements_errors():
    F = adic("R1")
    with pytest.raises(CertificationError) as ei:
        sequence_from_elements(F, [P("x", F.S)])
    assert ei.value.code == "E_NOT_SUPERFICIAL"
    with pytest.raises(InputError):
        sequence_from_elements(F, [P("x", F.S), P("y", F.S)])
    with pytest.raises(InputError):
        sequence_from_elements(F, [P("y^2", F.S)])


def test_superficial_needs_positive_dimension():
    A = make_ring(["x", "y"], ["x^2", "y^2"])
    with pytest.raises(InputError):
        superficial_sequence(Filtration(A.as_module(), A.maximal_ideal))


# -- derived filtrations ------------------------------------------------------

def test_quotient_filtration_r4_preserves_e0():
    F = adic("R4")
    a, _ = find_superficial([F], seed=5)
    Q = quotient_filtration(F, a)
    hq = hilbert_data(Q)
    assert hq.d == 1
    assert hq.e[0] == hilbert_data(F).e[0] == 1
    assert hq.e[0] == 1 and hq.e[1] == hilbert_data(F).e[1]


def test_quotient_filtration_regular():
    F = adic("k[x,y]")
    Q = quotient_filtration(F, P("x", F.S))
    assert [Q.hilbert_function(j) for j in range(5)] == [1] * 5


def test_quotient_of_r1_by_y():
    F = adic("R1")
    Q = quotient_filtration(F, P("y", F.S))
    assert Q.module.dim == 0
    hq = hilbert_data(Q)
    assert hq.H[:3] == [1, 1, 0]
    assert hq.e == [2]  # e0(M) + lambda(0 :_M y)


def test_derived_N_and_E():
    F1 = adic("R1")
    N1 = derived_N(F1, ideal(F1.S, "y"))
    h = hilbert_data(N1)
    assert (h.h, h.e) == ([2, -1], [1, -1])
    n = F1.S.nvars
    assert [oracle.colength(as_dicts(N1.term(j)), n) for j in range(1, 6)] == [2, 3, 4, 5, 6]
    F3 = adic("R3")
    E3 = derived_E(F3, ideal(F3.S, "y"))
    S = F3.S
    assert E3.term(2) == ideal(S, "x*y", "y^2", "x^3")
    assert E3.term(3) == ideal(S, "x*y^2", "y^3", "x^3")
    he = hilbert_data(E3)
    assert (he.h, he.e) == ([1, 2], [3, 2])


def test_saturated_filtration():
    w, G = saturated_filtration(adic("R1"))
    assert w == 1
    h = hilbert_data(G)
    assert (h.h, h.e) == ([1], [1, 0])
    w4, G4 = saturated_filtration(adic("R4"))
    assert w4 == 0
    assert all(G4.term(j) == adic("R4").term(j) for j in range(5))


def test_v_and_u_values():
    F1 = adic("R1")
    assert v_values(F1, ideal(F1.S, "y"))[:4] == [1, 0, 0, 0]
    F3 = adic("R3")
    v3 = v_values(F3, ideal(F3.S, "y"))
    assert v3[:4] == [2, 1, 0, 0] and sum(v3) == 3
    F = adic("k[x,y]")
    assert not any(v_values(F, Ideal.maximal(F.S)))
    assert u_values(F1, P("y", F1.S))[:4] == [0, -1, 0, 0]
    assert u_values(F3, P("y", F3.S))[:4] == [2, 1, 0, 0]
    assert not any(u_values(adic("k[x]"), P("x", adic("k[x]").S)))
    with pytest.raises(InputError):
        u_values(adic("R4"), P("z", adic("R4").S))


# -- properties on random monomial quotients ------------------------------------------

@st.composite
def monomial_rings(draw):
    n = draw(st.integers(1, 3))
    names = ["x", "y", "z"][:n]
    gens = []
    for _ in range(draw(st.integers(1, 3))):
        e = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n).filter(lambda e: sum(e) >= 2))
        gens.append("*".join(f"{v}^{k}" for v, k in zip(names, e) if k))
    return names, gens


@settings(max_examples=25)
@given(monomial_rings())
def test_filtration_invariants(data):
    names, gens = data
    A = make_ring(names, gens)
    if A.dim < 1:
        return
    F = Filtration(A.as_module(), A.maximal_ideal)
    hd = hilbert_data(F)
    assert hd.e[0] >= 1
    assert sum(hd.h) == hd.e[0]
    assert all(v >= 0 for v in hd.H)
    assert hd.H[: hd.T + 1] == oracle_H(F, hd.T)
    for j in range(hd.postulation, hd.T + 1):
        assert hd.H[j] == hd.hilbert_polynomial(j)
    seq = superficial_sequence(F, seed=11)
    a = seq.elements[0]
    if hd.d >= 2:
        hq = hilbert_data(quotient_filtration(F, a))
        assert hq.e[: hd.d - 1] == hd.e[: hd.d - 1]
    c = seq.certificates[0].c
    for j in range(c, c + 3):
        assert definition_holds_ideal(F, a, c, j)
