from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from chern.errors import InputError
from chern.groebner import (Ideal, graded_piece_dim, groebner_basis, ideal_arith, ideal_colon,
                            ideal_intersect, krull_dim, normal_form, saturation)
from chern.poly import FieldSpec, PolyRing, Polynomial
from conftest import P, as_dicts, ideal

S2 = PolyRing(("x", "y"))
S3 = PolyRing(("x", "y", "z"))


@st.composite
def homogeneous_poly(draw, ring, max_deg=3, max_terms=3):
    t = draw(st.integers(1, max_deg))
    mons = ring.monomials_of_degree(t)
    picked = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(st.lists(st.integers(1, 40), min_size=len(picked), max_size=len(picked)))
    return Polynomial(ring, dict(zip(picked, coeffs)))


@st.composite
def homogeneous_ideal(draw, ring, max_gens=3, max_deg=3):
    gens = draw(st.lists(homogeneous_poly(ring, max_deg), min_size=1, max_size=max_gens))
    return Ideal(ring, gens)


rings = st.sampled_from([S2, S3])


# -- examples ------------------------------------------------------------------

def test_gb_of_zero_ideal_is_empty():
    assert Ideal(S2, [S2.zero()]).gb == ()


def test_gb_already_reduced():
    I = groebner_basis(S2.gens())
    assert sorted(map(str, I.gb)) == ["x", "y"]


def test_gb_of_binomial_example():
    # in grevlex x^2 - y^2 keeps x^2 as leading term, and y^3 is its S-pair with xy
    I = groebner_basis([P("x^2 - y^2", S2), P("x*y", S2)])
    assert sorted(map(str, I.gb)) == ["x*y", "x^2 - y^2", "y^3"]
    basis = [g.as_dict() for g in I.gb]
    assert oracle.equal_upto(as_dicts(I), basis, 2, 10)
    assert oracle.contains(as_dicts(I), P("y^3", S2).as_dict(), 2)
    assert not oracle.contains(as_dicts(I), P("x^2", S2).as_dict(), 2)


def test_gb_mixed_rings_rejected():
    with pytest.raises(InputError):
        groebner_basis([P("x", S2), P("x", S3)])


def test_normal_form_examples():
    I = ideal(S2, "x^2", "x*y")
    assert normal_form(P("x^2", S2), I).is_zero()
    assert normal_form(P("y", S2), I) == P("y", S2)
    assert normal_form(P("x", S2) * P("x + y", S2), I).is_zero()
    assert oracle.contains(as_dicts(I), P("x^2 + x*y", S2).as_dict(), 2)


def test_ideal_arith_examples():
    m = Ideal.maximal(S2)
    assert ideal_arith("power", m, 2) == ideal(S2, "x^2", "x*y", "y^2")
    assert ideal_arith("sum", ideal(S2, "x"), ideal(S2, "y")) == m
    assert ideal_arith("product", m, m) == m ** 2
    assert m ** 0 == Ideal.unit(S2)


def test_colon_examples():
    I = ideal(S2, "x^2", "x*y")
    assert ideal_colon(I, ideal(S2, "x")) == Ideal.maximal(S2)
    assert ideal_colon(I, Ideal.unit(S2)) == I
    assert ideal_colon(I, Ideal.maximal(S2)) == ideal(S2, "x")
    with pytest.raises(InputError):
        ideal_colon(I, Ideal(S2, []))


def test_colon_matches_oracle_degreewise():
    I = ideal(S2, "x^2", "x*y")
    for J in (ideal(S2, "x"), Ideal.maximal(S2), ideal(S2, "y")):
        C = ideal_colon(I, J)
        for t in range(7):
            expected = math.comb(t + 1, t) - oracle.colon_dim(as_dicts(I), as_dicts(J), 2, t)
            assert graded_piece_dim(C, t) == expected


def test_intersection_examples():
    assert ideal_intersect(ideal(S2, "x"), ideal(S2, "y")) == ideal(S2, "x*y")
    I = ideal(S2, "x^2", "x*y")
    assert ideal_intersect(I, I) == I
    assert ideal_intersect(I, ideal(S2, "y")) == ideal(S2, "x*y")


def test_saturation_examples():
    m = Ideal.maximal(S2)
    assert saturation(ideal(S2, "x^2", "x*y"), m) == ideal(S2, "x")
    assert saturation(ideal(S2, "x"), ideal(S2, "y")) == ideal(S2, "x")
    assert saturation(ideal(S2, "x^2"), ideal(S2, "x")) == Ideal.unit(S2)


def test_graded_piece_dim_examples():
    assert graded_piece_dim(ideal(S2, "x^2", "x*y"), 3) == 1
    assert graded_piece_dim(Ideal(S2, []), 2) == 3
    assert graded_piece_dim(Ideal.unit(S2), 5) == 0
    with pytest.raises(InputError):
        graded_piece_dim(ideal(S2, "x^2 + y"), 2)


def test_krull_dim_examples():
    assert krull_dim(ideal(S2, "x^2", "x*y")) == 1
    assert krull_dim(Ideal(S2, [])) == 2
    assert krull_dim(ideal(S3, "x^2", "x*y")) == 2
    with pytest.raises(InputError):
        krull_dim(Ideal.unit(S2))


def test_rational_field_gb():
    Q = PolyRing(("x", "y"), FieldSpec(None))
    I = groebner_basis([P("2*x^2 - 1/3*y^2", Q), P("x*y", Q)])
    assert all(g.lc == 1 for g in I.gb)
    assert I.contains(P("y^3", Q))


# -- properties --------------------------------------------------------------

@given(rings.flatmap(lambda R: homogeneous_ideal(R)))
def test_piece_dims_agree_with_oracle(I):
    n = I.ring.nvars
    gens = as_dicts(I)
    for t in range(7):
        assert graded_piece_dim(I, t) == oracle.quotient_dim(gens, n, t)


@given(rings.flatmap(lambda R: st.tuples(homogeneous_ideal(R), homogeneous_poly(R, 4, 4))))
def test_membership_agrees_with_oracle(data):
    I, f = data
    n = I.ring.nvars
    assert I.contains(f) == oracle.contains(as_dicts(I), f.as_dict(), n)
    # f times a generator always lies in I
    assert I.contains(f * I.gens[0])


@given(rings.flatmap(lambda R: homogeneous_ideal(R)))
def test_gb_is_idempotent_and_canonical(I):
    again = groebner_basis(list(I.gb))
    assert again.gb == I.gb
    shuffled = Ideal(I.ring, list(reversed(I.gens)) + list(I.gens))
    assert shuffled.gb == I.gb


@given(rings.flatmap(lambda R: st.tuples(homogeneous_ideal(R), homogeneous_ideal(R, 2, 2))))
def test_colon_properties(data):
    I, J = data
    C = I.colon(J)
    assert I.issubset(C)
    assert (C * J).issubset(I)
    n = I.ring.nvars
    for t in range(5):
        assert math.comb(n + t - 1, t) - graded_piece_dim(C, t) == \
            oracle.colon_dim(as_dicts(I), as_dicts(J), n, t)


@given(rings.flatmap(lambda R: st.tuples(homogeneous_ideal(R), homogeneous_ideal(R))))
def test_intersection_agrees_with_oracle(data):
    A, B = data
    C = A.intersect(B)
    n = A.ring.nvars
    assert C.issubset(A) and C.issubset(B)
    for t in range(6):
        assert math.comb(n + t - 1, t) - graded_piece_dim(C, t) == \
            oracle.intersect_dim(as_dicts(A), as_dicts(B), n, t)


@given(rings.flatmap(lambda R: homogeneous_ideal(R)))
def test_saturation_is_colon_fixed_point(I):
    m = Ideal.maximal(I.ring)
    sat = I.saturate(m)
    assert sat.colon(m) == sat
    assert I.issubset(sat)


@given(rings.flatmap(lambda R: homogeneous_ideal(R)))
def test_krull_dim_agrees_with_oracle(I):
    if I.is_unit():
        return
    assert I.krull_dim() == oracle.krull_dim(as_dicts(I), I.ring.nvars)


@given(rings.flatmap(lambda R: st.tuples(homogeneous_ideal(R), homogeneous_ideal(R))))
def test_equality_is_symmetric(data):
    A, B = data
    assert (A == B) == (B == A)
    assert (A + B) == (B + A)
