from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quaddef.errors import ParseError
from quaddef.polyring import (
    MonomialSpace,
    Poly,
    chi_line_bundle,
    format_poly,
    monomial_basis,
    mult_matrix,
    parse_poly,
)


@st.composite
def polys(draw, nv=3, max_deg=3):
    deg = draw(st.integers(0, max_deg))
    basis = monomial_basis(MonomialSpace(nv, deg))
    terms = {}
    for e in draw(st.lists(st.sampled_from(basis), max_size=4, unique=True)):
        terms[e] = draw(st.fractions(min_value=-9, max_value=9, max_denominator=5))
    return Poly(nv, terms)


@settings(max_examples=200, deadline=None)
@given(polys())
def test_format_parse_roundtrip(p):
    assert parse_poly(format_poly(p), 3) == p


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly(3)


def test_parse_examples():
    p = parse_poly("x0^2 - 3/2*x0*x1 + 7", 2)
    assert p.terms == {(2, 0): 1, (1, 1): Fraction(-3, 2), (0, 0): 7}
    assert format_poly(parse_poly("x1*x0", 2)) == "x0*x1"
    assert format_poly(parse_poly("-x1 + x0", 2)) == "x0 - x1"
    assert parse_poly("2*x0*x0", 2) == parse_poly("2*x0^2", 2)


@pytest.mark.parametrize(
    "text, column",
    [("x0^", 4), ("x0 +", 5), ("x0 x1", 4), ("x0 ? 1", 4), ("x5", 1), ("", 1), ("x0^1/2", 4)],
)
def test_parse_errors_have_positions(text, column):
    with pytest.raises(ParseError) as exc:
        parse_poly(text, 2, line=7)
    assert exc.value.line == 7
    assert exc.value.column == column


def test_parse_error_column_offset():
    with pytest.raises(ParseError) as exc:
        parse_poly("x0^", 2, line=1, column_offset=10)
    assert exc.value.column == 14


@pytest.mark.parametrize("nv, d", [(2, 0), (2, 5), (3, 4), (4, 3)])
def test_monomial_count_is_binomial(nv, d):
    assert len(monomial_basis(MonomialSpace(nv, d))) == comb(d + nv - 1, nv - 1)


def test_monomial_order_is_descending_lex():
    basis = monomial_basis(MonomialSpace(3, 2))
    assert list(basis) == sorted(basis, reverse=True)
    assert basis[0] == (2, 0, 0)


def test_laurent_space_bounds():
    sp = MonomialSpace(2, -2, {0, 1}, window=2)
    assert set(monomial_basis(sp)) >= {(-1, -1), (-2, 0), (0, -2)}
    assert all(min(e) >= -2 for e in monomial_basis(sp))
    assert all(sum(e) == -2 for e in monomial_basis(sp))


def test_multiplication_matrix():
    x0 = Poly.var(2, 0)
    src = MonomialSpace(2, 1)
    tgt = MonomialSpace(2, 2)
    m = mult_matrix(x0, src, tgt)
    # x0 * x0 = x0^2 (index 0), x0 * x1 = x0*x1 (index 1)
    assert m.to_dense() == [[1, 0], [0, 1], [0, 0]]


def test_multiplication_needs_matching_charts():
    src = MonomialSpace(2, 0, {0}, window=1)
    tgt = MonomialSpace(2, 1, {1}, window=1)
    with pytest.raises(ValueError):
        mult_matrix(Poly.var(2, 0), src, tgt)


@settings(max_examples=60, deadline=None)
@given(polys(nv=3, max_deg=2), st.integers(0, 2), st.integers(-3, 2), st.sets(st.integers(0, 2)))
def test_multiplication_stays_in_window(p, window, degree, chart):
    src = MonomialSpace(3, degree, chart, window)
    tgt = MonomialSpace(3, degree + (p.degree or 0), chart, window)
    if p.is_zero():
        return
    m = mult_matrix(p, src, tgt)
    tb = monomial_basis(tgt)
    for j, e in enumerate(monomial_basis(src)):
        col = {tb[i]: v for i, v in enumerate(m.column(j)) if v}
        prod = p * Poly(3, {e: 1}) if min(e) >= 0 else None
        if prod is not None:
            assert col == prod.terms


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chi_line_bundle(n):
    for d in range(0, 6):
        assert chi_line_bundle(n, d) == comb(n + d, n)
    # Serre duality: chi(O(d)) = (-1)^n chi(O(-d-n-1))
    for d in range(-6, 6):
        assert chi_line_bundle(n, d) == (-1) ** n * chi_line_bundle(n, -d - n - 1)
