from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quaddef import _kernels_py, exactla
from quaddef.exactla import RatMatrix, independent_rows, kernel_basis, rank, solve

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_dim=7):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    zero_bias = draw(st.floats(0, 0.9))
    rows = []
    for _ in range(r):
        row = []
        for _ in range(c):
            zero = draw(st.floats(0, 1)) < zero_bias
            row.append(Fraction(0) if zero else draw(fractions))
        rows.append(row)
    return RatMatrix.from_dense(rows, ncols=c)


def sympy_rank(m):
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return sympy.Matrix(m.to_dense()).rank()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sympy_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_basis_is_a_basis(m):
    K = kernel_basis(m)
    assert K.nrows == m.ncols
    assert K.ncols == m.ncols - rank(m)
    assert (m @ K).is_zero()
    assert rank(K) == K.ncols


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(fractions, min_size=7, max_size=7))
def test_solve_consistent_systems(m, xs):
    x = xs[: m.ncols]
    b = m.mul_vec(x)
    y = solve(m, b)
    assert y is not None
    assert m.mul_vec(y) == b


def test_solve_reports_inconsistency():
    m = RatMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_independent_rows_greedy(m):
    chosen = independent_rows(m)
    assert len(chosen) == rank(m)
    assert chosen == sorted(chosen)
    assert rank(m.select_rows(chosen)) == len(chosen)
    # greedy: each skipped row depends on the chosen rows before it
    for i in range(m.nrows):
        if i in chosen:
            continue
        before = [k for k in chosen if k < i]
        assert rank(m.select_rows(before + [i])) == len(before)


def test_block_and_transpose():
    a = RatMatrix.from_dense([[1, 2]])
    b = RatMatrix.identity(2)
    m = RatMatrix.block([[a, None], [None, b]], [1, 2], [2, 2])
    assert m.shape == (3, 4)
    assert m.to_dense()[0] == [1, 2, 0, 0]
    assert m.transpose().transpose() == m
    with pytest.raises(ValueError):
        RatMatrix.block([[b]], [1], [2])


def _int_rows(m):
    return exactla._integer_rows(m)


@pytest.mark.skipif(exactla.BACKEND != "cython", reason="compiled kernel not built")
@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=9))
def test_compiled_kernel_agrees_with_python(m):
    from quaddef import _kernels

    if m.nrows == 0 or m.ncols == 0:
        return
    rows = _int_rows(m)
    assert _kernels.echelon_rank(rows, m.ncols) == _kernels_py.echelon_rank(rows, m.ncols)
    assert _kernels.echelon_pivots(rows, m.ncols) == _kernels_py.echelon_pivots(rows, m.ncols)


@pytest.mark.skipif(exactla.BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_kernel_overflow_falls_back():
    from quaddef import _kernels

    big = 2**62 + 11
    rows = [([0, 1], [big, 3]), ([0, 1], [5, big])]
    with pytest.raises(OverflowError):
        _kernels.echelon_rank(rows, 2)
    m = RatMatrix.from_dense([[big, 3], [5, big]])
    assert rank(m) == 2


def test_rank_with_huge_entries_is_exact():
    m = RatMatrix.from_dense([[10**30, 1], [10**30 + 1, 1], [1, Fraction(1, 10**30)]])
    assert rank(m) == 2
    assert rank(RatMatrix.from_dense([[10**30, 10**31], [1, 10]])) == 1
