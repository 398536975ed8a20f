import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pm, random_map
from quaddef import corpus, docformat
from quaddef.defcomplex import build_deformation_complex
from quaddef.errors import IndexOutOfRange, NotACocycle, NotGloballyRepresentable
from quaddef.freecomplex import PolyMatrix
from quaddef.realizer import (
    Cocycle1,
    check_cocycle1,
    class_basis,
    cocycle1_from_section,
    extract_two_extension,
    gauge_action,
    gauge_isomorphism,
    is_split,
    mu_vanishes_on_kernel_summand,
    pick_class,
    realize_first_order,
    shifted_mu,
    splitting,
    two_cocycle_from_section,
    verify_two_extension,
    zero_cocycle,
)


def load(name):
    return docformat.load(corpus.get(name).text)


@pytest.fixture(scope="module")
def ideal():
    q = load("ideal-point-p2")
    return q, build_deformation_complex(q)


@pytest.fixture(scope="module")
def euler():
    q = load("symplectic-twisted-euler-p1")
    return q, build_deformation_complex(q)


@pytest.mark.parametrize("name", [e.name for e in corpus.valid_entries()])
def test_zero_cocycle_gives_the_split_extension(name):
    q = load(name)
    fo = realize_first_order(q, zero_cocycle(q))
    assert is_split(fo)
    assert all(line.startswith("ok: ") for line in fo.log)
    assert fo.presentation.term(0).rank == 2 * q.W0.rank


def test_splitting_is_a_section(ideal):
    q, _ = ideal
    fo = realize_first_order(q, zero_cocycle(q))
    sigma = splitting(fo)
    assert sigma.is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**9))
def test_gauge_round_trip_and_isomorphism(seed):
    q = load("ideal-point-p2")
    rng = random.Random(seed)
    lam = random_map(rng, q.W0, q.W0, q.num_vars)
    c = gauge_action(q, zero_cocycle(q), random_map(rng, q.W0, q.W0, q.num_vars))
    c2 = gauge_action(q, c, lam)
    check_cocycle1(q, c2)
    back = gauge_action(q, c2, -lam)
    assert back == c
    fo, fo2 = realize_first_order(q, c), realize_first_order(q, c2)
    gauge_isomorphism(fo, fo2, lam)
    # coboundaries split
    assert is_split(fo2)


def test_euler_class_is_not_split(euler):
    q, dc = euler
    basis = class_basis(dc, 1)
    assert basis.h == 1 and basis.representable
    c = cocycle1_from_section(dc, pick_class(basis, 0))
    check_cocycle1(q, c)
    fo = realize_first_order(q, c)
    assert not is_split(fo)
    assert splitting(fo) is None


def test_ideal_point_classes(ideal):
    q, dc = ideal
    basis = class_basis(dc, 1)
    assert basis.h == 2 and basis.representable
    cocycles = [cocycle1_from_section(dc, s) for s in basis.sections]
    for c in cocycles:
        check_cocycle1(q, c)
        assert not is_split(realize_first_order(q, c))
    # a nonzero combination is not a coboundary either
    combo = Cocycle1(cocycles[0].eta + cocycles[1].eta.scale(2), cocycles[0].psi + cocycles[1].psi.scale(2))
    assert not is_split(realize_first_order(q, combo))


def test_pick_class_bounds(ideal):
    _, dc = ideal
    basis = class_basis(dc, 1)
    with pytest.raises(IndexOutOfRange):
        pick_class(basis, 2)
    with pytest.raises(IndexOutOfRange):
        pick_class(basis, -1)


def test_hyperbolic_has_no_first_order_classes():
    dc = build_deformation_complex(load("hyperbolic-p1"))
    with pytest.raises(IndexOutOfRange):
        pick_class(class_basis(dc, 1), 0)


def test_minimal_resolution_lacks_global_representative():
    dc = build_deformation_complex(load("symplectic-twisted-p1"))
    basis = class_basis(dc, 1)
    assert basis.h == 1 and not basis.representable
    with pytest.raises(NotGloballyRepresentable):
        pick_class(basis, 0)


def test_non_cocycles_are_rejected(ideal):
    q, _ = ideal
    z = zero_cocycle(q)
    lopsided = pm(q.W0, q.W0.dual(), [["0", "x0^2"], ["0", "0"]], 3)
    with pytest.raises(NotACocycle, match="symmetry"):
        check_cocycle1(q, Cocycle1(z.eta, lopsided))
    sym = pm(q.W0, q.W0.dual(), [["x2^2", "0"], ["0", "0"]], 3)
    with pytest.raises(NotACocycle, match="P o eta"):
        check_cocycle1(q, Cocycle1(z.eta, sym))
    with pytest.raises(NotACocycle):
        check_cocycle1(q, Cocycle1(z.psi, z.psi))


def test_zero_two_extension_is_split(ideal):
    q, _ = ideal
    data = extract_two_extension(q)
    assert mu_vanishes_on_kernel_summand(data)
    assert all(line.startswith("ok: ") for line in data.log)


def test_coboundary_two_extension_shifts_back(ideal):
    q, _ = ideal
    psi = pm(q.W0, q.W0.dual(), [["x2^2", "x0*x1"], ["x0*x1", "x2*x0"]], 3)
    d = q.resolution.d(-1)
    data = extract_two_extension(q, xi=psi @ d)
    assert not mu_vanishes_on_kernel_summand(data)
    assert shifted_mu(data, psi) == extract_two_extension(q).mu


def test_ideal_point_obstruction_classes(ideal):
    q, dc = ideal
    basis = class_basis(dc, 2)
    assert basis.h == 3 and basis.representable
    for s in basis.sections:
        chi, xi = two_cocycle_from_section(dc, s)
        data = extract_two_extension(q, chi, xi)
        assert verify_two_extension(data)


def test_two_cocycle_conditions(ideal):
    q, _ = ideal
    bad = PolyMatrix.zero(q.W0, q.W0, 3)
    with pytest.raises(NotACocycle):
        extract_two_extension(q, xi=bad)
