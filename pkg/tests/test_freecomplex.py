import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import koszul_p2, make_quad, pm, random_complex, random_map
from quaddef.errors import DegreeMismatch, DescentFailure, NotAChainMap, NotAComplex, ShapeMismatch
from quaddef.freecomplex import (
    ChainMap,
    FreeSheaf,
    PolyMatrix,
    TwistedComplex,
    add_maps,
    braiding,
    check_chain_map,
    compose,
    cone,
    dual,
    identity_map,
    is_chain_map,
    lift_pairing,
    pm_part,
    scale_map,
    shift,
    tensor,
    validate_complex,
)

seeds = st.integers(0, 10**9)


def test_koszul_is_a_complex():
    assert validate_complex(koszul_p2())


def test_not_a_complex_is_reported():
    K = koszul_p2()
    bad = dict(K.diffs)
    bad[-2] = pm(K.term(-2), K.term(-1), [["x1", "x2", "0"], ["x0", "0", "-x2"], ["0", "x0", "x1"]], 3)
    with pytest.raises(NotAComplex, match="d\\^-1 o d\\^-2"):
        validate_complex(TwistedComplex(3, K.terms, bad))


def test_degree_mismatch_names_the_entry():
    src, tgt = FreeSheaf((0,)), FreeSheaf((2,))
    with pytest.raises(DegreeMismatch, match="entry \\(0,0\\)"):
        pm(src, tgt, [["x0"]], 2)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        PolyMatrix(FreeSheaf((0, 0)), FreeSheaf((0,)), [[]], 2)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_complexes_validate(seed):
    assert validate_complex(random_complex(random.Random(seed)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_dual_is_an_involution(seed):
    c = random_complex(random.Random(seed))
    assert dual(dual(c)) == c
    validate_complex(dual(c))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_braiding_squares_to_identity(seed):
    c = random_complex(random.Random(seed))
    theta = braiding(c)
    check_chain_map(theta)
    assert compose(theta, theta) == identity_map(tensor(c, c))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pm_parts_split_the_square(seed):
    c = random_complex(random.Random(seed))
    cc = tensor(c, c)
    plus, p_plus, i_plus = pm_part(c, 1)
    minus, p_minus, i_minus = pm_part(c, -1)
    validate_complex(plus)
    validate_complex(minus)
    for k in cc.degrees():
        assert plus.term(k).rank + minus.term(k).rank == cc.term(k).rank
    for p, i in ((p_plus, i_plus), (p_minus, i_minus)):
        check_chain_map(p)
        check_chain_map(i)
        assert compose(p, i) == identity_map(p.target)
    total = add_maps(compose(i_plus, p_plus), compose(i_minus, p_minus))
    assert total == identity_map(cc)


def test_pm_ranks_of_a_rank_two_term():
    c = TwistedComplex(2, {0: FreeSheaf((0, 0))})
    assert pm_part(c, 1)[0].ranks() == {0: 3}
    assert pm_part(c, -1)[0].ranks() == {0: 1}
    # odd degree swaps the roles
    c1 = TwistedComplex(2, {1: FreeSheaf((0, 0))})
    assert pm_part(c1, 1)[0].ranks() == {2: 1}


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cone_of_identity_is_a_complex(seed):
    c = random_complex(random.Random(seed))
    validate_complex(cone(identity_map(c)))


def test_shift_negates_odd_differentials():
    K = koszul_p2()
    s = shift(K, 1)
    assert s.term(-1) == K.term(0)
    assert s.d(-2) == -K.d(-1)
    assert shift(s, -1) == K


def test_tensor_differential_sign():
    # (O -x0-> O(1)) tensored with itself; degree 1 holds the blocks (0,1)
    # then (1,0). Into (1,1) the first gets d (x) 1, the second -(1 (x) d).
    a, b = FreeSheaf((0,)), FreeSheaf((1,))
    c = TwistedComplex(2, {0: a, 1: b}, {0: pm(a, b, [["x0"]], 2)})
    cc = tensor(c, c)
    validate_complex(cc)
    assert cc.ranks() == {0: 1, 1: 2, 2: 1}
    d1 = cc.d(1)
    assert [str(p) for p in d1.entries[0]] == ["x0", "-x0"]


def test_chain_map_checks():
    K = koszul_p2()
    check_chain_map(identity_map(K))
    f = scale_map(identity_map(K), 2)
    check_chain_map(f)
    comps = dict(identity_map(K).components)
    comps[0] = comps[0].scale(3)
    assert not is_chain_map(ChainMap(K, K, comps))
    with pytest.raises(NotAChainMap):
        check_chain_map(ChainMap(K, K, comps))


def test_lift_has_only_the_degree_zero_component():
    q = make_quad(2, (-1, -1), [["x0^2", "x0*x1"], ["x0*x1", "x1^2"]], 1, (-2,), [["x1"], ["-x0"]])
    lift = lift_pairing(q.resolution, q.pairing)
    check_chain_map(lift)
    assert lift.component(0) == q.pairing
    assert lift.component(-1).is_zero()


def test_lift_rejects_pairings_that_do_not_descend():
    q = make_quad(2, (-1, -1), [["x0^2", "0"], ["0", "x1^2"]], 1, (-2,), [["x1"], ["-x0"]])
    with pytest.raises(DescentFailure):
        lift_pairing(q.resolution, q.pairing)


def test_random_map_degrees(rng):
    f = random_map(rng, FreeSheaf((-1, 2)), FreeSheaf((3,)), 3)
    f.check_degrees()
