import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import koszul_p2, pm, random_complex, random_map
from quaddef import cech
from quaddef.errors import Unstable
from quaddef.freecomplex import (
    ChainMap,
    FreeSheaf,
    TwistedComplex,
    cone,
    identity_map,
    single_term,
)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("d", [-5, -3, -2, -1, 0, 2])
def test_line_bundles_match_bott(n, d):
    rep = cech.hypercohomology(single_term(n + 1, FreeSheaf((d,))))
    for i in range(n + 1):
        assert rep.h(i) == cech.bott_dim(n, d, i)
    assert rep.stable and rep.euler_ok


def test_bott_values():
    assert cech.bott_dim(1, -2, 1) == 1
    assert cech.bott_dim(2, -3, 2) == 1
    assert cech.bott_dim(2, -5, 2) == 6
    assert cech.bott_dim(2, 2, 0) == 6
    assert cech.bott_dim(2, -1, 1) == 0


def test_term_degree_shifts_cohomology():
    rep = cech.hypercohomology(single_term(2, FreeSheaf((-3,)), degree=-1))
    assert rep.h(0) == 2
    assert rep.h(1) == 0


def test_koszul_complex_is_acyclic():
    rep = cech.hypercohomology(koszul_p2())
    assert all(h == 0 for h in rep.dims.values())


def test_euler_sequence_on_p1():
    # 0 -> O(-1) -> O^2 -> O(1) -> 0 is exact
    nv = 2
    a, b, c = FreeSheaf((-1,)), FreeSheaf((0, 0)), FreeSheaf((1,))
    cx = TwistedComplex(
        nv, {-1: a, 0: b, 1: c}, {-1: pm(a, b, [["x1"], ["-x0"]], nv), 0: pm(b, c, [["x0", "x1"]], nv)}
    )
    assert all(h == 0 for h in cech.hypercohomology(cx).dims.values())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_cone_of_identity_is_acyclic(seed):
    c = random_complex(random.Random(seed))
    rep = cech.hypercohomology(cone(identity_map(c)))
    assert all(h == 0 for h in rep.dims.values())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_euler_characteristic_of_random_complexes(seed):
    c = random_complex(random.Random(seed))
    rep = cech.hypercohomology(c)
    assert rep.euler == cech.euler_of_terms(c)


def test_explicit_small_window_is_unstable():
    c = single_term(2, FreeSheaf((-6,)))
    with pytest.raises(Unstable) as exc:
        cech.hypercohomology(c, window=1)
    assert exc.value.suggested_window >= cech.default_window(c)


def test_default_window_doubles_when_needed():
    c = single_term(2, FreeSheaf((-6,)))
    total = cech.stable_total(c)
    assert total.cohomology(1) == 5


def test_stability_sweep_agrees():
    c = single_term(3, FreeSheaf((-4,)))
    W = cech.default_window(c)
    sweep = cech.stability_sweep(c, W)
    assert len({tuple(sorted(d.items())) for d in sweep}) == 1


def test_report_roundtrip():
    rep = cech.hypercohomology(single_term(3, FreeSheaf((-4, 1))))
    assert cech.CohomologyReport.from_dict(rep.to_dict()) == rep


def test_les_of_multiplication_map():
    nv = 3
    a, b = FreeSheaf((-1,)), FreeSheaf((0,))
    f = ChainMap(single_term(nv, a), single_term(nv, b), {0: pm(a, b, [["x0"]], nv)})
    les = cech.les_check(f)
    assert les.exact, les.failures
    row0 = next(r for r in les.table if r["degree"] == 0)
    assert row0["target"] == 1 and row0["source"] == 0
    assert cech.LESReport.from_dict(les.to_dict()) == les


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9))
def test_les_of_random_maps(seed):
    rng = random.Random(seed)
    nv = rng.choice((2, 3))
    A = FreeSheaf((rng.randint(-3, 1),))
    B = FreeSheaf(tuple(rng.randint(-2, 2) for _ in range(rng.randint(1, 2))))
    f = ChainMap(single_term(nv, A), single_term(nv, B), {0: random_map(rng, A, B, nv)})
    les = cech.les_check(f)
    assert les.exact, les.failures
