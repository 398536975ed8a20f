import random

import pytest

from quaddef import corpus, docformat
from quaddef.defcomplex import QuadraticSheaf, deformation_report
from quaddef.freecomplex import FreeSheaf, PolyMatrix, TwistedComplex, tensor
from quaddef.polyring import MonomialSpace, Poly, monomial_basis, parse_poly


def pm(src, tgt, rows, nv):
    return PolyMatrix(src, tgt, [[parse_poly(x, nv) for x in r] for r in rows], nv)


def make_quad(n, w0, pairing, sign, w1=None, d=None, name=""):
    nv = n + 1
    W0 = FreeSheaf(w0)
    terms, diffs = {0: W0}, {}
    if w1:
        W1 = FreeSheaf(w1)
        terms[-1] = W1
        diffs[-1] = pm(W1, W0, d, nv)
    res = TwistedComplex(nv, terms, diffs)
    return QuadraticSheaf(n, res, pm(W0, W0.dual(), pairing, nv), sign, name)


def koszul_p2():
    """Koszul complex of (x0, x1, x2) on P^2: O(-3) -> O(-2)^3 -> O(-1)^3 -> O."""
    nv = 3
    t = {-3: FreeSheaf((-3,)), -2: FreeSheaf((-2,) * 3), -1: FreeSheaf((-1,) * 3), 0: FreeSheaf((0,))}
    d = {
        -3: pm(t[-3], t[-2], [["x2"], ["-x1"], ["x0"]], nv),
        -2: pm(t[-2], t[-1], [["-x1", "-x2", "0"], ["x0", "0", "-x2"], ["0", "x0", "x1"]], nv),
        -1: pm(t[-1], t[0], [["x0", "x1", "x2"]], nv),
    }
    return TwistedComplex(nv, t, d)


def random_poly(rng, nv, degree, density=0.6):
    if degree < 0:
        return Poly(nv)
    terms = {}
    for e in monomial_basis(MonomialSpace(nv, degree)):
        if rng.random() < density:
            terms[e] = rng.randint(-3, 3)
    return Poly(nv, terms)


def random_map(rng, src, tgt, nv):
    rows = [[random_poly(rng, nv, b - a) for a in src.twists] for b in tgt.twists]
    return PolyMatrix(src, tgt, rows, nv)


def random_sheaf(rng, lo=-4, hi=4, max_rank=3, min_rank=1):
    return FreeSheaf(tuple(rng.randint(lo, hi) for _ in range(rng.randint(min_rank, max_rank))))


def random_complex(rng, nv=None):
    """Small complex with twists in [-4, 4] and ranks at most 3.

    Either a random two-term complex or the tensor product of two of them
    (twists then bounded by keeping each factor in [-2, 2]).
    """
    nv = nv or rng.choice((2, 3))
    lo = rng.randint(-3, 2)
    if rng.random() < 0.6:
        A, B = random_sheaf(rng), random_sheaf(rng)
        return TwistedComplex(nv, {lo: A, lo + 1: B}, {lo: random_map(rng, A, B, nv)})
    parts = []
    for _ in range(2):
        A = random_sheaf(rng, -2, 2, max_rank=1)
        B = random_sheaf(rng, -2, 2, max_rank=1)
        parts.append(TwistedComplex(nv, {0: A, 1: B}, {0: random_map(rng, A, B, nv)}))
    return tensor(parts[0], parts[1])


@pytest.fixture(scope="session")
def corpus_reports():
    """Reports of every valid corpus entry, computed once."""
    out = {}
    for e in corpus.valid_entries():
        out[e.name] = deformation_report(docformat.load(e.text))
    return out


@pytest.fixture
def rng():
    return random.Random(20261017)
