"""First-order deformations and 2-extensions from cocycle data.

Notation, with ``P`` the stored form on ``W0`` (a map ``W0 -> W0^dual``) and
``d = d^{-1}``:

* a first-order class is a pair ``(eta, psi)`` with ``eta: W-1 -> W0``
  lifting a map to ``E`` and ``psi: W0 -> W0^dual`` (anti)symmetric like
  ``P``, subject to ``P eta + psi d = 0`` and ``eta d^{-2}`` landing in the
  image of ``d``;
* its extension ``F`` is presented on ``W0 (+) W0`` by the relations
  ``[[d, eta], [0, d]]``; ``i`` is the first inclusion, ``j`` the second
  projection, and ``F`` carries the form ``[[0, P], [P, psi]]``;
* a degree-2 class is ``(chi, xi)`` with ``chi: W-2 -> W0`` and
  ``xi: W-1 -> W0^dual``; its 2-extension is ``E -> F -> W0 -> E`` with
  ``F`` presented on ``W0 (+) W-1`` by ``[[d, chi], [0, d^{-2}]]``.

All identities are checked as exact polynomial matrix equalities, and
exactness of the short sequences by ranks of graded pieces.
"""

import logging
from dataclasses import dataclass, field

from . import cech
from .errors import (
    DescentObstruction,
    IndexOutOfRange,
    NotACocycle,
    NotGloballyRepresentable,
)
from .exactla import RatMatrix, independent_rows, kernel_basis, rank
from .freecomplex import (
    ZERO_SHEAF,
    ChainMap,
    FreeSheaf,
    PolyMatrix,
    TwistedComplex,
    block_map,
    check_chain_map,
    tensor_layout,
)
from .linsys import PolyMatrixSpace, solve_maps
from .polyring import MonomialSpace, mult_entries, monomial_basis, _basis_index

log = logging.getLogger(__name__)


@dataclass
class Cocycle1:
    eta: PolyMatrix  # W-1 -> W0
    psi: PolyMatrix  # W0 -> W0^dual


@dataclass
class FirstOrderDeformation:
    quad: object
    cocycle: Cocycle1
    presentation: TwistedComplex  # W-1 (+) W-1 -> W0 (+) W0
    i: PolyMatrix  # W0 -> W0 (+) W0, descends to E -> F
    j: PolyMatrix  # W0 (+) W0 -> W0, followed by the projection to E
    phi: PolyMatrix  # form on the generators of F
    log: list = field(default_factory=list)

    @property
    def relations(self):
        return self.presentation.d(-1)


@dataclass
class TwoExtensionData:
    quad: object
    chi: PolyMatrix  # W-2 -> W0
    xi: PolyMatrix  # W-1 -> W0^dual
    presentation: TwistedComplex  # W-1 (+) W-2 -> W0 (+) W-1
    G: FreeSheaf
    i: PolyMatrix  # W0 -> W0 (+) W-1
    f: PolyMatrix  # W0 (+) W-1 -> G
    j: PolyMatrix  # G -> W0, followed by the projection to E
    mu: PolyMatrix  # G x F -> O as a map F -> G^dual
    log: list = field(default_factory=list)

    @property
    def relations(self):
        return self.presentation.d(-1)

    @property
    def mu_class_modulus(self):
        return "psi o (1 (x) f) for psi: G -> G^dual with the sign symmetry of the form"


def _nv(q):
    return q.num_vars


def _d(q, i):
    return q.resolution.d(i)


def _zero(src, tgt, nv):
    return PolyMatrix.zero(src, tgt, nv)


def zero_cocycle(q):
    W = q.resolution
    nv = _nv(q)
    return Cocycle1(
        _zero(W.term(-1), W.term(0), nv), _zero(W.term(0), W.term(0).dual(), nv)
    )


# first order


def check_cocycle1(q, c):
    """Raise NotACocycle unless ``c`` satisfies both cocycle conditions."""
    W = q.resolution
    W0, W1, W2 = W.term(0), W.term(-1), W.term(-2)
    P = q.pairing
    if c.eta.source != W1 or c.eta.target != W0:
        raise NotACocycle("eta must map W-1 to W0")
    if c.psi.source != W0 or c.psi.target != W0.dual():
        raise NotACocycle("psi must map W0 to its dual")
    c.eta.check_degrees()
    c.psi.check_degrees()
    if not c.psi.is_symmetric(q.sign):
        raise NotACocycle("psi does not have the symmetry of the form")
    if W1.rank and not (P @ c.eta + c.psi @ _d(q, -1)).is_zero():
        raise NotACocycle("P o eta + psi o d is not zero")
    if W2.rank:
        lhs = c.eta @ _d(q, -2)
        if not lhs.is_zero():
            sol = solve_maps(
                [PolyMatrixSpace(W2, W1, _nv(q))],
                lambda z: _d(q, -1) @ z,
                PolyMatrixSpace(W2, W0, _nv(q)),
                lhs,
            )
            if sol is None:
                raise NotACocycle("eta o d^-2 does not factor through d")
    return True


def _graded(m, k):
    """Degree-``k`` piece of a map of free modules, on monomial bases."""
    nv = m.num_vars
    src = [MonomialSpace(nv, k + t) for t in m.source.twists]
    tgt = [MonomialSpace(nv, k + t) for t in m.target.twists]
    soff, toff = [0], [0]
    for s in src:
        soff.append(soff[-1] + len(s))
    for t in tgt:
        toff.append(toff[-1] + len(t))
    entries = []
    for a, row in enumerate(m.entries):
        for b, p in enumerate(row):
            if p.is_zero() or not len(src[b]) or not len(tgt[a]):
                continue
            for r, cidx, v in mult_entries(p, src[b], tgt[a]):
                entries.append((toff[a] + r, soff[b] + cidx, v))
    return RatMatrix.from_entries(toff[-1], soff[-1], entries)


def _graded_dim(sheaf, nv, k):
    return sum(len(MonomialSpace(nv, k + t)) for t in sheaf.twists)


def _degree_range(*sheaves):
    tw = [abs(t) for s in sheaves for t in s.twists] or [0]
    b = 2 + max(tw)
    return range(-b, b + 1)


def _cokernel_dim(m, k):
    g = _graded(m, k)
    return g.nrows - (rank(g) if g.nrows and g.ncols else 0)


def _injective_on_cokernel(rel, inc, k, expected):
    """``inc`` induces an injection ``coker(d) -> coker(rel)`` in degree ``k``
    when the rank it adds to ``rel`` equals ``expected``."""
    R = _graded(rel, k)
    I = _graded(inc, k)
    if not R.nrows:
        return expected == 0
    both = RatMatrix.hstack([R, I], nrows=R.nrows)
    return rank(both) - (rank(R) if R.ncols else 0) == expected


def _require(ok, message, logbook):
    if not ok:
        raise DescentObstruction(message)
    logbook.append(f"ok: {message}")


def realize_first_order(q, c):
    """Presentation of the extension of ``E`` by ``E`` with its form."""
    check_cocycle1(q, c)
    W = q.resolution
    nv = _nv(q)
    W0, W1 = W.term(0), W.term(-1)
    d = _d(q, -1)
    gens = W0 + W0
    rel_src = W1 + W1
    rel = block_map([[d, c.eta], [None, d]], [W1, W1], [W0, W0], nv)
    pres = TwistedComplex(nv, {-1: rel_src, 0: gens}, {-1: rel})
    i = block_map([[PolyMatrix.identity(W0, nv)], [None]], [W0], [W0, W0], nv)
    j = block_map([[None, PolyMatrix.identity(W0, nv)]], [W0, W0], [W0], nv)
    P = q.pairing
    phi = block_map([[None, P], [P, c.psi]], [W0, W0], [W0.dual(), W0.dual()], nv)
    fo = FirstOrderDeformation(q, c, pres, i, j, phi)
    verify_first_order(fo)
    return fo


def verify_first_order(fo):
    """Check every identity of the extension; the log lists what passed."""
    q = fo.quad
    nv = _nv(q)
    W0 = q.resolution.term(0)
    P = q.pairing
    rel = fo.relations
    phi, i, j = fo.phi, fo.i, fo.j
    logbook = []
    _require(phi.is_symmetric(q.sign), "Phi o theta_F = sign * Phi", logbook)
    _require(phi @ i == j.transpose() @ P, "Phi o (1 (x) i) = phi o (j (x) 1)", logbook)
    if rel.source.rank:
        _require((phi @ rel).is_zero(), "Phi vanishes on the relations of F", logbook)
    ij = i @ j
    _require(phi @ ij == ij.transpose() @ phi, "Phi vanishes on the relations I", logbook)
    _require((j @ i).is_zero(), "j o i = 0", logbook)
    if rel.source.rank:
        W1 = q.resolution.term(-1)
        jr = j @ rel
        want = block_map([[None, _d(q, -1)]], [W1, W1], [W0], nv)
        _require(jr == want, "j maps the relations of F into those of E", logbook)
    d = _d(q, -1) if q.resolution.term(-1).rank else None
    for k in _degree_range(fo.presentation.term(0), fo.presentation.term(-1)):
        dim_e = _cokernel_dim(d, k) if d is not None else _graded_dim(W0, nv, k)
        if rel.source.rank:
            dim_f = _cokernel_dim(rel, k)
            inj = _injective_on_cokernel(rel, i, k, dim_e)
        else:
            dim_f = 2 * _graded_dim(W0, nv, k)
            inj = True
        if not (inj and dim_f == 2 * dim_e):
            raise DescentObstruction(f"0 -> E -> F -> E -> 0 is not exact in degree {k}")
    logbook.append("ok: 0 -> E -> F -> E -> 0 exact on graded pieces")
    fo.log = logbook
    return logbook


def gauge_action(q, c, lam):
    """Translate ``c`` by the coboundary of ``lam: W0 -> W0``."""
    W = q.resolution
    P = q.pairing
    eta = c.eta
    if W.term(-1).rank:
        eta = eta - lam @ _d(q, -1)
    psi = c.psi + P @ lam + lam.transpose() @ P
    return Cocycle1(eta, psi)


def gauge_isomorphism(fo, fo2, lam):
    """Chain map of presentations ``F -> F'`` for ``F' = realize(c - d lam)``:
    the identity on relations and ``[[1, -lam], [0, 1]]`` on generators.

    Checks that it respects ``i`` and ``j`` and that ``Phi`` is ``Phi'``
    pulled back along it.
    """
    q = fo.quad
    nv = _nv(q)
    W0 = q.resolution.term(0)
    one = PolyMatrix.identity(W0, nv)
    beta = block_map([[one, -lam], [None, one]], [W0, W0], [W0, W0], nv)
    comps = {0: beta}
    if fo.presentation.term(-1).rank:
        comps[-1] = PolyMatrix.identity(fo.presentation.term(-1), nv)
    iso = ChainMap(fo.presentation, fo2.presentation, comps)
    check_chain_map(iso)
    if beta @ fo.i != fo2.i or fo2.j @ beta != fo.j:
        raise DescentObstruction("gauge map does not respect i and j")
    if beta.transpose() @ fo2.phi @ beta != fo.phi:
        raise DescentObstruction("Phi is not the pullback of Phi' along the gauge map")
    return iso


def splitting(fo):
    """``sigma: W0 -> W0`` such that ``u -> (sigma u, u)`` is a section of
    ``j``, or ``None`` when the extension does not split."""
    q = fo.quad
    W = q.resolution
    nv = _nv(q)
    W0, W1 = W.term(0), W.term(-1)
    if not W1.rank:
        return PolyMatrix.zero(W0, W0, nv)
    d = _d(q, -1)
    sol = solve_maps(
        [PolyMatrixSpace(W0, W0, nv), PolyMatrixSpace(W1, W1, nv)],
        lambda s, k: s @ d + d @ k,
        PolyMatrixSpace(W1, W0, nv),
        fo.cocycle.eta,
    )
    return None if sol is None else sol[0]


def is_split(fo):
    return splitting(fo) is not None


# two-extensions


def check_two_cocycle(q, chi, xi):
    W = q.resolution
    nv = _nv(q)
    W0, W1, W2, W3 = (W.term(i) for i in (0, -1, -2, -3))
    if chi.source != W2 or chi.target != W0:
        raise NotACocycle("chi must map W-2 to W0")
    if xi.source != W1 or xi.target != W0.dual():
        raise NotACocycle("xi must map W-1 to the dual of W0")
    chi.check_degrees()
    xi.check_degrees()
    if W1.rank:
        m = _d(q, -1).transpose() @ xi
        if not m.is_symmetric(q.sign):
            raise NotACocycle("d^T o xi does not have the symmetry of the form")
    if W2.rank and not (q.pairing @ chi - xi @ _d(q, -2)).is_zero():
        raise NotACocycle("P o chi - xi o d^-2 is not zero")
    if W3.rank:
        lhs = chi @ _d(q, -3)
        if not lhs.is_zero():
            sol = solve_maps(
                [PolyMatrixSpace(W3, W1, nv)],
                lambda z: _d(q, -1) @ z,
                PolyMatrixSpace(W3, W0, nv),
                lhs,
            )
            if sol is None:
                raise NotACocycle("chi o d^-3 does not factor through d")
    return True


def extract_two_extension(q, chi=None, xi=None):
    """2-extension ``0 -> E -> F -> W0 -> E -> 0`` with its form ``mu``."""
    W = q.resolution
    nv = _nv(q)
    W0, W1, W2 = W.term(0), W.term(-1), W.term(-2)
    if chi is None:
        chi = _zero(W2, W0, nv)
    if xi is None:
        xi = _zero(W1, W0.dual(), nv)
    check_two_cocycle(q, chi, xi)
    d1 = _d(q, -1) if W1.rank else _zero(W1, W0, nv)
    d2 = _d(q, -2) if W2.rank else _zero(W2, W1, nv)
    gens = W0 + W1
    rel_src = W1 + W2
    rel = block_map([[d1, chi], [None, d2]], [W1, W2], [W0, W1], nv)
    pres = TwistedComplex(nv, {-1: rel_src, 0: gens}, {-1: rel})
    i = block_map([[PolyMatrix.identity(W0, nv)], [None]], [W0], [W0, W1], nv)
    f = block_map([[None, d1]], [W0, W1], [W0], nv)
    j = PolyMatrix.identity(W0, nv)
    mu = block_map([[q.pairing, -xi]], [W0, W1], [W0.dual()], nv)
    data = TwoExtensionData(q, chi, xi, pres, W0, i, f, j, mu)
    verify_two_extension(data)
    return data


def verify_two_extension(data):
    q = data.quad
    nv = _nv(q)
    W0 = q.resolution.term(0)
    rel, i, f, j, mu = data.relations, data.i, data.f, data.j, data.mu
    logbook = []
    if rel.source.rank:
        _require((mu @ rel).is_zero(), "mu vanishes on the relations of F", logbook)
        _require((f @ rel).is_zero(), "f vanishes on the relations of F", logbook)
    _require(mu @ i == j.transpose() @ q.pairing, "mu o (1_G (x) i) = phi o (j (x) 1_E)", logbook)
    n = f.transpose() @ mu
    _require(n.is_symmetric(q.sign), "mu o (f (x) 1_F) = sign * mu o (f (x) 1_F) o theta_F", logbook)
    _require((f @ i).is_zero(), "f o i = 0", logbook)
    d1 = _d(q, -1) if q.resolution.term(-1).rank else None
    for k in _degree_range(data.presentation.term(0), data.presentation.term(-1)):
        dim_e = _cokernel_dim(d1, k) if d1 is not None else _graded_dim(W0, nv, k)
        dim_f = _cokernel_dim(rel, k) if rel.source.rank else _graded_dim(rel.target, nv, k)
        rank_f = rank(_graded(f, k)) if _graded_dim(f.source, nv, k) and _graded_dim(W0, nv, k) else 0
        inj = _injective_on_cokernel(rel, i, k, dim_e) if rel.source.rank else True
        if not (inj and dim_f - rank_f == dim_e):
            raise DescentObstruction(f"0 -> E -> F -> G -> E -> 0 is not exact in degree {k}")
    logbook.append("ok: 0 -> E -> F -> G -> E -> 0 exact on graded pieces")
    data.log = logbook
    return logbook


def shifted_mu(data, psi):
    """``mu + psi o (1_G (x) f)`` for ``psi: G -> G^dual``."""
    return data.mu + psi @ data.f


def mu_vanishes_on_kernel_summand(data):
    """Whether ``mu`` is zero on the ``W-1`` generators, the shape of the
    split 2-extension ``F = E (+) ker j``."""
    r0 = data.quad.resolution.term(0).rank
    return all(p.is_zero() for row in data.mu.entries for p in row[r0:])


# global representatives


class GlobalSections:
    """Global sections of a twisted complex as a complex of vector spaces."""

    def __init__(self, c):
        self.c = c
        self.nv = c.num_vars
        self._spaces = {}

    def space(self, t):
        sp = self._spaces.get(t)
        if sp is None:
            sp = PolyMatrixSpace(FreeSheaf((0,)), self.c.term(t), self.nv)
            self._spaces[t] = sp
        return sp

    def differential(self, t):
        d = self.c.d(t)
        return self.space(t).linear_map(lambda m: d @ m, self.space(t + 1))

    def cocycles(self, t):
        """Basis of degree-``t`` cocycles as PolyMatrix columns ``O -> C^t``."""
        sp = self.space(t)
        if not sp.dim:
            return []
        D = self.differential(t)
        K = kernel_basis(D) if D.nrows else RatMatrix.identity(sp.dim)
        return [sp.from_vector(col) for col in K.columns()]


def _embed(total, t, section):
    """Cech cochain of total degree ``t``: ``section`` on every chart."""
    c = total.c
    _, offs, dim = total.layout(t)
    row = {}
    for a, entry in enumerate(section.entries):
        p = entry[0]
        if p.is_zero():
            continue
        tw = c.term(t).twists[a]
        for k in range(total.nv):
            index = _basis_index(total.space((k,), tw))
            off = offs[((k,), t, a)]
            for e, v in p.terms.items():
                row[off + index[e]] = v
    return row, dim


def global_class_basis(complex_, t, total):
    """Global degree-``t`` cocycles independent in hypercohomology, greedy in
    kernel-basis order."""
    gs = GlobalSections(complex_)
    cands = gs.cocycles(t)
    if not cands:
        return []
    D = total.differential(t - 1) if total.dim(t - 1) else RatMatrix(total.dim(t), 0)
    coboundaries = D.transpose()
    rows = [dict(r) for r in coboundaries.rows]
    nb = len(rows)
    for s in cands:
        row, dim = _embed(total, t, s)
        rows.append(row)
    stacked = RatMatrix(len(rows), total.dim(t), rows)
    chosen = independent_rows(stacked)
    return [cands[i - nb] for i in chosen if i >= nb]


def _tensor_block(c, d, k, i, j):
    for a, b, off in tensor_layout(c, d).get(k, []):
        if (a, b) == (i, j):
            return off
    return None


def cocycle1_from_section(dc, section):
    """``(eta, psi)`` from a global degree-1 cocycle of the deformation complex.

    The degree-1 term is ``(DW (x) W)^1 (+) part^0``; ``eta`` is read off the
    block ``W-1^dual (x) W0`` and ``psi`` is the sign times the included
    ``part^0`` component.
    """
    q = dc.quad
    W = q.resolution
    nv = _nv(q)
    W0, W1 = W.term(0), W.term(-1)
    r0, r1 = W0.rank, W1.rank
    col = [row[0] for row in section.entries]
    rs = dc.source.term(1).rank
    eta = _zero(W1, W0, nv)
    off = _tensor_block(dc.dual_resolution, W, 1, 1, 0)
    if off is not None:
        for a in range(r1):
            for b in range(r0):
                eta.entries[b][a] = col[off + a * r0 + b]
    part = col[rs:]
    incl = dc.inclusion.component(0)
    psi = _zero(W0, W0.dual(), nv)
    if part:
        vec = PolyMatrix(FreeSheaf((0,)), dc.target.term(0), [[p] for p in part], nv, check=False)
        full = incl @ vec
        for a in range(r0):
            for b in range(r0):
                psi.entries[a][b] = full.entries[a * r0 + b][0].scale(q.sign)
    return Cocycle1(eta, psi)


def two_cocycle_from_section(dc, section):
    """``(chi, xi)`` from a global degree-2 cocycle: ``chi`` from the block
    ``W-2^dual (x) W0`` and ``xi`` from the ``W0^dual (x) W-1^dual`` block
    of the included ``part^1`` component, times minus the sign."""
    q = dc.quad
    W = q.resolution
    nv = _nv(q)
    W0, W1, W2 = W.term(0), W.term(-1), W.term(-2)
    r0, r1, r2 = W0.rank, W1.rank, W2.rank
    col = [row[0] for row in section.entries]
    rs = dc.source.term(2).rank
    chi = _zero(W2, W0, nv)
    off = _tensor_block(dc.dual_resolution, W, 2, 2, 0)
    if off is not None:
        for a in range(r2):
            for b in range(r0):
                chi.entries[b][a] = col[off + a * r0 + b]
    part = col[rs:]
    xi = _zero(W1, W0.dual(), nv)
    DW = dc.dual_resolution
    off = _tensor_block(DW, DW, 1, 0, 1)
    if part and off is not None:
        vec = PolyMatrix(FreeSheaf((0,)), dc.target.term(1), [[p] for p in part], nv, check=False)
        full = dc.inclusion.component(1) @ vec
        for c_ in range(r0):
            for a in range(r1):
                xi.entries[c_][a] = full.entries[off + c_ * r1 + a][0].scale(-q.sign)
    return chi, xi


@dataclass
class ClassBasis:
    degree: int
    h: int
    sections: list
    window: int

    @property
    def representable(self):
        return len(self.sections) == self.h


def class_basis(dc, degree, window=None):
    """Globally represented basis of hypercohomology in ``degree``."""
    total = cech.stable_total(dc.complex, window)
    h = total.cohomology(degree)
    secs = global_class_basis(dc.complex, degree, total) if h else []
    if len(secs) > h:
        raise DescentObstruction(f"{len(secs)} independent classes exceed h{degree} = {h}")
    return ClassBasis(degree, h, secs, total.window)


def pick_class(basis, index):
    if not 0 <= index < basis.h:
        raise IndexOutOfRange(f"class index {index} outside [0, {basis.h})")
    if index >= len(basis.sections):
        raise NotGloballyRepresentable(
            f"only {len(basis.sections)} of {basis.h} classes in degree {basis.degree} "
            "have global representatives in this resolution"
        )
    return basis.sections[index]
