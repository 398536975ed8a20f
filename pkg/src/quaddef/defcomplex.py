"""Deformation complexes of orthogonal and symplectic sheaves.

A :class:`QuadraticSheaf` is a resolution ``W`` (degrees <= 0) of
``E = coker(d^{-1})`` together with a bilinear form on ``W0`` that descends
to ``E (x) E``, and a sign: ``+1`` for orthogonal, ``-1`` for symplectic.
The form is stored as its adjoint, a map ``W0 -> W0^dual`` whose entry
``(a, b)`` is the value on the pair of basis vectors ``(a, b)``.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import cech
from .errors import Degenerate, FiberRankDrop, QuadDefError, SymmetryFailure
from .exactla import RatMatrix, independent_rows, kernel_basis, rank
from .freecomplex import (
    add_maps,
    braiding,
    check_descent,
    compose,
    dual,
    identity_map,
    lift_pairing,
    pm_part,
    scale_map,
    shift,
    cone,
    tensor_maps,
    validate_complex,
)
from .linsys import PolyMatrixSpace

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def sign_value(sign):
    if sign in (1, "+", "+1"):
        return 1
    if sign in (-1, "-", "-1", "−"):
        return -1
    raise ValueError(f"sign must be + or -, got {sign!r}")


def sign_symbol(sign):
    return "+" if sign_value(sign) == 1 else "-"


@dataclass
class QuadraticSheaf:
    n: int
    resolution: object
    pairing: object
    sign: int
    name: str = ""

    def __post_init__(self):
        self.sign = sign_value(self.sign)

    @property
    def num_vars(self):
        return self.n + 1

    @property
    def W0(self):
        return self.resolution.term(0)

    @property
    def generic_rank(self):
        r = self.resolution
        return sum((-1) ** (-i % 2) * r.term(i).rank for i in r.degrees())


def check_symmetry(q):
    """The stored form is exactly (anti)symmetric and descends to ``E``."""
    validate_complex(q.resolution)
    P = q.pairing
    P.check_degrees()
    r = P.source.rank
    for a in range(r):
        for b in range(a, r):
            if P.entries[a][b] != P.entries[b][a].scale(q.sign):
                kind = "symmetric" if q.sign == 1 else "antisymmetric"
                raise SymmetryFailure(
                    f"pairing is not {kind}: entry ({a},{b}) = {P.entries[a][b]} "
                    f"but entry ({b},{a}) = {P.entries[b][a]}"
                )
    check_descent(q.resolution, P)
    return True


def _chart_point(rng, num_vars):
    return [Fraction(1)] + [
        Fraction(rng.randint(-97, 97), rng.randint(1, 7)) for _ in range(num_vars - 1)
    ]


def fiber_rank_at(q, point):
    """``(fiber dimension of E, rank of the induced form)`` at ``point``."""
    W = q.resolution
    r0 = W.term(0).rank
    rho = rank(W.d(-1).evaluate(point)) if W.term(-1).rank else 0
    return r0 - rho, rank(q.pairing.evaluate(point))


def check_nondegenerate(q, attempts=8, seed=0):
    """Nondegeneracy of the form on the fiber of ``E`` at a random point of
    the chart ``x0 = 1``.

    Points where the fiber dimension jumps lie outside the locally free locus
    and are skipped. Since the form kills the image of ``d^{-1}``, its rank at
    a point equals the rank of the induced form on the fiber. Returns the
    witness point.
    """
    rng = random.Random(seed)
    expected = q.generic_rank
    drops = 0
    for _ in range(attempts):
        p = _chart_point(rng, q.num_vars)
        fiber, form_rank = fiber_rank_at(q, p)
        if fiber != expected:
            drops += 1
            log.debug("fiber rank drop at %s", p)
            continue
        if form_rank == expected:
            return p
    if drops == attempts:
        raise FiberRankDrop(f"fiber dimension differs from {expected} at all {attempts} points")
    raise Degenerate(f"induced form is degenerate at {attempts} random points")


def validate(q):
    check_symmetry(q)
    return check_nondegenerate(q)


@dataclass
class DeformationComplex:
    quad: QuadraticSheaf
    dual_resolution: object
    lift: object  # chain map W -> DW
    source: object  # DW (x) W
    target: object  # (DW (x) DW)^{sign}
    projection: object
    inclusion: object
    delta: object
    complex: object  # cone(delta)[-1]


def build_deformation_complex(q):
    """Assemble ``delta = projection o (1 + sign*theta) o (1 (x) lift)`` and
    ``cone(delta)[-1]``."""
    check_symmetry(q)
    W = q.resolution
    DW = dual(W)
    lift = lift_pairing(W, q.pairing)
    one_tensor_lift = tensor_maps(identity_map(DW), lift)
    theta = braiding(DW)
    sym = add_maps(identity_map(theta.source), scale_map(theta, q.sign))
    part, proj, incl = pm_part(DW, q.sign)
    delta = compose(proj, compose(sym, one_tensor_lift))
    cx = shift(cone(delta), -1)
    validate_complex(cx)
    return DeformationComplex(
        quad=q,
        dual_resolution=DW,
        lift=lift,
        source=one_tensor_lift.source,
        target=part,
        projection=proj,
        inclusion=incl,
        delta=delta,
        complex=cx,
    )


def infinitesimal_symmetries(q):
    """Basis of the endomorphisms ``lambda`` of ``E`` with
    ``phi(lambda x, y) + phi(x, lambda y) = 0``, computed on lifts to ``W0``.

    Unknowns are ``lambda: W0 -> W0`` and ``kappa: W-1 -> W-1`` with
    ``lambda d = d kappa`` (so ``lambda`` descends) and
    ``P lambda + lambda^T P = 0``; the answer is taken modulo the maps
    ``d nu`` that vanish on ``E``.
    """
    W = q.resolution
    nv = q.num_vars
    W0, W1 = W.term(0), W.term(-1)
    P = q.pairing
    d = W.d(-1)
    L = PolyMatrixSpace(W0, W0, nv)
    K = PolyMatrixSpace(W1, W1, nv)
    pair_space = PolyMatrixSpace(W0, W0.dual(), nv)
    blocks = [[L.linear_map(lambda m: P @ m + m.transpose() @ P, pair_space), None]]
    sizes_r = [pair_space.dim]
    if W1.rank:
        desc_space = PolyMatrixSpace(W1, W0, nv)
        blocks.append(
            [
                L.linear_map(lambda m: m @ d, desc_space),
                K.linear_map(lambda m: -(d @ m), desc_space),
            ]
        )
        sizes_r.append(desc_space.dim)
    A = RatMatrix.block(blocks, sizes_r, [L.dim, K.dim])
    ker = kernel_basis(A)
    lam_part = ker.select_rows(list(range(L.dim)))  # columns = solutions
    sols = lam_part.transpose()  # rows = solutions in lambda coordinates
    if W1.rank:
        N = PolyMatrixSpace(W0, W1, nv)
        trivial = N.linear_map(lambda m: d @ m, L).transpose()
    else:
        trivial = RatMatrix(0, L.dim)
    stacked = RatMatrix.vstack([trivial, sols], ncols=L.dim)
    chosen = independent_rows(stacked)
    base = rank(trivial) if trivial.nrows else 0
    picked = [i - trivial.nrows for i in chosen if i >= trivial.nrows]
    basis = [L.from_vector(sols.select_rows([i]).to_dense()[0]) for i in picked]
    assert len(chosen) - len(picked) == base
    return basis


@dataclass
class DeformationReport:
    name: str
    n: int
    sign: str
    h0: int
    h1: int
    h2: int
    dims: dict
    window: int
    stable: bool
    euler: int
    euler_expected: int
    euler_identity: bool
    les: object
    cross_check: dict
    witness_point: list = field(default_factory=list)
    term_ranks: dict = field(default_factory=dict)

    @property
    def formally_smooth_hint(self):
        return self.h2 == 0

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "ambient_dim": self.n,
            "sign": self.sign,
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "hypercohomology": {str(k): v for k, v in sorted(self.dims.items())},
            "window": self.window,
            "stable": self.stable,
            "euler": self.euler,
            "euler_expected": self.euler_expected,
            "euler_identity": self.euler_identity,
            "formally_smooth_hint": self.formally_smooth_hint,
            "les": self.les.to_dict(),
            "cross_check": self.cross_check,
            "witness_point": [str(x) for x in self.witness_point],
            "term_ranks": {str(k): v for k, v in sorted(self.term_ranks.items())},
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        return cls(
            name=d["name"],
            n=d["ambient_dim"],
            sign=d["sign"],
            h0=d["h0"],
            h1=d["h1"],
            h2=d["h2"],
            dims={int(k): v for k, v in d["hypercohomology"].items()},
            window=d["window"],
            stable=d["stable"],
            euler=d["euler"],
            euler_expected=d["euler_expected"],
            euler_identity=d["euler_identity"],
            les=cech.LESReport.from_dict(d["les"]),
            cross_check=d["cross_check"],
            witness_point=[Fraction(x) for x in d["witness_point"]],
            term_ranks={int(k): v for k, v in d["term_ranks"].items()},
        )

    def __eq__(self, other):
        if not isinstance(other, DeformationReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def deformation_report(q, window=None, with_les=True):
    """Dimensions of the deformation complex in degrees 0, 1, 2 with the
    long exact sequence of its triangle and the resolution-model check of
    the degree-0 part."""
    witness = validate(q)
    dc = build_deformation_complex(q)
    TC = cech.stable_total(dc.complex, window)
    W = TC.window
    dims = TC.dims()
    euler = sum((-1) ** (t % 2) * h for t, h in dims.items())
    expected = cech.euler_of_terms(dc.complex)
    if euler != expected:
        raise QuadDefError(f"Euler characteristic {euler} != {expected} at window {W}")
    identity = expected == cech.euler_of_terms(dc.source) - cech.euler_of_terms(dc.target)
    if with_les:
        totals = (cech.CechTotal(dc.source, W), cech.CechTotal(dc.target, W), TC)
        les = cech.les_check(dc.delta, W, totals=totals)
    else:
        les = cech.LESReport(exact=True, table=[], failures=["not computed"])
    sym = infinitesimal_symmetries(q)
    h0 = dims.get(0, 0)
    return DeformationReport(
        name=q.name,
        n=q.n,
        sign=sign_symbol(q.sign),
        h0=h0,
        h1=dims.get(1, 0),
        h2=dims.get(2, 0),
        dims=dims,
        window=W,
        stable=True,
        euler=euler,
        euler_expected=expected,
        euler_identity=identity,
        les=les,
        cross_check={"infinitesimal_symmetries": len(sym), "agrees": len(sym) == h0},
        witness_point=witness,
        term_ranks=dc.complex.ranks(),
    )
