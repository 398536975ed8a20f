"""Bounded complexes of twisted free sheaves on P^n.

A map ``O(s_j) -> O(t_i)`` is a homogeneous polynomial of degree
``t_i - s_j``; a :class:`PolyMatrix` stores one such entry per pair with rows
indexed by the target summands. Complexes are cohomological: ``d^i`` maps the
term in degree ``i`` to the term in degree ``i + 1``.

Sign conventions, fixed globally:

* tensor differential on the block ``c^i (x) d^j``: ``d_c (x) 1 + (-1)^i 1 (x) d_d``;
* dual: ``(Dc)^i = (c^{-i})^dual`` with differential ``transpose(d^{-i-1})``,
  so that ``dual(dual(c)) == c`` on the nose;
* braiding ``theta(a (x) b) = (-1)^{ij} b (x) a`` on ``c^i (x) c^j``;
* cone: ``cone(f)^k = source^{k+1} + target^k`` with differential
  ``[[-d_source, 0], [f, d_target]]``;
* shift: ``shift(c, k)^i = c^{i+k}`` with differential ``(-1)^k d``.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegreeMismatch,
    DescentFailure,
    NoLift,
    NotAChainMap,
    NotAComplex,
    ShapeMismatch,
)
from .exactla import RatMatrix, solve
from .polyring import Poly


@dataclass(frozen=True)
class FreeSheaf:
    """Direct sum of line bundles ``O(d)`` for ``d`` in ``twists``."""

    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(t) for t in self.twists))

    @property
    def rank(self):
        return len(self.twists)

    def __len__(self):
        return len(self.twists)

    def dual(self):
        return FreeSheaf(tuple(-t for t in self.twists))

    def __add__(self, other):
        return FreeSheaf(self.twists + other.twists)

    def tensor(self, other):
        return FreeSheaf(tuple(a + b for a in self.twists for b in other.twists))

    def twist(self, k):
        return FreeSheaf(tuple(t + k for t in self.twists))


ZERO_SHEAF = FreeSheaf(())


class PolyMatrix:
    """Sheaf map between twisted free sheaves."""

    __slots__ = ("source", "target", "num_vars", "entries")

    def __init__(self, source, target, entries, num_vars, check=True):
        self.source = source
        self.target = target
        self.num_vars = num_vars
        if len(entries) != target.rank or any(len(r) != source.rank for r in entries):
            raise ShapeMismatch(
                f"entry grid does not match {target.rank}x{source.rank}"
            )
        self.entries = [list(r) for r in entries]
        if check:
            self.check_degrees()

    # constructors

    @classmethod
    def zero(cls, source, target, num_vars):
        z = Poly(num_vars)
        return cls(
            source, target, [[z] * source.rank for _ in range(target.rank)], num_vars, check=False
        )

    @classmethod
    def identity(cls, sheaf, num_vars):
        m = cls.zero(sheaf, sheaf, num_vars)
        one = Poly.const(num_vars, 1)
        for i in range(sheaf.rank):
            m.entries[i][i] = one
        return m

    @classmethod
    def from_constant(cls, source, target, mat, num_vars):
        """Constant matrix (``RatMatrix`` or nested lists) between sheaves whose
        nonzero entries sit between equal twists."""
        if isinstance(mat, RatMatrix):
            mat = mat.to_dense()
        entries = [
            [Poly.const(num_vars, v) if v else Poly(num_vars) for v in row] for row in mat
        ]
        return cls(source, target, entries, num_vars)

    # properties

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def required_degree(self, i, j):
        return self.target.twists[i] - self.source.twists[j]

    def check_degrees(self):
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if p.is_zero():
                    continue
                if p.num_vars != self.num_vars:
                    raise DegreeMismatch(f"entry ({i},{j}) lives in the wrong ring")
                want = self.required_degree(i, j)
                if not p.is_homogeneous(want):
                    raise DegreeMismatch(
                        f"entry ({i},{j}) = {p} is not homogeneous of degree {want} "
                        f"(O({self.source.twists[j]}) -> O({self.target.twists[i]}))"
                    )

    def is_zero(self):
        return all(p.is_zero() for row in self.entries for p in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __repr__(self):
        rows = "; ".join(", ".join(str(p) for p in r) for r in self.entries)
        return f"PolyMatrix({self.source.twists}->{self.target.twists}: [{rows}])"

    # algebra

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("cannot add maps with different source/target")
        return PolyMatrix(
            self.source,
            self.target,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.num_vars,
            check=False,
        )

    def __neg__(self):
        return PolyMatrix(
            self.source, self.target, [[-p for p in r] for r in self.entries], self.num_vars, False
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PolyMatrix(
            self.source,
            self.target,
            [[p.scale(c) for p in r] for r in self.entries],
            self.num_vars,
            check=False,
        )

    def __matmul__(self, other):
        """Composition ``self o other`` (``other`` applied first)."""
        if other.target != self.source:
            raise ShapeMismatch(
                f"cannot compose: {other.target.twists} is not {self.source.twists}"
            )
        n = self.num_vars
        out = []
        for i in range(self.target.rank):
            row = self.entries[i]
            nz = [(k, p) for k, p in enumerate(row) if not p.is_zero()]
            orow = []
            for j in range(other.source.rank):
                acc = Poly(n)
                for k, p in nz:
                    q = other.entries[k][j]
                    if not q.is_zero():
                        acc = acc + p * q
                orow.append(acc)
            out.append(orow)
        return PolyMatrix(other.source, self.target, out, n, check=False)

    def transpose(self):
        """The dual map ``target^dual -> source^dual``."""
        return PolyMatrix(
            self.target.dual(),
            self.source.dual(),
            [[self.entries[i][j] for i in range(self.target.rank)] for j in range(self.source.rank)],
            self.num_vars,
            check=False,
        )

    def kron(self, other):
        """Tensor product of maps; basis ``(a, b)`` sits at ``a*rank + b``."""
        n = self.num_vars
        src = self.source.tensor(other.source)
        tgt = self.target.tensor(other.target)
        rs, ro = self.target.rank, other.target.rank
        cs, co = self.source.rank, other.source.rank
        z = Poly(n)
        out = [[z] * (cs * co) for _ in range(rs * ro)]
        for a in range(rs):
            for a2 in range(cs):
                p = self.entries[a][a2]
                if p.is_zero():
                    continue
                for b in range(ro):
                    for b2 in range(co):
                        q = other.entries[b][b2]
                        if not q.is_zero():
                            out[a * ro + b][a2 * co + b2] = p * q
        return PolyMatrix(src, tgt, out, n, check=False)

    def evaluate(self, point):
        return RatMatrix.from_dense(
            [[p.evaluate(point) for p in r] for r in self.entries], ncols=self.source.rank
        )

    def is_symmetric(self, sign=1):
        if self.source.rank != self.target.rank:
            return False
        r = self.source.rank
        for i in range(r):
            for j in range(r):
                if self.entries[i][j] != self.entries[j][i].scale(sign):
                    return False
        return True


def block_map(blocks, sources, targets, num_vars):
    """Assemble a PolyMatrix from a grid of blocks (``None`` = zero).
    ``blocks[r][c]`` maps ``sources[c]`` to ``targets[r]``."""
    src = FreeSheaf(tuple(t for s in sources for t in s.twists))
    tgt = FreeSheaf(tuple(t for s in targets for t in s.twists))
    out = PolyMatrix.zero(src, tgt, num_vars)
    roff = 0
    for r, tsh in enumerate(targets):
        coff = 0
        for c, ssh in enumerate(sources):
            b = blocks[r][c]
            if b is not None:
                if b.source != ssh or b.target != tsh:
                    raise ShapeMismatch(f"block ({r},{c}) has the wrong source/target")
                for i in range(tsh.rank):
                    for j in range(ssh.rank):
                        out.entries[roff + i][coff + j] = b.entries[i][j]
            coff += ssh.rank
        roff += tsh.rank
    return out


class TwistedComplex:
    """Bounded cochain complex of twisted free sheaves."""

    def __init__(self, num_vars, terms, differentials=None):
        self.num_vars = num_vars
        self.terms = {int(i): t for i, t in terms.items() if t.rank > 0}
        self.diffs = {}
        for i, d in (differentials or {}).items():
            i = int(i)
            if self.term(i).rank and self.term(i + 1).rank:
                if d.source != self.term(i) or d.target != self.term(i + 1):
                    raise ShapeMismatch(f"differential {i} does not match terms {i}, {i + 1}")
                self.diffs[i] = d
            elif not d.is_zero():
                raise ShapeMismatch(f"differential {i} maps from or to a zero term")

    @property
    def n(self):
        """Dimension of the ambient projective space."""
        return self.num_vars - 1

    def term(self, i):
        return self.terms.get(i, ZERO_SHEAF)

    def d(self, i):
        m = self.diffs.get(i)
        if m is None:
            m = PolyMatrix.zero(self.term(i), self.term(i + 1), self.num_vars)
        return m

    def degrees(self):
        return sorted(self.terms)

    @property
    def lo(self):
        return min(self.terms) if self.terms else 0

    @property
    def hi(self):
        return max(self.terms) if self.terms else -1

    def max_abs_twist(self):
        return max((abs(t) for s in self.terms.values() for t in s.twists), default=0)

    def ranks(self):
        return {i: self.terms[i].rank for i in self.degrees()}

    def __eq__(self, other):
        if not isinstance(other, TwistedComplex):
            return NotImplemented
        if self.num_vars != other.num_vars or self.terms != other.terms:
            return False
        return all(self.d(i) == other.d(i) for i in self.degrees())

    def __repr__(self):
        parts = ", ".join(f"{i}: {self.terms[i].twists}" for i in self.degrees())
        return f"TwistedComplex(P^{self.n}; {parts})"


class ChainMap:
    """Degree-preserving map of complexes given by components per degree."""

    def __init__(self, source, target, components=None):
        self.source = source
        self.target = target
        self.components = {}
        for i, f in (components or {}).items():
            i = int(i)
            if source.term(i).rank and target.term(i).rank:
                if f.source != source.term(i) or f.target != target.term(i):
                    raise ShapeMismatch(f"component {i} does not match the terms")
                self.components[i] = f

    def component(self, i):
        f = self.components.get(i)
        if f is None:
            f = PolyMatrix.zero(self.source.term(i), self.target.term(i), self.source.num_vars)
        return f

    def degrees(self):
        return sorted(set(self.source.degrees()) | set(self.target.degrees()))

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.component(i) == other.component(i) for i in self.degrees())


# complexes and maps built from data


def single_term(num_vars, sheaf, degree=0):
    return TwistedComplex(num_vars, {degree: sheaf})


def identity_map(c):
    return ChainMap(c, c, {i: PolyMatrix.identity(c.term(i), c.num_vars) for i in c.degrees()})


def zero_map(c, d):
    return ChainMap(c, d, {})


def validate_complex(c):
    """Check degree homogeneity of every entry and ``d^{i+1} d^i = 0``.

    Raises DegreeMismatch or NotAComplex naming the degree and entry.
    Returns True otherwise.
    """
    for i, d in sorted(c.diffs.items()):
        try:
            d.check_degrees()
        except DegreeMismatch as exc:
            raise DegreeMismatch(f"differential {i}: {exc}") from None
    for i in c.degrees():
        if i in c.diffs and i + 1 in c.diffs:
            comp = c.d(i + 1) @ c.d(i)
            for a, row in enumerate(comp.entries):
                for b, p in enumerate(row):
                    if not p.is_zero():
                        raise NotAComplex(
                            f"d^{i + 1} o d^{i} has nonzero entry ({a},{b}) = {p}"
                        )
    return True


def is_chain_map(f):
    """Whether ``d_target f^i == f^{i+1} d_source`` for every ``i``."""
    try:
        check_chain_map(f)
    except NotAChainMap:
        return False
    return True


def check_chain_map(f):
    s, t = f.source, f.target
    for i in sorted(set(s.degrees()) | set(t.degrees()) | {i - 1 for i in t.degrees()}):
        lhs = t.d(i) @ f.component(i)
        rhs = f.component(i + 1) @ s.d(i)
        if lhs != rhs:
            diff = lhs - rhs
            for a, row in enumerate(diff.entries):
                for b, p in enumerate(row):
                    if not p.is_zero():
                        raise NotAChainMap(
                            f"square at degree {i} fails at entry ({a},{b}): {p}"
                        )
    return True


def compose(f, g):
    """``f o g`` (``g`` first)."""
    if g.target.terms != f.source.terms:
        raise ShapeMismatch("chain maps are not composable")
    comps = {}
    for i in g.source.degrees():
        if f.target.term(i).rank:
            comps[i] = f.component(i) @ g.component(i)
    return ChainMap(g.source, f.target, comps)


def add_maps(f, g):
    return ChainMap(
        f.source, f.target, {i: f.component(i) + g.component(i) for i in f.degrees()}
    )


def scale_map(f, c):
    return ChainMap(f.source, f.target, {i: f.component(i).scale(c) for i in f.degrees()})


def direct_sum(c, d):
    terms = {}
    diffs = {}
    nv = c.num_vars
    for i in sorted(set(c.degrees()) | set(d.degrees())):
        terms[i] = c.term(i) + d.term(i)
    for i in terms:
        if terms.get(i + 1):
            diffs[i] = block_map(
                [[c.d(i), None], [None, d.d(i)]],
                [c.term(i), d.term(i)],
                [c.term(i + 1), d.term(i + 1)],
                nv,
            )
    return TwistedComplex(nv, terms, diffs)


# dual, shift, tensor


def dual(c):
    """Derived dual of a complex of free sheaves."""
    terms = {-i: t.dual() for i, t in c.terms.items()}
    diffs = {}
    for i in terms:
        if -i - 1 in c.terms:
            diffs[i] = c.d(-i - 1).transpose()
    return TwistedComplex(c.num_vars, terms, diffs)


def shift(c, k):
    sign = -1 if k % 2 else 1
    terms = {i - k: t for i, t in c.terms.items()}
    diffs = {i - k: (d if sign == 1 else -d) for i, d in c.diffs.items()}
    return TwistedComplex(c.num_vars, terms, diffs)


def tensor_layout(c, d):
    """For each total degree ``k``: list of ``(i, j, offset)`` blocks of
    ``c^i (x) d^j`` with ``i`` ascending."""
    layout = {}
    for i in c.degrees():
        for j in d.degrees():
            layout.setdefault(i + j, []).append((i, j))
    out = {}
    for k, blocks in layout.items():
        off = 0
        rows = []
        for i, j in sorted(blocks):
            rows.append((i, j, off))
            off += c.term(i).rank * d.term(j).rank
        out[k] = rows
    return out


def _block_offsets(layout, k):
    return {(i, j): off for i, j, off in layout.get(k, [])}


def tensor(c, d):
    """Tensor product complex with the Koszul sign rule."""
    nv = c.num_vars
    layout = tensor_layout(c, d)
    terms = {}
    for k, blocks in layout.items():
        tw = ()
        for i, j, _ in blocks:
            tw += c.term(i).tensor(d.term(j)).twists
        terms[k] = FreeSheaf(tw)
    diffs = {}
    for k, blocks in layout.items():
        if k + 1 not in terms:
            continue
        out = PolyMatrix.zero(terms[k], terms[k + 1], nv)
        toff = _block_offsets(layout, k + 1)
        for i, j, off in blocks:
            parts = []
            if (i + 1, j) in toff and c.term(i + 1).rank:
                parts.append((toff[(i + 1, j)], c.d(i).kron(PolyMatrix.identity(d.term(j), nv))))
            if (i, j + 1) in toff and d.term(j + 1).rank:
                m = PolyMatrix.identity(c.term(i), nv).kron(d.d(j))
                if i % 2:
                    m = -m
                parts.append((toff[(i, j + 1)], m))
            for roff, m in parts:
                for a, row in enumerate(m.entries):
                    for b, p in enumerate(row):
                        if not p.is_zero():
                            out.entries[roff + a][off + b] = out.entries[roff + a][off + b] + p
        diffs[k] = out
    return TwistedComplex(nv, terms, diffs)


def tensor_maps(f, g):
    """``f (x) g`` for degree-preserving chain maps (no signs arise)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    nv = src.num_vars
    slay = tensor_layout(f.source, g.source)
    tlay = tensor_layout(f.target, g.target)
    comps = {}
    for k, blocks in slay.items():
        if not tgt.term(k).rank:
            continue
        out = PolyMatrix.zero(src.term(k), tgt.term(k), nv)
        toff = _block_offsets(tlay, k)
        for i, j, off in blocks:
            if (i, j) not in toff:
                continue
            m = f.component(i).kron(g.component(j))
            roff = toff[(i, j)]
            for a, row in enumerate(m.entries):
                for b, p in enumerate(row):
                    if not p.is_zero():
                        out.entries[roff + a][off + b] = p
        comps[k] = out
    return ChainMap(src, tgt, comps)


def _braid_table(c):
    """Per total degree, the signed permutation of the braiding on ``c (x) c``:
    a list mapping basis index ``x`` to ``(y, sign)``."""
    layout = tensor_layout(c, c)
    table = {}
    for k, blocks in layout.items():
        offs = _block_offsets(layout, k)
        perm = []
        for i, j, off in blocks:
            ri, rj = c.term(i).rank, c.term(j).rank
            toff = offs[(j, i)]
            sign = -1 if (i * j) % 2 else 1
            for a in range(ri):
                for b in range(rj):
                    perm.append((toff + b * ri + a, sign))
        table[k] = perm
    return table


def braiding(c):
    """The factor swap on ``c (x) c`` with Koszul signs, as a chain map."""
    cc = tensor(c, c)
    nv = c.num_vars
    comps = {}
    for k, perm in _braid_table(c).items():
        sheaf = cc.term(k)
        m = PolyMatrix.zero(sheaf, sheaf, nv)
        for x, (y, s) in enumerate(perm):
            m.entries[y][x] = Poly.const(nv, s)
        comps[k] = m
    return ChainMap(cc, cc, comps)


def pm_part(c, sign):
    """The ``sign``-eigencomplex of the braiding on ``c (x) c``.

    Returns ``(part, projection, inclusion)`` where ``projection`` restricts
    ``(1 + sign*theta)/2`` to the part and ``inclusion o projection`` is that
    idempotent.
    """
    eps = 1 if sign in (1, "+") else -1
    cc = tensor(c, c)
    nv = c.num_vars
    half = Fraction(1, 2)
    bases = {}
    for k, perm in _braid_table(c).items():
        seen = set()
        vecs = []  # (x, y, coeff_y) with y None for fixed points
        for x, (y, s) in enumerate(perm):
            if x in seen:
                continue
            seen.add(x)
            seen.add(y)
            if y == x:
                if s == eps:
                    vecs.append((x, None, None))
            else:
                vecs.append((x, y, eps * s))
        bases[k] = vecs
    terms = {}
    incl = {}
    proj = {}
    for k, vecs in bases.items():
        full = cc.term(k)
        sheaf = FreeSheaf(tuple(full.twists[x] for x, _, _ in vecs))
        terms[k] = sheaf
        iota = [[Fraction(0)] * len(vecs) for _ in range(full.rank)]
        pi = [[Fraction(0)] * full.rank for _ in range(len(vecs))]
        for v, (x, y, sig) in enumerate(vecs):
            iota[x][v] = Fraction(1)
            if y is None:
                pi[v][x] = Fraction(1)
            else:
                iota[y][v] = Fraction(sig)
                pi[v][x] = half
                pi[v][y] = sig * half
        incl[k] = PolyMatrix.from_constant(sheaf, full, iota, nv)
        proj[k] = PolyMatrix.from_constant(full, sheaf, pi, nv)
    diffs = {}
    for k in terms:
        if k + 1 in terms and terms[k].rank and terms[k + 1].rank:
            diffs[k] = proj[k + 1] @ cc.d(k) @ incl[k]
    part = TwistedComplex(nv, terms, diffs)
    return part, ChainMap(cc, part, proj), ChainMap(part, cc, incl)


def cone(f, check=True):
    """Mapping cone of a chain map."""
    if check:
        check_chain_map(f)
    s, t = f.source, f.target
    nv = s.num_vars
    degs = sorted({i - 1 for i in s.degrees()} | set(t.degrees()))
    terms = {k: s.term(k + 1) + t.term(k) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        diffs[k] = block_map(
            [[-s.d(k + 1), None], [f.component(k + 1), t.d(k)]],
            [s.term(k + 1), t.term(k)],
            [s.term(k + 2), t.term(k + 1)],
            nv,
        )
    return TwistedComplex(nv, terms, diffs)


# pairings


def check_descent(resolution, pairing):
    """``pairing`` (a map ``W0 -> W0^dual``) must kill the image of the first
    differential in both slots."""
    d = resolution.d(-1)
    if not resolution.term(-1).rank:
        return True
    left = d.transpose() @ pairing  # pairing o (d (x) 1)
    right = pairing @ d  # pairing o (1 (x) d)
    for name, m in (("pairing o (d (x) 1)", left), ("pairing o (1 (x) d)", right)):
        for a, row in enumerate(m.entries):
            for b, p in enumerate(row):
                if not p.is_zero():
                    raise DescentFailure(f"{name} has nonzero entry ({a},{b}) = {p}")
    return True


def lift_pairing(resolution, pairing):
    """Chain map ``W -> dual(W)`` whose degree-0 component is the adjoint of
    the pairing on ``W0``.

    Components in other degrees solve the chain-map equations degree by
    degree over monomial coefficients; ``dual(W)`` has no terms in negative
    degrees when ``W`` sits in degrees <= 0, so those solutions are zero.
    """
    from .linsys import PolyMatrixSpace

    check_descent(resolution, pairing)
    W = resolution
    DW = dual(W)
    nv = W.num_vars
    if pairing.source != W.term(0) or pairing.target != DW.term(0):
        raise ShapeMismatch("pairing must map W0 to its dual")
    comps = {0: pairing}
    i = -1
    while W.term(i).rank:
        if DW.term(i).rank:
            # solve d_DW^i phi^i = phi^{i+1} d_W^i
            rhs = comps.get(i + 1, PolyMatrix.zero(W.term(i + 1), DW.term(i + 1), nv)) @ W.d(i)
            space = PolyMatrixSpace(W.term(i), DW.term(i), nv)
            image_space = PolyMatrixSpace(W.term(i), DW.term(i + 1), nv)
            A = space.linear_map(lambda m: DW.d(i) @ m, image_space)
            x = solve(A, image_space.to_vector(rhs))
            if x is None:
                raise NoLift(f"no component of the lift in degree {i}")
            comps[i] = space.from_vector(x)
        i -= 1
    f = ChainMap(W, DW, comps)
    if not is_chain_map(f):
        raise NoLift("constructed lift is not a chain map")
    return f

