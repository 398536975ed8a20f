"""Global polynomial matrices as coordinate vectors.

``PolyMatrixSpace(source, target)`` is the finite-dimensional space of global
maps between twisted free sheaves: one coordinate per (entry, monomial of the
entry's forced degree). Linear operators on such maps become RatMatrix
objects, which is how lifts, splittings and Hom-space conditions are solved.
"""

from fractions import Fraction

from .exactla import RatMatrix, solve
from .freecomplex import PolyMatrix
from .polyring import MonomialSpace, Poly, monomial_basis


class PolyMatrixSpace:
    def __init__(self, source, target, num_vars):
        self.source = source
        self.target = target
        self.num_vars = num_vars
        coords = []
        for i, t in enumerate(target.twists):
            for j, s in enumerate(source.twists):
                for e in monomial_basis(MonomialSpace(num_vars, t - s)):
                    coords.append((i, j, e))
        self.coords = coords
        self.index = {c: k for k, c in enumerate(coords)}

    @property
    def dim(self):
        return len(self.coords)

    def to_vector(self, m):
        v = [Fraction(0)] * self.dim
        for i, row in enumerate(m.entries):
            for j, p in enumerate(row):
                for e, c in p.terms.items():
                    v[self.index[(i, j, e)]] = c
        return v

    def to_sparse(self, m):
        out = {}
        for i, row in enumerate(m.entries):
            for j, p in enumerate(row):
                for e, c in p.terms.items():
                    out[self.index[(i, j, e)]] = c
        return out

    def from_vector(self, v):
        m = PolyMatrix.zero(self.source, self.target, self.num_vars)
        acc = {}
        for k, c in enumerate(v):
            if c:
                i, j, e = self.coords[k]
                acc.setdefault((i, j), {})[e] = c
        for (i, j), terms in acc.items():
            m.entries[i][j] = Poly(self.num_vars, terms)
        return m

    def basis_element(self, k):
        i, j, e = self.coords[k]
        m = PolyMatrix.zero(self.source, self.target, self.num_vars)
        m.entries[i][j] = Poly.monomial(e)
        return m

    def linear_map(self, fn, codomain):
        """RatMatrix of the linear map ``fn`` into ``codomain``."""
        entries = []
        for k in range(self.dim):
            for r, c in codomain.to_sparse(fn(self.basis_element(k))).items():
                entries.append((r, k, c))
        return RatMatrix.from_entries(codomain.dim, self.dim, entries)

    def basis_from_columns(self, mat):
        """PolyMatrix for each column of ``mat``."""
        return [self.from_vector(col) for col in mat.columns()]


def solve_maps(spaces, fn, codomain, rhs):
    """Find maps ``m_k`` in ``spaces[k]`` with ``fn(m_0, m_1, ...) == rhs``.

    ``fn`` must be linear. Returns the list of maps (free coordinates set to
    zero) or ``None`` when the system is inconsistent.
    """
    zeros = [PolyMatrix.zero(sp.source, sp.target, sp.num_vars) for sp in spaces]
    entries = []
    col = 0
    for k, sp in enumerate(spaces):
        for b in range(sp.dim):
            args = list(zeros)
            args[k] = sp.basis_element(b)
            for r, c in codomain.to_sparse(fn(*args)).items():
                entries.append((r, col, c))
            col += 1
    A = RatMatrix.from_entries(codomain.dim, col, entries)
    x = solve(A, codomain.to_vector(rhs))
    if x is None:
        return None
    out = []
    pos = 0
    for sp in spaces:
        out.append(sp.from_vector(x[pos:pos + sp.dim]))
        pos += sp.dim
    return out
