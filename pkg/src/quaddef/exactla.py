"""Exact linear algebra over the rationals.

Matrices are sparse: one ``{column: Fraction}`` dict per row. Ranks go through
the fraction-free integer elimination kernel (compiled when available, pure
Python otherwise); kernels and solutions use sparse rational Gauss-Jordan.
"""

import os
from fractions import Fraction
from math import gcd, lcm

from . import _kernels_py

if os.environ.get("QUADDEF_PURE_PYTHON"):
    _kernels = _kernels_py
else:
    try:
        from . import _kernels
    except ImportError:  # extension not built
        _kernels = _kernels_py

BACKEND = _kernels.BACKEND

__all__ = [
    "RatMatrix",
    "rank",
    "kernel_basis",
    "solve",
    "independent_rows",
    "BACKEND",
]


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Sparse matrix of rationals."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        assert len(rows) == nrows
        self.rows = rows

    # construction

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: _frac(v) for j, v in enumerate(r) if v != 0})
        return cls(len(data), ncols, rows)

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        """Build from ``(i, j, value)`` triples; repeated positions add."""
        rows = [{} for _ in range(nrows)]
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError((i, j))
            r = rows[i]
            s = r.get(j, 0) + v
            if s:
                r[j] = _frac(s)
            else:
                r.pop(j, None)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, columns, nrows):
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    m.rows[i][j] = _frac(v)
        return m

    @classmethod
    def block(cls, blocks, row_sizes, col_sizes):
        """Assemble from a grid of blocks; ``None`` means zero."""
        row_off = [0]
        for s in row_sizes:
            row_off.append(row_off[-1] + s)
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)
        out = cls(row_off[-1], col_off[-1])
        for bi, brow in enumerate(blocks):
            for bj, b in enumerate(brow):
                if b is None:
                    continue
                if b.shape != (row_sizes[bi], col_sizes[bj]):
                    raise ValueError(
                        f"block ({bi},{bj}) has shape {b.shape}, "
                        f"expected {(row_sizes[bi], col_sizes[bj])}"
                    )
                c0 = col_off[bj]
                for i, r in enumerate(b.rows):
                    if r:
                        target = out.rows[row_off[bi] + i]
                        for j, v in r.items():
                            target[c0 + j] = target.get(c0 + j, 0) + v
        for r in out.rows:
            for j in [j for j, v in r.items() if v == 0]:
                del r[j]
        return out

    # access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self.rows[i].get(j, Fraction(0))

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def column(self, j):
        return [r.get(j, Fraction(0)) for r in self.rows]

    def columns(self):
        cols = [[Fraction(0)] * self.nrows for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def is_zero(self):
        return not any(self.rows)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"RatMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # arithmetic

    def transpose(self):
        out = RatMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out.rows[j][i] = v
        return out

    T = property(transpose)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for j, v in b.items():
                s = r.get(j, 0) + v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
            rows.append(r)
        return RatMatrix(self.nrows, self.ncols, rows)

    def __neg__(self):
        return RatMatrix(
            self.nrows, self.ncols, [{j: -v for j, v in r.items()} for r in self.rows]
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _frac(c)
        if c == 0:
            return RatMatrix(self.nrows, self.ncols)
        return RatMatrix(
            self.nrows, self.ncols, [{j: c * v for j, v in r.items()} for r in self.rows]
        )

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = {}
            for k, v in r.items():
                for j, w in orows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            out.append({j: v for j, v in acc.items() if v})
        return RatMatrix(self.nrows, other.ncols, out)

    def mul_vec(self, x):
        if len(x) != self.ncols:
            raise ValueError("length mismatch")
        return [sum((v * x[j] for j, v in r.items()), Fraction(0)) for r in self.rows]

    def select_rows(self, idx):
        return RatMatrix(len(idx), self.ncols, [dict(self.rows[i]) for i in idx])

    def select_columns(self, idx):
        pos = {j: k for k, j in enumerate(idx)}
        rows = []
        for r in self.rows:
            rows.append({pos[j]: v for j, v in r.items() if j in pos})
        return RatMatrix(self.nrows, len(idx), rows)

    @staticmethod
    def vstack(mats, ncols=None):
        if ncols is None:
            ncols = mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != ncols:
                raise ValueError("column mismatch in vstack")
            rows.extend(dict(r) for r in m.rows)
        return RatMatrix(len(rows), ncols, rows)

    @staticmethod
    def hstack(mats, nrows=None):
        if nrows is None:
            nrows = mats[0].nrows
        return RatMatrix.block([mats], [nrows], [m.ncols for m in mats])


# integer rows for the elimination kernel


def _integer_rows(m):
    out = []
    for r in m.rows:
        if not r:
            continue
        cols = sorted(r)
        den = 1
        for v in r.values():
            if v.denominator != 1:
                den = lcm(den, v.denominator)
        vals = [int(r[j] * den) for j in cols]
        g = 0
        for v in vals:
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            vals = [v // g for v in vals]
        out.append((cols, vals))
    # sparse rows first keeps fill-in down on block-sparse input
    out.sort(key=lambda cv: (len(cv[0]), cv[0][0]))
    return out


def _run(fn, rows, ncols):
    try:
        return fn(_kernels, rows, ncols)
    except OverflowError:
        return fn(_kernels_py, rows, ncols)


def rank(m):
    """Rank over the rationals."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.nrows > m.ncols:
        m = m.transpose()
    rows = _integer_rows(m)
    return _run(lambda k, r, n: k.echelon_rank(r, n), rows, m.ncols)


def independent_rows(m):
    """Indices of a maximal linearly independent set of rows, greedy in row
    order (earlier rows preferred)."""
    rows = []
    index = []
    for i, r in enumerate(m.rows):
        if not r:
            continue
        cols = sorted(r)
        den = 1
        for v in r.values():
            den = lcm(den, v.denominator)
        rows.append((cols, [int(r[j] * den) for j in cols]))
        index.append(i)
    chosen = _run(lambda k, r, n: k.echelon_pivots(r, n), rows, m.ncols)
    return [index[k] for k in chosen]


# rational Gauss-Jordan


def _rref(rows, ncols):
    """Reduced row echelon form of sparse Fraction rows.

    Returns ``(pivot_rows, pivot_cols)`` where ``pivot_rows[k]`` has a 1 in
    column ``pivot_cols[k]`` and zeros in every other pivot column.
    """
    piv = {}  # lead column -> row
    for r in rows:
        r = {j: v for j, v in r.items() if v}
        while r:
            lead = min(r)
            p = piv.get(lead)
            if p is None:
                inv = 1 / r[lead]
                piv[lead] = {j: v * inv for j, v in r.items()}
                break
            c = r[lead]
            for j, v in p.items():
                s = r.get(j, 0) - c * v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
    order = sorted(piv)
    # back substitution, last pivot first
    for idx in range(len(order) - 1, -1, -1):
        col = order[idx]
        prow = piv[col]
        for other in order[:idx]:
            r = piv[other]
            c = r.get(col)
            if c:
                for j, v in prow.items():
                    s = r.get(j, 0) - c * v
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
    return [piv[c] for c in order], order


def kernel_basis(m):
    """Columns spanning the right kernel of ``m``, one per free column."""
    prows, pcols = _rref(m.rows, m.ncols)
    pivset = set(pcols)
    free = [j for j in range(m.ncols) if j not in pivset]
    fpos = {f: k for k, f in enumerate(free)}
    out = RatMatrix(m.ncols, len(free))
    for f, k in fpos.items():
        out.rows[f][k] = Fraction(1)
    for prow, pc in zip(prows, pcols):
        target = out.rows[pc]
        for j, v in prow.items():
            if j != pc:
                target[fpos[j]] = -v
    return out


def solve(m, b):
    """Some ``x`` with ``m @ x == b``, or ``None`` when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(b) != m.nrows:
        raise ValueError("right-hand side length does not match rows")
    n = m.ncols
    aug = []
    for r, bi in zip(m.rows, b):
        row = dict(r)
        if bi:
            row[n] = _frac(bi)
        aug.append(row)
    prows, pcols = _rref(aug, n + 1)
    if pcols and pcols[-1] == n:
        return None
    x = [Fraction(0)] * n
    for prow, pc in zip(prows, pcols):
        x[pc] = prow.get(n, Fraction(0))
    return x
