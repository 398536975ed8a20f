"""Hypercohomology of twisted complexes via the Cech double complex.

The cover is the standard one, ``U_j = {x_j != 0}``. Sections of ``O(d)`` on
``U_S`` are Laurent monomials of degree ``d`` with negative exponents only in
the variables of ``S``; a window ``W`` truncates every exponent to ``>= -W``.
Both Cech restriction and multiplication by polynomials preserve the
truncation, so the truncated total complex is a subcomplex, and it computes
the hypercohomology once ``W`` is large against the twists. Stability under
``W -> W + 1`` is certified on every report.

Total differential on the piece of Cech degree ``p`` and complex degree
``q``: ``d_complex + (-1)^q * delta_cech``, with the simplicial sign
``(-1)^k`` for the position ``k`` of the inserted chart.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import QuadDefError, Unstable
from .exactla import RatMatrix, rank
from .freecomplex import check_chain_map, cone, shift
from .polyring import MonomialSpace, _basis_index, chi_line_bundle, monomial_basis

log = logging.getLogger(__name__)


def bott_dim(n, d, i):
    """``h^i(P^n, O(d))``."""
    if i == 0 and d >= 0:
        return comb(n + d, n)
    if i == n and d <= -n - 1:
        return comb(-d - 1, n)
    return 0


def default_window(c):
    return 2 + c.max_abs_twist()


def euler_of_terms(c):
    n = c.n
    return sum((-1) ** (q % 2) * sum(chi_line_bundle(n, t) for t in c.term(q).twists)
               for q in c.degrees())


class CechTotal:
    """Truncated Cech total complex of a twisted complex at a fixed window.

    Basis blocks of total degree ``t`` are ``(S, q, a)``: chart subset
    ``S`` (sorted tuple, ``|S| = t - q + 1``), complex degree ``q``, summand
    ``a`` of the term in degree ``q``. Blocks are ordered by ``q``, then
    ``S`` lexicographically, then ``a``.
    """

    def __init__(self, c, window):
        self.c = c
        self.window = window
        self.nv = c.num_vars
        self._layout = {}
        self._diff = {}
        self._rank = {}
        self._space_cache = {}

    @property
    def degree_range(self):
        if not self.c.terms:
            return range(0)
        return range(self.c.lo, self.c.hi + self.nv)

    def space(self, S, twist):
        key = (S, twist)
        sp = self._space_cache.get(key)
        if sp is None:
            sp = MonomialSpace(self.nv, twist, frozenset(S), self.window)
            self._space_cache[key] = sp
        return sp

    def layout(self, t):
        """``(blocks, offsets, dim)`` for total degree ``t``."""
        lay = self._layout.get(t)
        if lay is None:
            blocks = []
            offsets = {}
            off = 0
            for q in self.c.degrees():
                p = t - q
                if p < 0 or p >= self.nv:
                    continue
                tw = self.c.term(q).twists
                for S in combinations(range(self.nv), p + 1):
                    for a, d in enumerate(tw):
                        size = len(monomial_basis(self.space(S, d)))
                        blocks.append((S, q, a, off, size))
                        offsets[(S, q, a)] = off
                        off += size
            lay = (blocks, offsets, off)
            self._layout[t] = lay
        return lay

    def dim(self, t):
        return self.layout(t)[2]

    def differential(self, t):
        m = self._diff.get(t)
        if m is not None:
            return m
        blocks, _, ncols = self.layout(t)
        _, toffs, nrows = self.layout(t + 1)
        rows = [{} for _ in range(nrows)]
        c = self.c
        for S, q, a, off, size in blocks:
            tw = c.term(q).twists[a]
            src_basis = monomial_basis(self.space(S, tw))
            # complex differential, same chart subset
            if c.term(q + 1).rank and q in c.diffs:
                col = c.d(q).entries
                for b in range(c.term(q + 1).rank):
                    p = col[b][a]
                    if p.is_zero():
                        continue
                    toff = toffs[(S, q + 1, b)]
                    tindex = _basis_index(self.space(S, c.term(q + 1).twists[b]))
                    terms = list(p.terms.items())
                    for j, e in enumerate(src_basis):
                        for f, coef in terms:
                            i = tindex[tuple(x + y for x, y in zip(e, f))]
                            r = rows[toff + i]
                            s = r.get(off + j, 0) + coef
                            if s:
                                r[off + j] = s
                            else:
                                del r[off + j]
            # Cech differential
            qsign = -1 if q % 2 else 1
            for j in range(self.nv):
                if j in S:
                    continue
                S2 = tuple(sorted(S + (j,)))
                k = S2.index(j)
                sign = qsign * (-1 if k % 2 else 1)
                toff = toffs[(S2, q, a)]
                tindex = _basis_index(self.space(S2, tw))
                for jj, e in enumerate(src_basis):
                    r = rows[toff + tindex[e]]
                    s = r.get(off + jj, 0) + sign
                    if s:
                        r[off + jj] = s
                    else:
                        del r[off + jj]
        m = RatMatrix(nrows, ncols, rows)
        self._diff[t] = m
        return m

    def rank(self, t):
        r = self._rank.get(t)
        if r is None:
            if self.dim(t) == 0 or self.dim(t + 1) == 0:
                r = 0
            else:
                r = rank(self.differential(t))
            self._rank[t] = r
        return r

    def cohomology(self, t):
        return self.dim(t) - self.rank(t) - self.rank(t - 1)

    def dims(self):
        return {t: self.cohomology(t) for t in self.degree_range}


@dataclass
class CohomologyReport:
    dims: dict
    window_used: int
    stable: bool
    euler: int
    euler_expected: int = None
    checked_windows: list = field(default_factory=list)

    def h(self, i):
        return self.dims.get(i, 0)

    @property
    def euler_ok(self):
        return self.euler_expected is None or self.euler == self.euler_expected

    def as_list(self, lo=0, hi=None):
        if hi is None:
            hi = max(self.dims, default=lo)
        return [self.h(i) for i in range(lo, hi + 1)]

    def to_dict(self):
        return {
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "window_used": self.window_used,
            "stable": self.stable,
            "euler": self.euler,
            "euler_expected": self.euler_expected,
            "checked_windows": list(self.checked_windows),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            dims={int(k): v for k, v in d["dims"].items()},
            window_used=d["window_used"],
            stable=d["stable"],
            euler=d["euler"],
            euler_expected=d["euler_expected"],
            checked_windows=list(d.get("checked_windows", [])),
        )


def _report_from(total, stable, checked):
    dims = total.dims()
    euler = sum((-1) ** (t % 2) * h for t, h in dims.items())
    return CohomologyReport(
        dims={t: h for t, h in dims.items()},
        window_used=total.window,
        stable=stable,
        euler=euler,
        euler_expected=euler_of_terms(total.c),
        checked_windows=checked,
    )


def _nonzero(dims):
    return {t: h for t, h in dims.items() if h}


def _euler(dims):
    return sum((-1) ** (t % 2) * h for t, h in dims.items())


def stable_total(c, window=None, max_doublings=3):
    """Cech total complex of ``c`` at a window whose dims agree with those at
    ``W + 1`` and whose Euler characteristic matches the one computed from
    the terms.

    Two small windows can agree while both missing classes, which the Euler
    test catches. With an explicit ``window`` failure raises Unstable;
    without one the default window is doubled.
    """
    explicit = window is not None
    W = window if explicit else default_window(c)
    expected = euler_of_terms(c)
    attempts = 0
    while True:
        a = CechTotal(c, W)
        b = CechTotal(c, W + 1)
        da, db = a.dims(), b.dims()
        if _nonzero(da) == _nonzero(db) and _euler(da) == expected:
            return a
        log.info("window %d not certified: %s vs %s, euler %d", W, da, db, expected)
        if explicit or attempts >= max_doublings:
            raise Unstable(
                f"hypercohomology at window {W} is not certified "
                f"(dims {_nonzero(da)} at {W}, {_nonzero(db)} at {W + 1}, "
                f"Euler characteristic {_euler(da)} against {expected})",
                suggested_window=max(2 * W, default_window(c)),
            )
        W *= 2
        attempts += 1


def hypercohomology(c, window=None, max_doublings=3):
    """Hypercohomology dimensions of ``c`` certified by window stability."""
    total = stable_total(c, window, max_doublings)
    rep = _report_from(total, True, [total.window, total.window + 1])
    if not rep.euler_ok:
        raise QuadDefError(
            f"Euler characteristic {rep.euler} != {rep.euler_expected} at window {total.window}"
        )
    return rep


def stability_sweep(c, window, extra=3):
    """Dims at ``window, window + 1, ..., window + extra``."""
    return [_nonzero(CechTotal(c, window + k).dims()) for k in range(extra + 1)]


# long exact sequence of a triangle


def _selection(nrows, ncols, pairs, sign=1):
    rows = [{} for _ in range(nrows)]
    v = Fraction(sign)
    for i, j in pairs:
        rows[i][j] = v
    return RatMatrix(nrows, ncols, rows)


def _map_rank(DX, DYprev, g, rank_DX, rank_DYprev):
    """Rank of the map on cohomology induced by ``g: X^t -> Y^t``."""
    if g.nrows == 0 or g.ncols == 0:
        return 0
    big = RatMatrix.block(
        [[DX, None], [g, DYprev]],
        [DX.nrows, g.nrows],
        [g.ncols, DYprev.ncols],
    )
    return rank(big) - rank_DX - rank_DYprev


@dataclass
class LESReport:
    exact: bool
    table: list  # rows: {"degree", "cone", "source", "target", ranks...}
    failures: list

    def to_dict(self):
        return {"exact": self.exact, "table": self.table, "failures": self.failures}

    @classmethod
    def from_dict(cls, d):
        return cls(d["exact"], d["table"], d["failures"])


def les_check(f, window=None, totals=None):
    """Verify exactness of the long exact sequence of
    ``cone(f)[-1] -> source -> target -> cone(f)`` at every node.

    Cohomology maps are computed at the Cech level: projection of the cone
    onto the source, ``f`` itself, and inclusion of the target into the
    shifted cone. At each node both ``rank(in) + rank(out) = dim`` and the
    vanishing of the composite on cohomology are checked.
    """
    check_chain_map(f)
    A, B = f.source, f.target
    C = shift(cone(f), -1)
    if window is None:
        window = max(default_window(A), default_window(B), default_window(C))
    if totals is None:
        totals = (CechTotal(A, window), CechTotal(B, window), CechTotal(C, window))
    TA, TB, TC = totals
    nv = A.num_vars

    def g_map(t):
        # Tot(C)^t -> Tot(A)^t
        cb, _, cdim = TC.layout(t)
        _, aoffs, adim = TA.layout(t)
        pairs = []
        for S, q, a, off, size in cb:
            ra = A.term(q).rank
            if a < ra:
                aoff = aoffs[(S, q, a)]
                pairs.extend((aoff + k, off + k) for k in range(size))
        return _selection(adim, cdim, pairs)

    def f_map(t):
        ab, _, adim = TA.layout(t)
        _, boffs, bdim = TB.layout(t)
        rows = [{} for _ in range(bdim)]
        for S, q, a, off, size in ab:
            if not B.term(q).rank:
                continue
            comp = f.component(q)
            src_basis = monomial_basis(TA.space(S, A.term(q).twists[a]))
            for b in range(B.term(q).rank):
                p = comp.entries[b][a]
                if p.is_zero():
                    continue
                boff = boffs[(S, q, b)]
                tindex = _basis_index(TB.space(S, B.term(q).twists[b]))
                for j, e in enumerate(src_basis):
                    for fe, coef in p.terms.items():
                        i = tindex[tuple(x + y for x, y in zip(e, fe))]
                        r = rows[boff + i]
                        s = r.get(off + j, 0) + coef
                        if s:
                            r[off + j] = s
                        else:
                            del r[off + j]
        return RatMatrix(bdim, adim, rows)

    def conn_map(t):
        # Tot(B)^t -> Tot(C)^{t+1}, b -> (0, b)
        bb, _, bdim = TB.layout(t)
        _, coffs, cdim = TC.layout(t + 1)
        pairs = []
        for S, q, b, off, size in bb:
            coff = coffs[(S, q + 1, A.term(q + 1).rank + b)]
            pairs.extend((coff + k, off + k) for k in range(size))
        return _selection(cdim, bdim, pairs)

    def D(T, t):
        return T.differential(t)

    def induced_rank(TX, TY, g, t, tY=None):
        tY = t if tY is None else tY
        return _map_rank(D(TX, t), D(TY, tY - 1), g, TX.rank(t), TY.rank(tY - 1))

    lo = min(TA.degree_range.start, TB.degree_range.start, TC.degree_range.start, 0) - 1
    hi = max(TA.degree_range.stop, TB.degree_range.stop, TC.degree_range.stop) + 1
    table = []
    failures = []
    ranks = {}
    for t in range(lo, hi):
        g, fm, dm = g_map(t), f_map(t), conn_map(t)
        rg = induced_rank(TC, TA, g, t)
        rf = induced_rank(TA, TB, fm, t)
        rd = induced_rank(TB, TC, dm, t, t + 1)
        ranks[t] = (rg, rf, rd)
        zero_fg = induced_rank(TC, TB, fm @ g, t)
        zero_df = induced_rank(TA, TC, dm @ fm, t, t + 1)
        g_next = g_map(t + 1)
        zero_gd = induced_rank(TB, TA, g_next @ dm, t, t + 1)
        for name, val in (("f o g", zero_fg), ("delta o f", zero_df), ("g o delta", zero_gd)):
            if val != 0:
                failures.append(f"composite {name} nonzero on cohomology in degree {t}")
        table.append(
            {
                "degree": t,
                "cone": TC.cohomology(t),
                "source": TA.cohomology(t),
                "target": TB.cohomology(t),
                "rank_cone_to_source": rg,
                "rank_source_to_target": rf,
                "rank_target_to_cone": rd,
            }
        )
    for row in table:
        t = row["degree"]
        rg, rf, rd = ranks[t]
        rd_prev = ranks[t - 1][2] if t - 1 in ranks else 0
        if rg + rf != row["source"]:
            failures.append(f"not exact at source in degree {t}")
        if rf + rd != row["target"]:
            failures.append(f"not exact at target in degree {t}")
        if rd_prev + rg != row["cone"]:
            failures.append(f"not exact at cone in degree {t}")
    table = [r for r in table if r["cone"] or r["source"] or r["target"]]
    return LESReport(exact=not failures, table=table, failures=failures)
