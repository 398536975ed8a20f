"""Pure-Python fallback for the integer elimination kernel.

Rows are given as ``(cols, vals)`` pairs of equal-length sequences with
strictly increasing column indices and nonzero integer values. The compiled
module ``quaddef._kernels`` exposes the same functions.
"""

from math import gcd

BACKEND = "python"


def _content(vals):
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _normalize(cols, vals):
    g = _content(vals)
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


def _combine(pc, pv, rc, rv):
    # r <- a*r - b*p, eliminating the shared leading column
    a = pv[0]
    b = rv[0]
    g = gcd(a, b)
    a //= g
    b //= g
    oc = []
    ov = []
    i = 1
    j = 1
    np_ = len(pc)
    nr = len(rc)
    while i < np_ and j < nr:
        ci = pc[i]
        cj = rc[j]
        if ci < cj:
            oc.append(ci)
            ov.append(-b * pv[i])
            i += 1
        elif cj < ci:
            oc.append(cj)
            ov.append(a * rv[j])
            j += 1
        else:
            v = a * rv[j] - b * pv[i]
            if v:
                oc.append(ci)
                ov.append(v)
            i += 1
            j += 1
    while i < np_:
        oc.append(pc[i])
        ov.append(-b * pv[i])
        i += 1
    while j < nr:
        oc.append(rc[j])
        ov.append(a * rv[j])
        j += 1
    return oc, ov


def echelon_rank(rows, ncols):
    """Rank of an integer matrix given as sparse rows.

    Fraction-free incremental row echelon form: each incoming row is reduced
    against the stored pivot rows by its leading column and kept, divided by
    its content, when its leading column is new.
    """
    pivots = {}
    rank = 0
    for cols, vals in rows:
        if not cols:
            continue
        rc = list(cols)
        rv = list(vals)
        while rc:
            p = pivots.get(rc[0])
            if p is None:
                pivots[rc[0]] = _normalize(rc, rv)
                rank += 1
                break
            rc, rv = _combine(p[0], p[1], rc, rv)
    return rank


def echelon_pivots(rows, ncols):
    """Indices of the input rows that became pivots (a maximal independent
    subset, greedy in input order)."""
    pivots = {}
    chosen = []
    for k, (cols, vals) in enumerate(rows):
        if not cols:
            continue
        rc = list(cols)
        rv = list(vals)
        while rc:
            p = pivots.get(rc[0])
            if p is None:
                pivots[rc[0]] = _normalize(rc, rv)
                chosen.append(k)
                break
            rc, rv = _combine(p[0], p[1], rc, rv)
    return chosen
