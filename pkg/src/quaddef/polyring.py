"""Homogeneous coordinate ring of P^n.

Polynomials in ``x0..xn`` with rational coefficients, (Laurent) monomial
bases for the charts of the standard cover, and multiplication by a
polynomial written as a matrix between monomial bases.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ParseError, WindowOverflow
from .exactla import RatMatrix


class Poly:
    """Polynomial in ``num_vars`` variables; terms map exponent tuples to
    nonzero Fractions."""

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars, terms=None):
        self.num_vars = num_vars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != num_vars:
                    raise ValueError(f"exponent {e} has wrong length for {num_vars} variables")
                if c:
                    clean[tuple(e)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, num_vars):
        return cls(num_vars)

    @classmethod
    def const(cls, num_vars, c):
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def var(cls, num_vars, i):
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return {sum(e) for e in self.terms}

    def is_homogeneous(self, degree=None):
        ds = self.degrees()
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return degree is None or ds == {degree}

    @property
    def degree(self):
        """Degree of a nonzero homogeneous polynomial, else ``None``."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def _check(self, other):
        if self.num_vars != other.num_vars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.num_vars, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Poly(self.num_vars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly(self.num_vars)
        return Poly(self.num_vars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.num_vars, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.num_vars == other.num_vars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                v *= Fraction(x) ** k
            total += v
        return total

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.num_vars}, {format_poly(self)!r})"


def _fmt_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p):
    """Canonical text form, terms in descending lexicographic order."""
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i}")
            elif k != 0:
                factors.append(f"x{i}^{k}")
        if not factors:
            body = _fmt_coeff(abs(c))
        elif abs(c) == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(abs(c)) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^])|(?P<bad>\S))"
)


def parse_poly(text, num_vars, line=None, column_offset=0):
    """Parse ``c*x0^a0*x1^a1 + ...`` into a Poly.

    Raises ParseError with 1-based column positions (shifted by
    ``column_offset``) on malformed input or out-of-range variables.
    """
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        col = m.start(m.lastgroup) + 1 + column_offset
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", line, col)
        if m.group("num"):
            toks.append(("num", m.group("num"), col))
        elif m.group("var"):
            toks.append(("var", int(m.group("idx")), col))
        else:
            toks.append((m.group("op"), m.group("op"), col))
        pos = m.end()
    end_col = len(text) + 1 + column_offset
    if not toks:
        raise ParseError("empty polynomial", line, end_col)

    k = 0

    def peek():
        return toks[k] if k < len(toks) else (None, None, end_col)

    result = Poly(num_vars)
    first = True
    while k < len(toks) or first:
        sign = 1
        kind, val, col = peek()
        if kind in ("+", "-"):
            sign = -1 if kind == "-" else 1
            k += 1
        elif not first:
            shown = f"x{val}" if kind == "var" else val
            raise ParseError(f"expected '+' or '-', found {shown!r}", line, col)
        first = False
        coeff = Fraction(sign)
        exps = [0] * num_vars
        need_factor = True
        while need_factor:
            kind, val, col = peek()
            if kind == "num":
                coeff *= Fraction(val)
                k += 1
            elif kind == "var":
                if val >= num_vars:
                    raise ParseError(
                        f"variable x{val} out of range for {num_vars} variables", line, col
                    )
                k += 1
                power = 1
                if peek()[0] == "^":
                    k += 1
                    kind2, val2, col2 = peek()
                    if kind2 != "num" or "/" in val2:
                        raise ParseError("expected integer exponent after '^'", line, col2)
                    power = int(val2)
                    k += 1
                exps[val] += power
            else:
                raise ParseError(
                    "expected a coefficient or variable" + (f", found {val!r}" if val else ""),
                    line,
                    col,
                )
            if peek()[0] == "*":
                k += 1
            else:
                need_factor = False
        result = result + Poly(num_vars, {tuple(exps): coeff})
    return result


@dataclass(frozen=True)
class MonomialSpace:
    """Laurent monomials of a fixed degree over the chart intersection where
    the variables in ``allowed_negative`` are inverted, truncated so every
    exponent is at least ``-window``."""

    num_vars: int
    degree: int
    allowed_negative: frozenset = frozenset()
    window: int = 0

    def __post_init__(self):
        object.__setattr__(self, "allowed_negative", frozenset(self.allowed_negative))

    def lower(self, i):
        return -self.window if i in self.allowed_negative else 0

    @property
    def upper(self):
        return self.degree + self.num_vars * self.window

    def contains(self, e):
        if sum(e) != self.degree:
            return False
        ub = self.upper
        return all(self.lower(i) <= a <= ub for i, a in enumerate(e))

    def basis(self):
        return monomial_basis(self)

    def index(self):
        return _basis_index(self)

    def __len__(self):
        return len(monomial_basis(self))


@lru_cache(maxsize=None)
def monomial_basis(space):
    """Exponent vectors of ``space`` in descending lexicographic order."""
    n = space.num_vars
    lows = [space.lower(i) for i in range(n)]
    ub = space.upper
    out = []

    def rec(i, remaining, prefix):
        if i == n - 1:
            if lows[i] <= remaining <= ub:
                out.append(tuple(prefix + [remaining]))
            return
        rest_low = sum(lows[i + 1:])
        hi = min(ub, remaining - rest_low)
        for a in range(hi, lows[i] - 1, -1):
            rec(i + 1, remaining - a, prefix + [a])

    if n > 0:
        rec(0, space.degree, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_index(space):
    return {e: k for k, e in enumerate(monomial_basis(space))}


def _check_spaces(p, source, target):
    if p.num_vars != source.num_vars or source.num_vars != target.num_vars:
        raise ValueError("polynomial and spaces have different numbers of variables")
    if source.allowed_negative != target.allowed_negative or source.window != target.window:
        raise ValueError("source and target must share chart and window")
    if not p.is_zero() and not p.is_homogeneous(target.degree - source.degree):
        raise ValueError(
            f"polynomial {p} is not homogeneous of degree "
            f"{target.degree - source.degree}"
        )


def mult_entries(p, source, target):
    """``(row, col, coeff)`` triples of multiplication by ``p``."""
    _check_spaces(p, source, target)
    tindex = _basis_index(target)
    terms = list(p.terms.items())
    out = []
    for j, e in enumerate(monomial_basis(source)):
        for f, c in terms:
            prod = tuple(a + b for a, b in zip(e, f))
            i = tindex.get(prod)
            if i is None:
                raise WindowOverflow(
                    f"product of monomial {e} with term {f} leaves the target window "
                    f"(degree {target.degree}, window {target.window})"
                )
            out.append((i, j, c))
    return out


def mult_matrix(p, source, target):
    """Matrix of multiplication by ``p`` from ``source`` to ``target``."""
    return RatMatrix.from_entries(len(target), len(source), mult_entries(p, source, target))


def chi_line_bundle(n, d):
    """Euler characteristic of O(d) on P^n, the binomial C(n+d, n) read as a
    polynomial in d."""
    num = 1
    for k in range(1, n + 1):
        num *= d + k
    den = 1
    for k in range(1, n + 1):
        den *= k
    return num // den
