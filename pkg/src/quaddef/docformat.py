"""Line-oriented text format for quadratic sheaves and their extensions.

Grammar (``#`` starts a comment, blank lines are ignored)::

    document   := header section*
    header     := (key "=" value NEWLINE)*
    key        := "kind" | "name" | "ambient_dim" | "sign" | "window" | "class_index"
    section    := "[" title "]" NEWLINE body
    title      := "term" INT | "differential" INT | "pairing"
                | "eta" | "psi" | "relations" | "inclusion" | "projection" | "form"
    body       := ("twists" "=" INT*) | matrix          (term sections take twists)
    matrix     := (row NEWLINE)*
    row        := poly ("," poly)*

``[differential i]`` maps term ``i`` to term ``i + 1``: one row per summand
of term ``i + 1``. ``[pairing]`` is the form on term 0 (row = first slot).
``kind = extension`` documents add ``[eta]`` (term 0 by term -1) and
``[psi]`` (term 0 by term 0); the remaining sections record the computed
presentation and are compared against a recomputation when checked.
"""

import re
from dataclasses import dataclass, field

from .defcomplex import QuadraticSheaf, sign_symbol
from .errors import ParseError, ShapeMismatch
from .freecomplex import FreeSheaf, PolyMatrix, TwistedComplex
from .polyring import format_poly, parse_poly

HEADER_KEYS = ("kind", "name", "ambient_dim", "sign", "window", "class_index")
MATRIX_SECTIONS = ("pairing", "eta", "psi", "relations", "inclusion", "projection", "form")
KINDS = ("quadratic", "extension")

_SECTION = re.compile(r"^\[\s*([a-z]+)(?:\s+(-?\d+))?\s*\]$")
_KEY = re.compile(r"^([A-Za-z_]+)\s*=\s*(.*)$")


@dataclass
class Document:
    kind: str
    name: str
    n: int
    sign: int
    window: object
    terms: dict  # degree -> FreeSheaf
    differentials: dict  # degree -> rows of Poly
    matrices: dict  # section -> rows of Poly
    class_index: object = None
    lines: dict = field(default_factory=dict)  # section -> first line


@dataclass
class _Block:
    title: str
    index: object
    line: int
    rows: list = field(default_factory=list)  # (line number, column offset, text)


def _int(text, line, col, what):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text!r}", line, col) from None


def _strip_comment(raw):
    pos = raw.find("#")
    return raw if pos < 0 else raw[:pos]


def parse_document(text):
    """Parse a document into its raw pieces; structural checks only."""
    header = {}
    blocks = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        stripped = body.strip()
        if stripped.startswith("["):
            m = _SECTION.match(stripped)
            if not m:
                raise ParseError(f"malformed section header {stripped!r}", lineno, indent + 1)
            title, idx = m.group(1), m.group(2)
            if title in ("term", "differential"):
                if idx is None:
                    raise ParseError(f"section [{title}] needs a degree", lineno, indent + 1)
                idx = int(idx)
            elif title in MATRIX_SECTIONS:
                if idx is not None:
                    raise ParseError(f"section [{title}] takes no index", lineno, indent + 1)
            else:
                raise ParseError(f"unknown section {title!r}", lineno, indent + 2)
            if any(b.title == title and b.index == idx for b in blocks):
                raise ParseError(f"duplicate section [{stripped[1:-1].strip()}]", lineno, indent + 1)
            current = _Block(title, idx, lineno)
            blocks.append(current)
            continue
        if current is None:
            m = _KEY.match(stripped)
            if not m:
                raise ParseError("expected 'key = value'", lineno, indent + 1)
            key, value = m.group(1), m.group(2).strip()
            if key not in HEADER_KEYS:
                raise ParseError(f"unknown key {key!r}", lineno, indent + 1)
            if key in header:
                raise ParseError(f"duplicate key {key!r}", lineno, indent + 1)
            header[key] = (value, lineno, indent + m.start(2) + 1)
            continue
        current.rows.append((lineno, indent, stripped))
    return _assemble(header, blocks)


def _assemble(header, blocks):
    def need(key):
        if key not in header:
            raise ParseError(f"missing required key {key!r}", 1, 1)
        return header[key]

    kind = header.get("kind", ("quadratic", 1, 1))
    if kind[0] not in KINDS:
        raise ParseError(f"kind must be one of {', '.join(KINDS)}", kind[1], kind[2])
    value, line, col = need("ambient_dim")
    n = _int(value, line, col, "ambient_dim")
    if n < 1:
        raise ParseError("ambient_dim must be at least 1", line, col)
    nv = n + 1
    value, line, col = need("sign")
    if value not in ("+", "-"):
        raise ParseError("sign must be '+' or '-'", line, col)
    sign = 1 if value == "+" else -1
    window = None
    if "window" in header:
        value, line, col = header["window"]
        window = _int(value, line, col, "window")
        if window < 1:
            raise ParseError("window must be positive", line, col)
    class_index = None
    if "class_index" in header:
        value, line, col = header["class_index"]
        class_index = _int(value, line, col, "class_index")
    name = header.get("name", ("", 0, 0))[0]

    terms, diffs, mats, lines = {}, {}, {}, {}
    for b in blocks:
        if b.title == "term":
            terms[b.index] = _parse_twists(b)
        elif b.title == "differential":
            diffs[b.index] = _parse_matrix(b, nv)
        else:
            mats[b.title] = _parse_matrix(b, nv)
        lines[(b.title, b.index)] = b.line
    if 0 not in terms:
        raise ParseError("missing section [term 0]", 1, 1)
    if "pairing" not in mats:
        raise ParseError("missing section [pairing]", 1, 1)
    if kind[0] == "extension":
        for s in ("eta", "psi"):
            if s not in mats:
                raise ParseError(f"extension documents need a [{s}] section", 1, 1)
    for i, b in ((b.index, b) for b in blocks if b.title == "term"):
        if i > 0:
            raise ParseError("resolution terms must sit in degrees <= 0", b.line, 2)
    degs = sorted(terms)
    if degs != list(range(degs[0], 1)):
        raise ParseError("resolution terms must occupy consecutive degrees ending at 0", 1, 1)
    for b in blocks:
        if b.title == "differential" and (b.index not in terms or b.index + 1 not in terms):
            raise ParseError(f"differential {b.index} has no matching terms", b.line, 2)
    return Document(kind[0], name, n, sign, window, terms, diffs, mats, class_index, lines)


def _parse_twists(block):
    if len(block.rows) != 1:
        raise ParseError("term sections hold exactly one 'twists = ...' line", block.line, 1)
    lineno, indent, text = block.rows[0]
    m = _KEY.match(text)
    if not m or m.group(1) != "twists":
        raise ParseError("expected 'twists = <integers>'", lineno, indent + 1)
    out = []
    start = text.index("=") + 1
    for tok in re.finditer(r"\S+", text[start:]):
        col = indent + start + tok.start() + 1
        out.append(_int(tok.group(), lineno, col, "twist"))
    return FreeSheaf(tuple(out))


def _parse_matrix(block, nv):
    rows = []
    width = None
    for lineno, indent, text in block.rows:
        row = []
        pos = 0
        for cell in text.split(","):
            row.append(parse_poly(cell, nv, lineno, indent + pos))
            pos += len(cell) + 1
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row has {len(row)} entries, expected {width}", lineno, indent + 1)
        rows.append(row)
    return rows


def _poly_matrix(rows, source, target, nv, what):
    if not rows:
        rows = [[] for _ in range(target.rank)] if source.rank == 0 else []
    if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
        got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
        raise ShapeMismatch(f"{what} is {got}, expected {target.rank}x{source.rank}")
    return PolyMatrix(source, target, rows, nv, check=False)


def to_quadratic(doc):
    """QuadraticSheaf of a parsed document (degrees checked, nothing else)."""
    nv = doc.n + 1
    terms = doc.terms
    diffs = {}
    for i in sorted(terms):
        if i + 1 in terms:
            rows = doc.differentials.get(i)
            if rows is None:
                raise ShapeMismatch(f"missing section [differential {i}]")
            diffs[i] = _poly_matrix(rows, terms[i], terms[i + 1], nv, f"differential {i}")
    res = TwistedComplex(nv, terms, diffs)
    W0 = terms[0]
    pairing = _poly_matrix(doc.matrices["pairing"], W0, W0.dual(), nv, "pairing")
    return QuadraticSheaf(doc.n, res, pairing, doc.sign, doc.name)


def load(text):
    return to_quadratic(parse_document(text))


def extension_cocycle(doc, q):
    from .realizer import Cocycle1

    nv = doc.n + 1
    W0, W1 = q.resolution.term(0), q.resolution.term(-1)
    eta = _poly_matrix(doc.matrices["eta"], W1, W0, nv, "eta")
    psi = _poly_matrix(doc.matrices["psi"], W0, W0.dual(), nv, "psi")
    return Cocycle1(eta, psi)


# writing


def format_matrix(m):
    if not m.source.rank:
        return []
    return [", ".join(format_poly(p) for p in row) for row in m.entries]


def _section(title, lines):
    return [f"[{title}]"] + list(lines)


def dump(q, window=None, kind="quadratic", extra_header=(), extra_sections=()):
    """Canonical text of a quadratic sheaf."""
    out = [f"kind = {kind}"]
    if q.name:
        out.append(f"name = {q.name}")
    out.append(f"ambient_dim = {q.n}")
    out.append(f"sign = {sign_symbol(q.sign)}")
    if window is not None:
        out.append(f"window = {window}")
    out.extend(f"{k} = {v}" for k, v in extra_header)
    W = q.resolution
    for i in sorted(W.degrees()):
        out.append("")
        out.extend(_section(f"term {i}", ["twists = " + " ".join(str(t) for t in W.term(i).twists)]))
    for i in sorted(W.degrees()):
        if W.term(i + 1).rank:
            out.append("")
            out.extend(_section(f"differential {i}", format_matrix(W.d(i))))
    out.append("")
    out.extend(_section("pairing", format_matrix(q.pairing)))
    for title, m in extra_sections:
        out.append("")
        out.extend(_section(title, format_matrix(m)))
    return "\n".join(out) + "\n"


def dump_extension(fo, class_index=None):
    """Extension document: the cocycle plus the computed presentation."""
    header = [] if class_index is None else [("class_index", class_index)]
    sections = [("eta", fo.cocycle.eta), ("psi", fo.cocycle.psi)]
    if fo.relations.source.rank:
        sections.append(("relations", fo.relations))
    sections += [("inclusion", fo.i), ("projection", fo.j), ("form", fo.phi)]
    body = dump(fo.quad, kind="extension", extra_header=header, extra_sections=sections)
    log = "".join(f"# {line}\n" for line in fo.log)
    return body + ("\n# verified identities\n" + log if log else "")
