"""Built-in example documents.

Valid entries carry the ``(h0, h1, h2)`` they are expected to produce;
invalid ones name the error class and exit code their ``command`` (``check``
unless stated) must report.
"""

from dataclasses import dataclass

from .errors import UnknownName


@dataclass(frozen=True)
class Entry:
    name: str
    description: str
    text: str
    expected: tuple = None  # (h0, h1, h2) for valid entries
    error: str = None  # error class name for invalid entries
    exit_code: int = 0
    command: str = "check"  # the subcommand that exhibits the error

    @property
    def valid(self):
        return self.error is None


def _doc(name, n, sign, terms, diffs, pairing, window=None):
    lines = [f"name = {name}", f"ambient_dim = {n}", f"sign = {sign}"]
    if window is not None:
        lines.append(f"window = {window}")
    for i, tw in sorted(terms.items()):
        lines += ["", f"[term {i}]", "twists = " + " ".join(str(t) for t in tw)]
    for i, rows in sorted(diffs.items()):
        lines += ["", f"[differential {i}]"] + rows
    lines += ["", "[pairing]"] + pairing
    return "\n".join(lines) + "\n"


HYP = ["0, 1", "1, 0"]
SYMP = ["0, 1", "-1, 0"]
IDEAL_PAIRING = ["x0^2, x0*x1", "x0*x1, x1^2"]

_ENTRIES = [
    Entry(
        "hyperbolic-p1",
        "O + O on P^1 with the hyperbolic symmetric form",
        _doc("hyperbolic-p1", 1, "+", {0: (0, 0)}, {}, HYP),
        expected=(1, 0, 0),
    ),
    Entry(
        "symplectic-p1",
        "O + O on P^1 with the standard symplectic form",
        _doc("symplectic-p1", 1, "-", {0: (0, 0)}, {}, SYMP),
        expected=(3, 0, 0),
    ),
    Entry(
        "hyperbolic-p2",
        "O + O on P^2 with the hyperbolic symmetric form",
        _doc("hyperbolic-p2", 2, "+", {0: (0, 0)}, {}, HYP),
        expected=(1, 0, 0),
    ),
    Entry(
        "symplectic-p2",
        "O + O on P^2 with the standard symplectic form",
        _doc("symplectic-p2", 2, "-", {0: (0, 0)}, {}, SYMP),
        expected=(3, 0, 0),
    ),
    Entry(
        "orthogonal-twisted-p1",
        "O(1) + O(-1) on P^1 with the hyperbolic symmetric form",
        _doc("orthogonal-twisted-p1", 1, "+", {0: (1, -1)}, {}, HYP),
        expected=(1, 0, 0),
    ),
    Entry(
        "symplectic-twisted-p1",
        "O(1) + O(-1) on P^1 with the hyperbolic symplectic form",
        _doc("symplectic-twisted-p1", 1, "-", {0: (1, -1)}, {}, SYMP),
        expected=(4, 1, 0),
    ),
    Entry(
        "symplectic-twisted-euler-p1",
        "the same symplectic O(1) + O(-1), presented as a quotient of O + O + O(-1) "
        "through the Euler sequence; its first-order class has a global representative",
        _doc(
            "symplectic-twisted-euler-p1",
            1,
            "-",
            {-1: (-1,), 0: (0, 0, -1)},
            {-1: ["x1", "-x0", "0"]},
            ["0, 0, x0", "0, 0, x1", "-x0, -x1, 0"],
        ),
        expected=(4, 1, 0),
    ),
    Entry(
        "ideal-point-p2",
        "ideal sheaf of the point (0:0:1) on P^2 with its Koszul resolution "
        "and the multiplication pairing",
        _doc(
            "ideal-point-p2",
            2,
            "+",
            {-1: (-2,), 0: (-1, -1)},
            {-1: ["x1", "-x0"]},
            IDEAL_PAIRING,
        ),
        expected=(0, 2, 3),
    ),
    Entry(
        "ideal-point-padded-p2",
        "the same ideal sheaf with the acyclic summand O(-5) -> O(-5) added to its resolution",
        _doc(
            "ideal-point-padded-p2",
            2,
            "+",
            {-1: (-2, -5), 0: (-1, -1, -5)},
            {-1: ["x1, 0", "-x0, 0", "0, 1"]},
            ["x0^2, x0*x1, 0", "x0*x1, x1^2, 0", "0, 0, 0"],
        ),
        expected=(0, 2, 3),
    ),
    Entry(
        "invalid-parse",
        "truncated exponent in a pairing entry",
        _doc("invalid-parse", 1, "+", {0: (0, 0)}, {}, ["0, x0^", "1, 0"]),
        error="ParseError",
        exit_code=1,
    ),
    Entry(
        "invalid-degree",
        "pairing entry of the wrong degree",
        _doc("invalid-degree", 1, "+", {0: (0, 0)}, {}, ["0, x0", "x0, 0"]),
        error="DegreeMismatch",
        exit_code=2,
    ),
    Entry(
        "invalid-shape",
        "pairing with too few rows",
        _doc("invalid-shape", 1, "+", {0: (0, 0)}, {}, ["0, 1"]),
        error="ShapeMismatch",
        exit_code=2,
    ),
    Entry(
        "invalid-complex",
        "differentials whose composite is not zero",
        _doc(
            "invalid-complex",
            2,
            "+",
            {-2: (-3,), -1: (-2, -2), 0: (-1, -1)},
            {-2: ["x0", "x1"], -1: ["x1, 0", "-x0, 0"]},
            IDEAL_PAIRING,
        ),
        error="NotAComplex",
        exit_code=2,
    ),
    Entry(
        "invalid-symmetry",
        "antisymmetric form declared symmetric",
        _doc("invalid-symmetry", 1, "+", {0: (0, 0)}, {}, SYMP),
        error="SymmetryFailure",
        exit_code=2,
    ),
    Entry(
        "invalid-descent",
        "symmetric form on the Koszul generators that does not kill the relation",
        _doc(
            "invalid-descent",
            2,
            "+",
            {-1: (-2,), 0: (-1, -1)},
            {-1: ["x1", "-x0"]},
            ["x0^2, 0", "0, x1^2"],
        ),
        error="DescentFailure",
        exit_code=2,
    ),
    Entry(
        "invalid-degenerate",
        "zero form",
        _doc("invalid-degenerate", 1, "+", {0: (0, 0)}, {}, ["0, 0", "0, 0"]),
        error="Degenerate",
        exit_code=2,
    ),
    Entry(
        "invalid-fiber-rank",
        "zero differential, so the fiber dimension never matches the alternating rank",
        _doc(
            "invalid-fiber-rank",
            1,
            "+",
            {-1: (-1,), 0: (0, 0)},
            {-1: ["0", "0"]},
            HYP,
        ),
        error="FiberRankDrop",
        exit_code=2,
    ),
    Entry(
        "invalid-window",
        "O(3) + O(-3) on P^1, symplectic, with a window too small for O(-6)",
        _doc("invalid-window", 1, "-", {0: (3, -3)}, {}, SYMP, window=1),
        error="Unstable",
        exit_code=3,
        command="report",
    ),
]

CORPUS = {e.name: e for e in _ENTRIES}


def names():
    return [e.name for e in _ENTRIES]


def get(name):
    try:
        return CORPUS[name]
    except KeyError:
        raise UnknownName(f"no corpus entry named {name!r}") from None


def valid_entries():
    return [e for e in _ENTRIES if e.valid]


def invalid_entries():
    return [e for e in _ENTRIES if not e.valid]
