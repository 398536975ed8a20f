import pytest

from quaddef import corpus, docformat
from quaddef.errors import ParseError, ShapeMismatch
from quaddef.realizer import realize_first_order, zero_cocycle

BASE = """ambient_dim = 1
sign = +

[term 0]
twists = 0 0

[pairing]
0, 1
1, 0
"""


@pytest.mark.parametrize("name", [e.name for e in corpus.valid_entries()])
def test_dump_load_roundtrip(name):
    q = docformat.load(corpus.get(name).text)
    text = docformat.dump(q)
    q2 = docformat.load(text)
    assert q2.resolution == q.resolution
    assert q2.pairing == q.pairing
    assert q2.sign == q.sign and q2.name == q.name
    assert docformat.dump(q2) == text


def test_comments_and_blank_lines_are_ignored():
    text = "# leading comment\n" + BASE.replace("0, 1\n", "0, 1   # first row\n\n")
    assert docformat.load(text).pairing == docformat.load(BASE).pairing


def test_window_and_class_index_in_header():
    doc = docformat.parse_document("window = 4\nclass_index = 1\n" + BASE)
    assert doc.window == 4 and doc.class_index == 1
    assert doc.kind == "quadratic"


@pytest.mark.parametrize(
    "text, line, column",
    [
        (BASE.replace("sign = +", "sign = *"), 2, 8),
        (BASE.replace("ambient_dim = 1", "ambient_dim = one"), 1, 15),
        (BASE.replace("twists = 0 0", "twists = 0 x"), 5, 12),
        (BASE.replace("1, 0\n", "1, x0^\n"), 9, 7),
        (BASE.replace("[pairing]", "[pairng]"), 7, 2),
        (BASE.replace("[term 0]", "[term]"), 4, 1),
        (BASE.replace("sign = +", "colour = +"), 2, 1),
        ("  sign = ?\n" + BASE.replace("sign = +\n", ""), 1, 10),
        (BASE.replace("1, 0\n", "1\n"), 9, 1),
    ],
)
def test_parse_errors_point_at_the_problem(text, line, column):
    with pytest.raises(ParseError) as exc:
        docformat.parse_document(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_missing_sections():
    with pytest.raises(ParseError, match="pairing"):
        docformat.parse_document(BASE.split("[pairing]")[0])
    with pytest.raises(ParseError, match="term 0"):
        docformat.parse_document("ambient_dim = 1\nsign = +\n[pairing]\n1\n")
    with pytest.raises(ParseError, match="eta"):
        docformat.parse_document("kind = extension\n" + BASE)


def test_positive_degree_terms_are_rejected():
    with pytest.raises(ParseError, match="degrees <= 0"):
        docformat.parse_document(BASE + "\n[term 1]\ntwists = 0\n")


def test_pairing_shape_is_checked():
    with pytest.raises(ShapeMismatch):
        docformat.load(BASE.replace("1, 0\n", ""))


def test_extension_document_roundtrip():
    q = docformat.load(corpus.get("ideal-point-p2").text)
    fo = realize_first_order(q, zero_cocycle(q))
    text = docformat.dump_extension(fo, class_index=0)
    doc = docformat.parse_document(text)
    assert doc.kind == "extension" and doc.class_index == 0
    q2 = docformat.to_quadratic(doc)
    c = docformat.extension_cocycle(doc, q2)
    assert c == fo.cocycle
    assert "# verified identities" in text
