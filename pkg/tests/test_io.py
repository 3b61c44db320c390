import pytest

from pdakit import PdaDocument, construct_pmt, parse, parse_grid, serialize, transform_to_base
from pdakit.errors import ParseError, VersionMismatch
from pdakit.io import format_grid, loads


def test_p4_roundtrip_bytes(base4):
    text = serialize(PdaDocument.from_array(base4.pda, base=base4,
                                            provenance={"constructor": "grid", "args": {}}))
    doc = parse(text)
    assert serialize(doc) == text
    assert doc.array == base4.pda
    assert doc.lam == 1 and doc.phi == (4, 1, 2, 3)
    assert doc.params.as_tuple() == (4, 4, 2, 4)


def test_labels_roundtrip(base4, mn_q):
    a = construct_pmt(base4, 2, 2)
    text = serialize(PdaDocument.from_array(a))
    doc = parse(text)
    assert doc.array == a and doc.array.symbol_metadata == a.symbol_metadata
    b = transform_to_base(mn_q)
    doc = parse(serialize(PdaDocument.from_array(b.pda, base=b)))
    assert doc.array.label(2) == (1, 2)


def test_grid_text():
    a = parse_grid("* 1\n1 *")
    assert a.to_rows() == [["*", 1], [1, "*"]]
    assert parse_grid(format_grid(a)) == a
    assert parse_grid("# comment\n\n* 1   # trailing\n1 *\n") == a


@pytest.mark.parametrize("text,line", [("* 0\n", 1), ("* 1\n1 x\n", 2), ("* 1\n1\n", 2), ("", 1)])
def test_grid_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_grid(text)
    assert e.value.line == line


def test_json_errors(p4):
    text = serialize(PdaDocument.from_array(p4))
    with pytest.raises(VersionMismatch):
        parse(text.replace('"format_version": 1', '"format_version": 9'))
    bad = text.replace('"* * 3 1"', '"* * 0 1"')
    with pytest.raises(ParseError) as e:
        parse(bad)
    assert e.value.line == 7
    with pytest.raises(ParseError):
        parse("{ not json")


def test_unverified_document_has_no_params():
    doc = loads("1 1\n")
    assert doc.params is None
    assert parse(serialize(PdaDocument.from_array(doc.array))).params is None
