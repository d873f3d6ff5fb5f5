import pytest

from common.parser import ChannelJsonParser, EdgeListParser, parse_graph, parse_pauli
from common.utils import ordered_map, validate_weighted_terms
from entlifepy.entlifeTypes import PauliString
from entlifepy.errors import ValidationError


def test_edge_list_with_comments_and_inferred_n():
    g = parse_graph("# linear\n0 1\n1 2\n\n2 3\n")
    assert g.n == 4
    assert g.sorted_edges() == [(0, 1), (1, 2), (2, 3)]


def test_edge_list_header_adds_isolated_vertices():
    g = parse_graph("n 6\n0 1\n")
    assert g.n == 6
    assert g.degree(5) == 0


def test_edge_list_canonicalizes_reversed_edges():
    g = parse_graph("2 0\n")
    assert g.edges == frozenset({(0, 2)})


@pytest.mark.parametrize("text, fragment", [
    ("0 1\n1 x\n", "line 2"),
    ("0 0\n", "self-loop"),
    ("0 1\n1 0\n", "duplicate"),
    ("n 2\n0 3\n", "header declares"),
    ("# nothing\n", "unrecognized"),
    ("n 3\nn 4\n", "duplicate 'n'"),
    ("-1 2\n", "negative"),
])
def test_edge_list_errors(text, fragment):
    with pytest.raises(ValidationError, match=fragment):
        parse_graph(text)


def test_edge_list_can_handle():
    assert EdgeListParser().can_handle("# c\n0 1\n")
    assert not EdgeListParser().can_handle('{"n": 1}')


def test_parse_pauli_normalizes_case():
    assert parse_pauli(" ixzy ") == PauliString("IXZY")
    with pytest.raises(ValidationError):
        parse_pauli("IXA")


def test_channel_json_parser():
    n, terms = ChannelJsonParser().parse('{"n": 2, "terms": [{"pauli": "II", "w": 0.9}, {"pauli": "ZZ", "w": 0.1}]}')
    assert n == 2
    assert terms == [(PauliString("II"), 0.9), (PauliString("ZZ"), 0.1)]


@pytest.mark.parametrize("text", [
    "not json",
    '{"terms": []}',
    '{"n": 0, "terms": []}',
    '{"n": 1, "terms": {}}',
    '{"n": 1, "terms": [{"pauli": "I"}]}',
    '{"n": 1, "terms": [{"pauli": "I", "w": "1"}]}',
])
def test_channel_json_parser_errors(text):
    with pytest.raises(ValidationError):
        ChannelJsonParser().parse(text)


def test_validate_weighted_terms_lists_every_problem():
    error = validate_weighted_terms([("I", -1.0), ("Z", float("nan"))], [1, 2])
    assert "negative weight" in error
    assert "non-finite" in error
    assert "inconsistent qubit counts" in error
    assert validate_weighted_terms([("I", 1.0)], [1]) is None


def test_ordered_map_keeps_input_order():
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
    assert ordered_map(lambda x: x + 1, items, workers=1) == [x + 1 for x in items]
