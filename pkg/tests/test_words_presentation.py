import re
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xxlartin.presentation import (
    GraphParseError,
    artin_presentation,
    build_word,
    classify,
    parse_graph,
    serialize_graph,
)
from xxlartin.words import Word, alternating, parse_compact

DATA = Path(__file__).parent / "data"

letters = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from((1, -1))), max_size=12)


def test_parse_roundtrip_and_powers():
    w = Word.parse("a b a b^-1 t^-2 u")
    assert str(w) == "a b a b^-1 t^-2 u"
    assert w.exponent_sum() == 1
    assert w.exponent_sum({"a": 1, "b": 1, "t": 2, "u": 5}) == 3
    assert Word.parse("1") == Word() == Word.parse("")
    with pytest.raises(ValueError):
        Word.parse("a^x")


def test_products_do_not_cancel():
    a = Word.parse("a")
    assert len(a * a.inverse()) == 2
    assert (a * a.inverse()).free_reduce() == Word()


@given(letters)
def test_inverse_and_reduction(ls):
    w = Word(tuple(ls))
    assert (w * w.inverse()).free_reduce() == Word()
    r = w.free_reduce()
    assert r.is_freely_reduced()
    assert r.free_reduce() == r
    assert r.exponent_sum() == w.exponent_sum()


@given(letters)
def test_compact_roundtrip(ls):
    w = Word(tuple(ls))
    assert parse_compact(w.compact()) == w


@pytest.mark.parametrize("text, expected", [
    ("abAB", "a b a^-1 b^-1"),
    ("(ab)^2", "a b a b"),
    ("(ab)^-1", "b^-1 a^-1"),
    ("a^3 b", "a^3 b"),
    ("((ab)^2 a)^1", "a b a b a"),
    ("1", "1"),
])
def test_parse_compact(text, expected):
    assert str(parse_compact(text)) == expected


@pytest.mark.parametrize("text, message", [
    ("(ab", "unbalanced '('"),
    ("ab)", "unbalanced ')'"),
    ("^2", "exponent without a base"),
    ("abc", "letter 'c'"),
])
def test_parse_compact_errors(text, message):
    with pytest.raises(ValueError, match=re.escape(message)):
        parse_compact(text)


def test_alternating_words():
    assert str(alternating("a", "b", 5)) == "a b a b a"
    assert build_word("b", "a", 4).compact() == "baba"
    with pytest.raises(ValueError):
        build_word("a", "a", 5)


def test_graph_file_order_and_serialization():
    g = parse_graph((DATA / "k4_mixed.graph").read_text())
    assert g.vertices == ("a", "b", "c", "d")
    assert [e.label for e in g.edges] == [5, 6, 7, 8, 5, 6]
    assert parse_graph(serialize_graph(g)) == g


def test_isolated_vertices_and_comments():
    g = parse_graph("# three circles\nvertex a\nvertex b  # trailing\nvertex c\n")
    assert g.vertices == ("a", "b", "c")
    assert classify(g).edgeless and classify(g).is_xxl


@pytest.mark.parametrize("text, message", [
    ("a b 5\nb b 5", "line 2: loop edge at b"),
    ("a b 5\nb a 6", "duplicate edge"),
    ("a b x", "not an integer"),
    ("a b 1", "label 1 < 2"),
    ("a b", "expected"),
    ("vertex 9z", "invalid vertex name"),
])
def test_graph_errors(text, message):
    with pytest.raises(GraphParseError, match=message):
        parse_graph(text)


@pytest.mark.parametrize("name, kind, rank", [
    ("triangle555", "XXL", 3),
    ("triangle545", "extra-large", 3),
    ("k4_5", "XXL", 4),
    ("edge5", "XXL", 2),
    ("edgeless3", "XXL", 3),
])
def test_classification(name, kind, rank):
    t = classify(parse_graph((DATA / f"{name}.graph").read_text()))
    assert (t.kind, t.rank) == (kind, rank)


def test_classification_ladder():
    assert classify(parse_graph("a b 3")).kind == "large"
    assert classify(parse_graph("a b 2\nb c 2")).kind == "right-angled"
    assert classify(parse_graph("a b 2\nb c 5")).kind == "none"


def test_presentation_text():
    p = artin_presentation(parse_graph("a b 5"))
    assert str(p) == "< a b | ababa = babab >"
