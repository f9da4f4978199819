import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xxlartin.dihedral import (
    DihedralParams,
    NormalForm,
    act_on_cover,
    center_generator,
    enumerate_ball,
    is_trivial,
    relator,
    rewrite,
    substitution_table,
    syllable_normal_form,
)
from xxlartin.words import Word, parse_compact

ab_words = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from((1, -1))), max_size=14).map(
    lambda ls: Word(tuple(ls)))


def test_params_by_parity():
    odd, even = DihedralParams(5), DihedralParams(6)
    assert (odd.parity, odd.p, odd.quotient_alphabet) == ("odd", 2, ("t", "u"))
    assert (even.parity, even.p, even.quotient_alphabet) == ("even", 3, ("a", "t"))
    assert odd.factor_orders == {"t": 5, "u": 2}
    assert even.factor_orders == {"a": 0, "t": 3}
    assert odd.center_weight == 10 and even.center_weight == 6
    assert DihedralParams(7).p == 3 and DihedralParams(8).p == 4


def test_small_m_rejected():
    with pytest.raises(ValueError, match="m >= 5"):
        DihedralParams(4)


@pytest.mark.parametrize("m, to_quotient, to_ab", [
    (5, {"a": "t^-2 u", "b": "u t^-2"}, {"t": "a b", "u": "a b a b a"}),
    (7, {"a": "t^-3 u", "b": "u t^-3"}, {"t": "a b", "u": "a b a b a b a"}),
    (6, {"a": "a", "b": "a^-1 t"}, {"a": "a", "t": "a b"}),
])
def test_substitution_tables(m, to_quotient, to_ab):
    table = substitution_table(DihedralParams(m))
    assert {k: str(v) for k, v in table.to_quotient.items()} == to_quotient
    assert {k: str(v) for k, v in table.to_ab.items()} == to_ab


@pytest.mark.parametrize("m", [5, 6, 7, 8, 9, 10])
def test_substitutions_are_mutually_inverse(m):
    params = DihedralParams(m)
    for g in params.quotient_alphabet:
        back = rewrite(rewrite(Word.parse(g), params, "ab"), params, "quotient")
        assert syllable_normal_form(back, params) == syllable_normal_form(Word.parse(g), params)
    for g in "ab":
        assert is_trivial(rewrite(rewrite(Word.parse(g), params, "quotient"), params, "ab")
                          * Word.parse(g).inverse(), params)


@pytest.mark.parametrize("m", [5, 6, 7, 8])
def test_relator_and_center(m):
    params = DihedralParams(m)
    assert is_trivial(relator(params), params)
    z = center_generator(params)
    rec = act_on_cover(z, params)
    assert rec.quotient_image == NormalForm(m, (), 1)
    assert rec.translation == params.center_weight
    for g in "ab":
        x = Word.parse(g)
        assert is_trivial(z * x * z.inverse() * x.inverse(), params)


@pytest.mark.parametrize("m, text, trivial", [
    (5, "(ab)^5 a (ab)^-5 A", True),
    (5, "ababaBABAB", True),
    (5, "a", False),
    (5, "abab", False),
    (6, "(ab)^3 a (ab)^-3 A", True),
    (6, "aba", False),
    (6, "abAB", False),
])
def test_word_problem_examples(m, text, trivial):
    assert is_trivial(parse_compact(text), DihedralParams(m)) is trivial


def test_records_m5():
    params = DihedralParams(5)
    rec = act_on_cover(parse_compact("a"), params)
    assert rec.translation == 1
    assert rec.quotient_image == NormalForm(5, (("t", 3), ("u", 1)), -1)
    assert str(act_on_cover(parse_compact("ab"), params).quotient_image) == "t"


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 6, 7, 8]), ab_words, ab_words)
def test_record_is_a_homomorphism(m, u, v):
    params = DihedralParams(m)
    assert act_on_cover(u * v, params) == act_on_cover(u, params) * act_on_cover(v, params)
    assert act_on_cover(u * v, params) == act_on_cover((u * v).free_reduce(), params)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 6, 7, 8]), ab_words)
def test_conjugated_relators_are_trivial(m, g):
    params = DihedralParams(m)
    r = relator(params)
    assert is_trivial(g * r * g.inverse(), params)
    assert is_trivial(g * r.inverse() * g.inverse() * r, params)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 6]), ab_words)
def test_normal_form_inverse(m, w):
    params = DihedralParams(m)
    nf = act_on_cover(w, params).quotient_image
    assert (nf * nf.inverse()) == NormalForm(m, (), 0)


def test_nonzero_exponent_sum_never_trivial():
    params = DihedralParams(5)
    rng = random.Random(7)
    for _ in range(200):
        w = Word(tuple((rng.choice("ab"), rng.choice((1, -1))) for _ in range(rng.randrange(1, 12))))
        if w.exponent_sum() != 0:
            assert not is_trivial(w, params)


@pytest.mark.parametrize("m", [5, 6])
def test_ball_oracle_small_radius(m):
    params = DihedralParams(m)
    ball = enumerate_ball(params, 4)
    assert ball.agreement(params)["conflicts"] == []
    # 1 + 4 + 12 + 36 + 108 freely reduced words, plus unreduced ones
    assert sum(len(c) for c in ball.classes) == sum(4 ** n for n in range(5))


def test_ball_radius_bounds():
    with pytest.raises(ValueError):
        enumerate_ball(DihedralParams(5), 9)
