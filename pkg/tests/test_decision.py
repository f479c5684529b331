import json

import pytest
from hypothesis import given, settings, strategies as st

from idpdawtl import constructions as C
from idpdawtl import decision as D
from idpdawtl import engine, model
from idpdawtl.langlib import fixture
from idpdawtl.randomgen import random_automaton


def grammar_of(name):
    return D.npda_to_cfg(C.letter_equivalent_npda(fixture(name).automaton))


# ---------------------------------------------------------------------------
# grammars

@pytest.mark.parametrize("text, empty, finite", [
    ("S -> a S", True, True),
    ("S -> a", False, True),
    ("S -> a S | a", False, False),
    ("S -> a | b", False, True),
    ("S -> A B\nA -> a A | eps\nB -> b", False, False),
    ("S -> A A\nA -> eps", False, True),
    ("S -> A\nA -> B\nB -> A | c", False, True),
])
def test_small_grammars(text, empty, finite):
    g = D.CFG.from_text(text)
    assert D.cfg_empty(g) is empty
    assert D.cfg_finite(g) is finite


def test_cfg_rejects_undeclared_symbols():
    with pytest.raises(ValueError):
        D.CFG({"S"}, {"a"}, "S", {"S": {("x",)}})


def test_cnf_preserves_words():
    g = D.CFG.from_text("S -> a S b | A\nA -> c A | eps")
    cnf = D.to_cnf(g)
    words = D.cfg_words(g, 6)
    assert D.cfg_words(cnf.grammar, 6) == words - {()}
    assert cnf.has_empty


def test_shortest_words_tie_break():
    g = D.CFG.from_text("S -> b a | a b | a b c")
    assert D.shortest_words(g)["S"] == ("a", "b")


def test_grammar_of_empty_machine():
    assert D.cfg_empty(grammar_of("m_empty"))


def test_grammar_of_exa21():
    g = grammar_of("exa21")
    assert not D.cfg_empty(g)
    assert ("b", "b", "a") in D.cfg_words(g, 3)


def test_grammar_of_epsilon_machine():
    aut = model.validate("letters.push: a\nletters.pop:\nletters.state:\nstack: A\n"
                         "states: q0\ninitial: q0\ntranslucent: q0 ->\n"
                         "trans: q0 end _ -> accept\n")
    g = D.npda_to_cfg(C.letter_equivalent_npda(aut))
    assert D.cfg_words(g, 5) == {()}


def test_grammar_of_m_fin_is_finite():
    assert D.cfg_finite(grammar_of("m_fin"))


@pytest.mark.parametrize("name", ["exa21", "m_L1", "m_L2", "m_union_L1L2", "m_fin",
                                  "m_abc_counts", "m_astar", "m_empty"])
def test_grammar_agrees_with_npda(name):
    assert D.npda_cfg_agree(C.letter_equivalent_npda(fixture(name).automaton), 6)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_grammar_agrees_with_npda_random(seed):
    assert D.npda_cfg_agree(C.letter_equivalent_npda(random_automaton(seed)), 5)


# ---------------------------------------------------------------------------
# reports

def test_emptiness_reports():
    r = D.emptiness(fixture("exa21").automaton)
    assert r.answer is False and r.exit_code == 1
    assert engine.accepts(fixture("exa21").automaton, r.witness)
    assert D.emptiness(fixture("m_empty").automaton).answer is True
    e = fixture("m_empty").automaton
    assert D.emptiness(C.union_compatible(e, e)).answer is True


def test_finiteness_reports():
    r = D.finiteness(fixture("exa21").automaton)
    assert r.answer is False
    assert "pumping cycle" in r.detail
    assert D.finiteness(fixture("m_fin").automaton).answer is True
    assert D.finiteness(fixture("m_empty").automaton).answer is True


def test_report_refuses_nonreturning():
    with pytest.raises(D.ModeError):
        D.emptiness(fixture("exa22").automaton)


def test_report_json_and_text():
    r = D.emptiness(fixture("m_fin").automaton)
    data = json.loads(r.to_json())
    assert data == {"question": "emptiness", "answer": False, "witness": "a",
                    "bound": None, "detail": data["detail"]}
    assert r.format().splitlines()[:2] == ["emptiness: false", "witness: a"]


@pytest.mark.parametrize("word, expected", [("a b", True), ("a b c", False), ("", False)])
def test_complement_examples(word, expected):
    assert D.complement_accepts(fixture("m_abc_counts").automaton, word.split()) is expected


def test_complement_needs_determinism():
    with pytest.raises(engine.NondeterministicError):
        D.complement_accepts(fixture("exa21").automaton, [])


def test_bounded_universality():
    r = D.bounded_universality(fixture("m_astar").automaton, 4)
    assert r.answer is False and r.witness == ("b", "a")
    everything = model.validate("letters.push: a\nletters.pop:\nletters.state:\nstack: A\n"
                                "states: q0\ninitial: q0\ntranslucent: q0 -> a\n"
                                "trans: q0 end _ -> accept\ntrans: q0 end A -> accept\n")
    r = D.bounded_universality(everything, 5)
    assert r.answer == D.Unknown(5) and r.exit_code == 3


def test_bounded_equivalence():
    ex = fixture("exa21").automaton
    assert D.bounded_equivalence(ex, ex, 6).answer == D.Unknown(6)
    with pytest.raises(D.ModeError):
        D.bounded_equivalence(ex, C.to_nonreturning(ex), 4)
    assert isinstance(D.bounded_equivalence(ex, C.to_nonreturning(ex), 5,
                                            cross_mode=True).answer, D.Unknown)


def test_bounded_inclusion_finds_counterexample():
    r = D.bounded_inclusion(fixture("exa21_literal").automaton, fixture("exa21").automaton, 3)
    assert r.answer is False and r.witness == ("b",)
    r = D.bounded_inclusion(fixture("exa21").automaton, fixture("exa21_literal").automaton, 5)
    assert isinstance(r.answer, D.Unknown)
