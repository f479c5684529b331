import random

import pytest
from hypothesis import given, settings, strategies as st

from idpdawtl import constructions as C
from idpdawtl import engine, model
from idpdawtl import langlib as L
from idpdawtl.langlib import fixture
from idpdawtl.randomgen import random_automaton


def lang(aut, n):
    return engine.enumerate_language(aut, n)


def machine(lines, push="a", pop="b", state=""):
    head = (f"letters.push: {push}\nletters.pop: {pop}\nletters.state: {state}\n"
            "stack: A\nstates: q0 q1\ninitial: q0\n")
    return model.validate(head + "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# returning -> non-returning

def test_nonreturning_doubles_states():
    aut = fixture("exa21_literal").automaton
    nr = C.to_nonreturning(aut)
    assert len(aut.states) == 4
    assert len(nr.states) == 8
    assert nr.mode == model.NON_RETURNING


def test_nonreturning_language_exa21():
    aut = fixture("exa21").automaton
    assert lang(C.to_nonreturning(aut), 7) == lang(aut, 7)


def test_nonreturning_empty():
    assert lang(C.to_nonreturning(fixture("m_empty").automaton), 8) == set()


def test_nonreturning_refuses_nonreturning_input():
    with pytest.raises(ValueError):
        C.to_nonreturning(fixture("exa22").automaton)


def test_primed_names_avoid_collisions():
    aut = machine(["trans: q0 a _ -> q1 push A", "trans: q1 end A -> accept"])
    aut = model.rename_states(aut, {"q0": "q0", "q1": "q0'"})
    nr = C.to_nonreturning(aut)
    assert len(nr.states) == 4
    assert lang(nr, 3) == lang(aut, 3) == {("a",)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_nonreturning_random(seed):
    aut = random_automaton(seed)
    assert lang(C.to_nonreturning(aut), 5) == lang(aut, 5)


# ---------------------------------------------------------------------------
# union

def test_union_of_exa22_branches():
    u = C.union_compatible(fixture("exa22_l1").automaton, fixture("exa22_l2").automaton)
    assert lang(u, 6) == lang(fixture("exa22").automaton, 6)


def test_union_of_empty():
    e = fixture("m_empty").automaton
    assert lang(C.union_compatible(e, e), 6) == set()


def test_union_abc_astar():
    u = C.union_compatible(fixture("m_abc_counts").automaton, fixture("m_astar").automaton)
    for w in engine.words(L.ABC, 7):
        assert engine.accepts(u, w) == (L.l_counts_abc(w) or L.reg_astar(w)), w


def test_union_refuses_other_signatures():
    with pytest.raises(C.IncompatibleSignatures):
        C.union_compatible(fixture("exa21").automaton, fixture("m_abc_counts").automaton)


def test_union_refuses_other_initial_translucency():
    a = machine(["translucent: q0 ->", "trans: q0 end _ -> accept"])
    b = machine(["translucent: q0 -> b", "trans: q0 end _ -> accept"])
    with pytest.raises(C.IncompatibleInitialTranslucency):
        C.union_compatible(a, b)


def test_union_accept_dominates():
    a = machine(["trans: q0 a _ -> accept"])
    b = machine(["trans: q0 a _ -> q1 push A"])
    u = C.union_compatible(a, b)
    assert u.outcome(u.initial, "a", model.BOTTOM) is model.ACCEPT


def thinned(aut, seed):
    """``aut`` with a random half of its entries dropped; same signature and start."""
    rng = random.Random(seed)
    keep = lambda tab: {k: v for k, v in tab.items() if rng.random() < 0.5}  # noqa: E731
    return model.build(aut.states, aut.initial, aut.signature, aut.stack_alphabet, aut.tau,
                       keep(aut.delta_D), keep(aut.delta_R), keep(aut.delta_N), aut.mode)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(0, 100_000), st.integers(0, 100_000))
def test_union_is_exact_on_random_pairs(s1, s2, s3):
    base = random_automaton(s1, nonempty_within=4)
    a, b = thinned(base, s2), thinned(base, s3)
    u = C.union_compatible(a, b)
    assert lang(u, 4) == lang(a, 4) | lang(b, 4)


# ---------------------------------------------------------------------------
# letter-equivalent NPDA

def test_npda_examples_exa21():
    aut = fixture("exa21").automaton
    npda = C.letter_equivalent_npda(aut)
    assert C.npda_accepts(npda, ["b", "b", "a"])
    assert not C.npda_accepts(npda, [])
    assert L.parikh_upto(npda, 6) == L.parikh_upto(aut, 6)
    assert C.npda_language(npda, 6) <= lang(aut, 6)


def test_npda_immediate_accept():
    aut = machine(["trans: q0 end _ -> accept"])
    assert C.npda_accepts(C.letter_equivalent_npda(aut), [])


def test_npda_without_translucency_is_exact():
    aut = fixture("m_fin").automaton
    npda = C.letter_equivalent_npda(aut)
    assert C.npda_language(npda, 5) == lang(aut, 5)


def test_npda_cap():
    with pytest.raises(C.ConstructionTooLarge):
        C.letter_equivalent_npda(fixture("exa21").automaton, cap=2)


def test_npda_refuses_nonreturning():
    with pytest.raises(ValueError):
        C.letter_equivalent_npda(fixture("exa22").automaton)


def test_npda_text_form():
    text = C.dumps_npda(C.letter_equivalent_npda(fixture("m_fin").automaton))
    assert text.startswith("kind: npda\n")
    assert "drain:" in text
    assert "f0{} a _ -> f1{} push A" in text


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_npda_random_properties(seed):
    aut = random_automaton(seed)
    npda = C.letter_equivalent_npda(aut)
    sub = C.npda_language(npda, 5)
    full = lang(aut, 5)
    assert sub <= full
    assert L.parikh_image(sub, aut.alphabet) == L.parikh_image(full, aut.alphabet)
