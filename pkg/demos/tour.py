"""A short walk through the library on the bundled fixtures.

Run with ``python3 demos/tour.py``.  Everything printed is computed on the
spot; nothing is cached.
"""

from idpdawtl import constructions as C
from idpdawtl import decision as D
from idpdawtl import engine, model
from idpdawtl import langlib as L


def show(word):
    return " ".join(word) if word else "(empty)"


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    ex21 = L.fixture("exa21").automaton

    section("1. Running a machine with translucent letters")
    # State p cannot see 'a', so the b's are all pushed before any a is popped.
    word = "b b a".split()
    for k, st in enumerate(engine.accepting_trace(ex21, word), 1):
        print(st.format(k))
    print("accepted words up to length 4:",
          ", ".join(show(w) for w in engine.sort_words(engine.enumerate_language(ex21, 4))))

    section("2. The literal table versus the exact acceptor")
    literal = L.fixture("exa21_literal").automaton
    extra = [w for w in engine.words(L.ABH, 3)
             if engine.accepts(literal, w) and not L.l_mismatch(w)]
    print("accepted by the literal rules but outside the language:",
          ", ".join(show(w) for w in extra))

    section("3. Returning and non-returning mode")
    nr = C.to_nonreturning(ex21)
    rep = D.bounded_equivalence(ex21, nr, 6, cross_mode=True)
    verdict = "no difference" if rep.witness is None else f"differ on {show(rep.witness)}"
    print(f"{len(ex21.states)} states become {len(nr.states)}; up to length 6: {verdict}")

    section("4. Union of machines with identical signatures")
    u = C.union_compatible(L.fixture("m_abc_counts").automaton, L.fixture("m_astar").automaton)
    sample = ["a b c", "c b a", "a a c", "b a"]
    for w in sample:
        print(f"  {w:8} -> {engine.accepts(u, w.split())}")

    section("5. A letter-equivalent ordinary pushdown automaton")
    npda = C.letter_equivalent_npda(ex21)
    sub = C.npda_language(npda, 5)
    full = engine.enumerate_language(ex21, 5)
    print(f"{len(npda.states)} NPDA states; {len(sub)} of {len(full)} words up to length 5 kept;"
          " same Parikh image:",
          L.parikh_image(sub, ex21.alphabet) == L.parikh_image(full, ex21.alphabet))

    section("6. Emptiness and finiteness")
    for name in ["exa21", "m_fin", "m_empty"]:
        aut = L.fixture(name).automaton
        print(f"[{name}]")
        print("  " + D.emptiness(aut).format().replace("\n", "\n  "))
        print("  " + D.finiteness(aut).format().replace("\n", "\n  "))

    section("7. Complement of a deterministic machine")
    abc = L.fixture("m_abc_counts").automaton
    assert model.is_deterministic(abc)
    for w in ["a b c", "a b", ""]:
        print(f"  {w or '(empty)':6} in complement: {D.complement_accepts(abc, w.split())}")


if __name__ == "__main__":
    main()
