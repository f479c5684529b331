"""Desk-scale acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (collected again in the terminal
summary) and fails when its criterion is not met or its time budget is
exceeded.
"""

import random
import time

import pytest

import chains
from idpdawtl import constructions as C
from idpdawtl import decision as D
from idpdawtl import engine, model
from idpdawtl import langlib as L
from idpdawtl import valc as V
from idpdawtl.langlib import fixture
from idpdawtl.randomgen import random_automaton

SEED = 20240601


def disagreements(aut, oracle_name, ws):
    return [w for w in ws if engine.accepts(aut, w) != L.oracle(oracle_name, w)]


def test_c01_exa21_matches_l_mismatch(verdict):
    t = time.perf_counter()
    aut = fixture("exa21").automaton
    ws = list(engine.words(L.ABH, 9))
    bad = disagreements(aut, "l_mismatch", ws)
    dt = time.perf_counter() - t
    verdict("criterion 1 (exa21 = l_mismatch on words <= 9)",
            len(ws) == 29_524 and not bad and dt < 120,
            f"{len(ws)} words, {len(bad)} disagreements, {dt:.1f}s")


def test_c02_exa22_matches_union(verdict):
    t = time.perf_counter()
    aut = fixture("exa22").automaton
    alphabet = sorted(L.EXA22)
    bad = disagreements(aut, "l_union_exa22", engine.words(alphabet, 6))
    rng = random.Random(SEED)
    sample = (tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
              for _ in range(100_000))
    bad_random = disagreements(aut, "l_union_exa22", sample)
    dt = time.perf_counter() - t
    verdict("criterion 2 (exa22 = l_union_exa22, exhaustive <= 6 and 1e5 random <= 12)",
            len(alphabet) == 6 and not bad and not bad_random and dt < 300,
            f"{len(bad)} + {len(bad_random)} disagreements, {dt:.1f}s")


def test_c03_nonreturning_simulation(verdict):
    names = ["exa21", "m_L1", "m_L2", "m_abc_counts", "m_empty", "m_fin"]
    machines = [fixture(n).automaton for n in names]
    machines += [random_automaton(SEED + i, max_states=4, max_letters=3, max_stack=2,
                                  nonempty_within=4 if i % 2 else None)
                 for i in range(100)]
    bad = []
    nonempty = 0
    for aut in machines:
        a = engine.enumerate_language(aut, 7)
        b = engine.enumerate_language(C.to_nonreturning(aut), 7)
        nonempty += bool(a)
        if a != b:
            bad.append(sorted(a ^ b)[:3])
    verdict("criterion 3 (to_nonreturning keeps the language up to length 7)",
            not bad, f"{len(machines)} machines ({nonempty} non-empty), "
                     f"{len(bad)} discrepancies")


def test_c04_letter_equivalent_npda(verdict):
    machines = [fixture("exa21").automaton, fixture("m_union_L1L2").automaton]
    machines += [random_automaton(SEED + 1000 + i, nonempty_within=4) for i in range(50)]
    subset_violations = parikh_violations = 0
    for aut in machines:
        npda = C.letter_equivalent_npda(aut)
        sub = C.npda_language(npda, 7)
        full = engine.enumerate_language(aut, 7)
        subset_violations += len(sub - full)
        parikh_violations += L.parikh_image(sub, aut.alphabet) != L.parikh_image(full, aut.alphabet)
    verdict("criterion 4 (letter-equivalent NPDA: subset and Parikh up to length 7)",
            subset_violations == 0 and parikh_violations == 0,
            f"{len(machines)} machines, {subset_violations} subset and "
            f"{parikh_violations} Parikh violations")


def test_c05_emptiness_and_finiteness(verdict):
    expected = {"exa21": (False, False), "m_empty": (True, True),
                "m_fin": (False, True), "m_union_L1L2": (False, False)}
    problems = []
    for name, (empty, finite) in expected.items():
        aut = fixture(name).automaton
        e, f = D.emptiness(aut), D.finiteness(aut)
        if e.answer is not empty or f.answer is not finite:
            problems.append(f"{name}: got empty={e.answer} finite={f.answer}")
        for rep in (e, f):
            if not empty and (rep.witness is None or not engine.accepts(aut, rep.witness)):
                problems.append(f"{name}: {rep.question} witness not verified")
        if empty and engine.enumerate_language(aut, 7):
            problems.append(f"{name}: reported empty but accepts a short word")
    verdict("criterion 5 (emptiness and finiteness reports)", not problems,
            "; ".join(problems) or "4 machines, all witnesses engine-verified")


def test_c06_deterministic_complement(verdict):
    bad = overlong = 0
    runs = 0
    for name in ["m_abc_counts", "m_L1", "m_L2"]:
        aut = fixture(name).automaton
        for w in engine.words(aut.alphabet, 8):
            runs += 1
            bound = (len(w) + 1) * (len(aut.states) + 1)
            verdict_ = engine.run_deterministic(aut, w)
            overlong += len(verdict_.trace) > bound
            bad += D.complement_accepts(aut, w) == engine.accepts(aut, w)
    verdict("criterion 6 (complement xor accepts up to length 8; runs halt)",
            bad == 0 and overlong == 0,
            f"{runs} runs, {bad} xor failures, {overlong} over the step bound")


def test_c07_intersection_fixtures(verdict):
    a, b = fixture("m_abc_counts").automaton, fixture("m_astar").automaton
    compatible = model.signatures_compatible(a, b)
    bad = [w for w in engine.words(L.ABC, 9)
           if (engine.accepts(a, w) and engine.accepts(b, w)) != L.l_abc(w)]
    verdict("criterion 7 (compatible signatures; conjunction = l_abc up to length 9)",
            compatible and not bad,
            f"compatible={compatible}, {len(bad)} disagreements")


def test_c08_invalc(verdict):
    t = time.perf_counter()
    lba = V.toy_lba()
    m = V.build_invalc(lba)
    rng = random.Random(SEED)
    inputs = [("a", "b") * k for k in range(1, 6)]
    valid = []
    for w in inputs:
        valid.append(V.valc_generate(lba, w))
        valid += [V.valc_generate(lba, w, rng) for _ in range(10)]
    assert all(w is not None and V.in_valcp(lba, w) for w in valid)
    wrongly_accepted = sum(engine.accepts(m, w) for w in valid)

    mutants = [V.mutate_valid(valid[i % len(valid)], SEED + i, lba) for i in range(250)]
    missed = sum(not engine.accepts(m, w) for w in mutants)

    reduced = ["a", "a'", "a''", "q0", "c"]
    exhaustive = list(engine.words(reduced, 6))
    exh_bad = sum(engine.accepts(m, w) == V.in_valcp(lba, w) for w in exhaustive)

    fuzz = chains.sample(lba, rng, 2000)
    fuzz_valid = sum(V.in_valcp(lba, w) for w in fuzz)
    fuzz_bad = sum(engine.accepts(m, w) == V.in_valcp(lba, w) for w in fuzz)
    dt = time.perf_counter() - t
    ok = (len(inputs) >= 5 and wrongly_accepted == 0 and len(mutants) >= 200 and missed == 0
          and exh_bad == 0 and fuzz_bad == 0 and dt < 600)
    verdict("criterion 8 (INVALC' for the toy LBA)", ok,
            f"{len(valid)} valid words from {len(inputs)} inputs ({wrongly_accepted} accepted), "
            f"{len(mutants)} mutants ({missed} missed), {len(exhaustive)} reduced words "
            f"({exh_bad} disagreements), {len(fuzz)} chain words with {fuzz_valid} valid "
            f"({fuzz_bad} disagreements), {dt:.1f}s")


def test_c09_nsl_gaps(verdict):
    lengths = L.nsl_length_probe(len(L.nsl_word(8)))
    gaps = [b - a for a, b in zip(lengths, lengths[1:])]
    ok = len(lengths) == 9 and all(x < y for x, y in zip(gaps, gaps[1:]))
    verdict("criterion 9 (l_nsl length gaps strictly grow for k = 1..8)", ok,
            f"lengths {lengths}")


def test_c10_m_nsl_fixture(verdict):
    verdict.skip("criterion 10 (stretch m_nsl fixture)",
                 "deferred: no m_nsl construction is available, and criteria 1-9 "
                 "form the full primary suite")
