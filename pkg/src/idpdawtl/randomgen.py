"""Seeded random automata for property tests and bounded cross-checks."""

from __future__ import annotations

import random

from . import model
from .engine import accepts, words
from .model import ACCEPT, BOTTOM, END, PUSH, POP


def random_automaton(seed, *, max_states=4, max_letters=3, max_stack=2,
                     mode=model.RETURNING, density=0.75, accept_rate=0.2,
                     branching=0.2, nonempty_within=None) -> model.Automaton:
    """A valid random machine; the same seed always gives the same machine.

    At least one letter is assigned to each class when there is room, so
    that push, pop and state moves all show up across a batch.  With
    ``nonempty_within=n`` the draw is repeated (from the same seeded stream)
    until the machine accepts some word of length <= n.
    """
    rng = random.Random(seed)
    while True:
        aut = _draw(rng, max_states, max_letters, max_stack, mode, density, accept_rate,
                    branching)
        if nonempty_within is None:
            return aut
        if any(accepts(aut, w) for w in words(aut.alphabet, nonempty_within)):
            return aut


def _draw(rng, max_states, max_letters, max_stack, mode, density, accept_rate, branching):
    n_states = rng.randint(1, max_states)
    n_letters = rng.randint(1, max_letters)
    n_stack = rng.randint(1, max_stack)
    states = [f"q{i}" for i in range(n_states)]
    letters = ["a", "b", "c"][:n_letters] if n_letters <= 3 else [f"x{i}" for i in range(n_letters)]
    stack = ["A", "B"][:n_stack] if n_stack <= 2 else [f"Z{i}" for i in range(n_stack)]
    classes = [PUSH, POP, model.STATE]
    rng.shuffle(classes)
    assign = {}
    for i, a in enumerate(letters):
        assign[a] = classes[i] if i < 3 else rng.choice(classes)
    sig = model.Signature(
        frozenset(a for a in letters if assign[a] == PUSH),
        frozenset(a for a in letters if assign[a] == POP),
        frozenset(a for a in letters if assign[a] == model.STATE))
    tau = {q: {a for a in letters if rng.random() < 0.3} for q in states}
    tables = {PUSH: {}, POP: {}, model.STATE: {}}
    tops = stack + [BOTTOM]

    def outcome(cls):
        if rng.random() < accept_rate:
            return ACCEPT
        k = 2 if rng.random() < branching else 1
        if cls == PUSH:
            return {(rng.choice(states), rng.choice(stack)) for _ in range(k)}
        return {rng.choice(states) for _ in range(k)}

    for q in states:
        for z in tops:
            for a in letters + [END]:
                if rng.random() >= density:
                    continue
                cls = model.STATE if a == END else assign[a]
                tables[cls][(q, a, z)] = outcome(cls)
    return model.build(states, "q0", sig, stack, tau, tables[PUSH], tables[POP],
                       tables[model.STATE], mode)
