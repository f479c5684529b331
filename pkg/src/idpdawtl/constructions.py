"""Automaton transformations.

* :func:`to_nonreturning` simulates a returning machine in non-returning mode
  with a primed copy of every state.
* :func:`union_compatible` joins two machines with a nondeterministic first move.
* :func:`letter_equivalent_npda` builds an ordinary left-to-right NPDA whose
  language is a letter-equivalent subset of a returning machine's language.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import model
from .model import ACCEPT, BOTTOM, END, POP, PUSH, Automaton


class IncompatibleSignatures(ValueError):
    pass


class IncompatibleInitialTranslucency(ValueError):
    pass


class ConstructionTooLarge(RuntimeError):
    pass


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def _redirect(val, is_push, mapping):
    if val is ACCEPT:
        return ACCEPT
    if is_push:
        return {(mapping[p], sym) for p, sym in val}
    return {mapping[p] for p in val}


# ---------------------------------------------------------------------------
# returning -> non-returning

def to_nonreturning(aut: Automaton) -> Automaton:
    """Non-returning machine with the same language as the returning ``aut``.

    Every move lands in a primed copy that sees no letter at all, so its only
    option is an endmarker move back to the unprimed state with the head at
    the left end.
    """
    if not aut.returning:
        raise ValueError("to_nonreturning expects a returning automaton")
    taken = set(aut.states) | set(aut.alphabet)
    primed = {}
    for q in sorted(aut.states):
        primed[q] = _fresh(q + "'", taken)
        taken.add(primed[q])
    tau = dict(aut.tau)
    for q in aut.states:
        tau[primed[q]] = aut.alphabet
    delta_D = {k: _redirect(v, True, primed) for k, v in aut.delta_D.items()}
    delta_R = {k: _redirect(v, False, primed) for k, v in aut.delta_R.items()}
    delta_N = {k: _redirect(v, False, primed) for k, v in aut.delta_N.items()}
    for q in aut.states:
        for z in aut.stack_alphabet | {BOTTOM}:
            delta_N[(primed[q], END, z)] = {q}
    return model.build(set(aut.states) | set(primed.values()), aut.initial, aut.signature,
                       aut.stack_alphabet, tau, delta_D, delta_R, delta_N,
                       model.NON_RETURNING)


# ---------------------------------------------------------------------------
# union

def union_compatible(a: Automaton, b: Automaton) -> Automaton:
    """Disjoint union with a fresh initial state that guesses the branch.

    When one branch accepts outright on a key where the other has targets,
    the fresh state accepts: an accepting branch exists, and that suffices.
    """
    if not model.signatures_compatible(a, b):
        raise IncompatibleSignatures("the two automata have different signatures")
    if a.mode != b.mode:
        raise IncompatibleSignatures("the two automata run in different modes")
    if a.tau[a.initial] != b.tau[b.initial]:
        raise IncompatibleInitialTranslucency(
            "initial states see different letters; the union is not attempted")
    left = model.rename_states(a, {q: f"L.{q}" for q in a.states})
    right = model.rename_states(b, {q: f"R.{q}" for q in b.states})
    taken = set(left.states) | set(right.states) | set(a.alphabet)
    start = _fresh("u0", taken)
    tables = []
    for name in ("delta_D", "delta_R", "delta_N"):
        tl, tr = getattr(left, name), getattr(right, name)
        merged = dict(tl)
        merged.update(tr)
        init_entries = {}
        for table, init in ((tl, left.initial), (tr, right.initial)):
            for (q, x, z), val in table.items():
                if q != init:
                    continue
                key = (start, x, z)
                old = init_entries.get(key, frozenset())
                if old is ACCEPT or val is ACCEPT:
                    init_entries[key] = ACCEPT
                else:
                    init_entries[key] = old | val
        merged.update(init_entries)
        tables.append(merged)
    tau = dict(left.tau)
    tau.update(right.tau)
    tau[start] = a.tau[a.initial]
    return model.build(set(left.states) | set(right.states) | {start}, start, a.signature,
                       a.stack_alphabet | b.stack_alphabet, tau, *tables, a.mode)


# ---------------------------------------------------------------------------
# letter-equivalent ordinary NPDA

DRAIN = "drain"
DEFAULT_STATE_CAP = 1 << 16


@dataclass(frozen=True)
class OrdinaryNPDA:
    """Input-driven NPDA reading strictly left to right, without translucency.

    States are pairs ``(q, S)``; ``q`` is :data:`DRAIN` for the drain states.
    ``moves`` maps ``(state, letter, top)`` to targets shaped as in
    :class:`~idpdawtl.model.Automaton`, ``silent`` maps ``(state, top)`` to
    target states and never touches the stack.
    """
    states: frozenset
    initial: tuple
    signature: model.Signature
    stack_alphabet: frozenset
    moves: dict
    silent: dict
    drain: frozenset

    @property
    def alphabet(self) -> frozenset:
        return self.signature.alphabet


def state_name(state) -> str:
    q, s = state
    return f"{q}{{{','.join(sorted(s))}}}"


def letter_equivalent_npda(aut: Automaton, cap: int = DEFAULT_STATE_CAP) -> OrdinaryNPDA:
    """NPDA accepting, for each accepted word, the order in which it was consumed.

    ``S`` collects the states at which endmarker moves have fired.  A letter
    read later must have been translucent for each of them, since an
    endmarker move needs all remaining letters invisible.  Letters never
    consumed before acceptance are read at the end in a drain state.
    Only reachable states are built; more than ``cap`` of them is an error.
    """
    if not aut.returning:
        raise ValueError("letter_equivalent_npda expects a returning automaton")
    bound = len(aut.states) * 2 ** len(aut.states)
    alphabet = sorted(aut.alphabet)
    tops = sorted(aut.stack_alphabet) + [BOTTOM]
    drain_sym = min(aut.stack_alphabet) if aut.stack_alphabet else "drain_sym"

    def allowed(a, s):
        return all(a in aut.tau[p] for p in s)

    start = (aut.initial, frozenset())
    states = {start}
    queue = deque([start])
    moves, silent, drains = {}, {}, set()

    def reach(st):
        if st[0] == DRAIN:
            drains.add(st)
        if st not in states:
            states.add(st)
            if len(states) > cap:
                raise ConstructionTooLarge(
                    f"more than {cap} reachable states (worst case |Q|*2^|Q| = {bound})")
            queue.append(st)

    while queue:
        st = queue.popleft()
        q, s = st
        if q == DRAIN:
            drains.add(st)
            for a in alphabet:
                if not allowed(a, s):
                    continue
                cls = aut.letter_class(a)
                for z in tops:
                    moves[(st, a, z)] = frozenset({(st, drain_sym)} if cls == PUSH else {st})
            continue
        for z in tops:
            for a in alphabet:
                if a in aut.tau[q] or not allowed(a, s):
                    continue
                val = aut.outcome(q, a, z)
                if val is None:
                    continue
                cls = aut.letter_class(a)
                if val is ACCEPT:
                    tgt = (DRAIN, s)
                    reach(tgt)
                    moves[(st, a, z)] = frozenset({(tgt, drain_sym)} if cls == PUSH else {tgt})
                    continue
                out = set()
                for t in val:
                    if cls == PUSH:
                        p, sym = t
                        nxt = (p, s)
                        out.add((nxt, sym))
                    else:
                        nxt = (t, s)
                        out.add(nxt)
                    reach(nxt)
                moves[(st, a, z)] = frozenset(out)
            val = aut.outcome(q, END, z)
            if val is None:
                continue
            s2 = s | {q}
            targets = [(DRAIN, s2)] if val is ACCEPT else [(p, s2) for p in val]
            for nxt in targets:
                reach(nxt)
            silent[(st, z)] = frozenset(targets)
    stack = aut.stack_alphabet | ({drain_sym} if not aut.stack_alphabet else set())
    return OrdinaryNPDA(frozenset(states), start, aut.signature, frozenset(stack),
                        moves, silent, frozenset(drains))


def _closure(npda: OrdinaryNPDA, confs):
    """Close a set of ``(state, stack)`` configurations under silent moves."""
    seen = set(confs)
    todo = list(confs)
    while todo:
        st, stack = todo.pop()
        top = stack[0] if stack else BOTTOM
        for p in npda.silent.get((st, top), ()):
            conf = (p, stack)
            if conf not in seen:
                seen.add(conf)
                todo.append(conf)
    return seen


def _read(npda: OrdinaryNPDA, confs, a):
    cls = npda.signature.letter_class(a)
    out = set()
    for st, stack in confs:
        top = stack[0] if stack else BOTTOM
        for t in npda.moves.get((st, a, top), ()):
            if cls == PUSH:
                p, sym = t
                out.add((p, (sym,) + stack))
            elif cls == POP:
                out.add((t, stack[1:]))
            else:
                out.add((t, stack))
    return _closure(npda, out)


def npda_accepts(npda: OrdinaryNPDA, word) -> bool:
    """True iff some run reads all of ``word`` and ends in a drain state."""
    confs = _closure(npda, {(npda.initial, ())})
    for a in word:
        if a not in npda.alphabet:
            return False
        confs = _read(npda, confs, a)
        if not confs:
            return False
    return any(st in npda.drain for st, _ in confs)


def npda_language(npda: OrdinaryNPDA, max_len: int) -> set:
    """Accepted words up to ``max_len``, by a prefix search that prunes dead prefixes."""
    out = set()
    letters = sorted(npda.alphabet)

    def go(prefix, confs):
        if any(st in npda.drain for st, _ in confs):
            out.add(prefix)
        if len(prefix) == max_len:
            return
        for a in letters:
            nxt = _read(npda, confs, a)
            if nxt:
                go(prefix + (a,), nxt)

    go((), _closure(npda, {(npda.initial, ())}))
    return out


def dumps_npda(npda: OrdinaryNPDA) -> str:
    """Text form: the automaton format plus ``silent:`` lines and a ``drain:`` section."""
    sig = npda.signature
    lines = [
        "kind: npda",
        "letters.push: " + " ".join(sorted(sig.push)),
        "letters.pop: " + " ".join(sorted(sig.pop)),
        "letters.state: " + " ".join(sorted(sig.state)),
        "stack: " + " ".join(sorted(npda.stack_alphabet)),
        "states: " + " ".join(sorted(state_name(s) for s in npda.states)),
        f"initial: {state_name(npda.initial)}",
    ]
    for (st, a, z), val in sorted(npda.moves.items(), key=lambda kv: (state_name(kv[0][0]),) + kv[0][1:]):
        head = f"trans: {state_name(st)} {a} {z} ->"
        cls = sig.letter_class(a)
        if cls == PUSH:
            lines += sorted(f"{head} {state_name(p)} push {sym}" for p, sym in val)
        else:
            action = "pop" if cls == POP else "none"
            lines += sorted(f"{head} {state_name(p)} {action}" for p in val)
    for (st, z), val in sorted(npda.silent.items(), key=lambda kv: (state_name(kv[0][0]), kv[0][1])):
        lines += sorted(f"silent: {state_name(st)} {z} -> {state_name(p)}" for p in val)
    lines.append("drain: " + " ".join(sorted(state_name(s) for s in npda.drain)))
    return "\n".join(line.rstrip() for line in lines) + "\n"
