"""Operational semantics: visibility scanning, single steps, acceptance search.

A configuration is ``(state, tape, head, stack)``.  ``tape`` holds the
unconsumed letters in input order, ``head`` is the scan start (always 0 in
returning mode) and ``stack`` lists pushdown symbols top first, with the
bottom marker left implicit.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .model import ACCEPT, BOTTOM, END, POP, PUSH, Automaton, is_deterministic

DEFAULT_CONFIG_CAP = 200_000


class ResourceLimitExceeded(RuntimeError):
    """A search explored more configurations than its cap allows."""


class Configuration(NamedTuple):
    state: str
    tape: tuple
    head: int
    stack: tuple

    @classmethod
    def initial(cls, aut: Automaton, word) -> "Configuration":
        return cls(aut.initial, tuple(word), 0, ())


@dataclass(frozen=True)
class Step:
    from_state: str
    consumed: str          # a letter or END
    top: str               # a stack symbol or BOTTOM
    action: str            # push(X) | pop | none | wrap
    to_state: object       # a state or ACCEPT
    after: Optional[Configuration] = None

    def format(self, k: int) -> str:
        target = "ACCEPT" if self.to_state is ACCEPT else self.to_state
        line = f"{k}: {self.from_state} --{self.consumed}/{self.top}--> {self.action} {target}"
        if self.after is not None:
            line += " | " + format_configuration(self.after)
        return line


def format_configuration(conf: Configuration) -> str:
    toks = list(conf.tape)
    toks.insert(conf.head, "^")
    tape = " ".join(toks).replace("^ ", "^")
    stack = " ".join(conf.stack + (BOTTOM,))
    return f'tape="{tape}" stack="{stack}"'


def scan_visible(aut: Automaton, conf: Configuration) -> Optional[int]:
    """Index of the first visible letter at or right of the head.

    Returns None when every remaining letter there is translucent, i.e. the
    endmarker is reached.
    """
    hidden = aut.tau[conf.state]
    tape = conf.tape
    for i in range(conf.head, len(tape)):
        if tape[i] not in hidden:
            return i
    return None


def _action(aut, letter, target):
    if letter == END:
        return "wrap"
    cls = aut.letter_class(letter)
    if cls == PUSH:
        return f"push({target[1]})" if target is not None else "push"
    return "pop" if cls == POP else "none"


def successors(aut: Automaton, conf: Configuration):
    """Yield ``(Step, next)`` for each move; ``next`` is a configuration or ACCEPT."""
    state, tape, head, stack = conf
    i = scan_visible(aut, conf)
    top = stack[0] if stack else BOTTOM
    letter = END if i is None else tape[i]
    out = aut.outcome(state, letter, top)
    if out is None:
        return
    if out is ACCEPT:
        yield Step(state, letter, top, _action(aut, letter, None), ACCEPT), ACCEPT
        return
    if letter == END:
        for p in sorted(out):
            nxt = Configuration(p, tape, 0, stack)
            yield Step(state, END, top, "wrap", p, nxt), nxt
        return
    rest = tape[:i] + tape[i + 1:]
    new_head = 0 if aut.returning else i
    cls = aut.letter_class(letter)
    for target in sorted(out):
        if cls == PUSH:
            p, sym = target
            nxt = Configuration(p, rest, new_head, (sym,) + stack)
        elif cls == POP:
            p = target
            nxt = Configuration(p, rest, new_head, stack[1:])
        else:
            p = target
            nxt = Configuration(p, rest, new_head, stack)
        yield Step(state, letter, top, _action(aut, letter, target), p, nxt), nxt


def step(aut: Automaton, conf: Configuration) -> set:
    """Successor set of ``conf``; may contain ACCEPT.  Empty when undefined."""
    return {nxt for _, nxt in successors(aut, conf)}


def accepts(aut: Automaton, word, max_configs: int = DEFAULT_CONFIG_CAP) -> bool:
    """Breadth-first search for an accepting computation on ``word``."""
    # Hand-inlined copy of successors(); this is the hot loop of every
    # bounded check in the package.
    table = aut._table
    cls = aut._cls
    tau = aut.tau
    returning = aut.returning
    start = (aut.initial, tuple(word), 0, ())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt_frontier = []
        for state, tape, head, stack in frontier:
            hidden = tau[state]
            i = head
            n = len(tape)
            while i < n and tape[i] in hidden:
                i += 1
            top = stack[0] if stack else BOTTOM
            if i == n:
                out = table.get((state, END, top))
                if out is None:
                    continue
                if out is ACCEPT:
                    return True
                succ = [(p, tape, 0, stack) for p in out]
            else:
                letter = tape[i]
                out = table.get((state, letter, top))
                if out is None:
                    continue
                if out is ACCEPT:
                    return True
                rest = tape[:i] + tape[i + 1:]
                h = 0 if returning else i
                c = cls[letter]
                if c == PUSH:
                    succ = [(p, rest, h, (sym,) + stack) for p, sym in out]
                elif c == POP:
                    popped = stack[1:]
                    succ = [(p, rest, h, popped) for p in out]
                else:
                    succ = [(p, rest, h, stack) for p in out]
            for conf in succ:
                if conf not in seen:
                    seen.add(conf)
                    nxt_frontier.append(conf)
        if len(seen) > max_configs:
            raise ResourceLimitExceeded(
                f"more than {max_configs} configurations explored on {' '.join(word)!r}")
        frontier = nxt_frontier
    return False


def accepting_trace(aut: Automaton, word, max_configs: int = DEFAULT_CONFIG_CAP):
    """Shortest accepting computation as a list of Steps, or None."""
    start = Configuration.initial(aut, word)
    parent = {start: None}
    queue = deque([start])
    while queue:
        conf = queue.popleft()
        for st, nxt in successors(aut, conf):
            if nxt is ACCEPT:
                steps = [st]
                while parent[conf] is not None:
                    prev_step, conf = parent[conf]
                    steps.append(prev_step)
                return steps[::-1]
            if nxt not in parent:
                parent[nxt] = (st, conf)
                queue.append(nxt)
        if len(parent) > max_configs:
            raise ResourceLimitExceeded(f"more than {max_configs} configurations explored")
    return None


class VerdictKind(enum.Enum):
    ACCEPT = "ACCEPT"
    REJECT_UNDEFINED = "REJECT(undefined)"
    REJECT_LOOP = "REJECT(loop)"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    trace: tuple

    @property
    def accepted(self) -> bool:
        return self.kind is VerdictKind.ACCEPT

    def format(self) -> str:
        lines = [st.format(k) for k, st in enumerate(self.trace, 1)]
        lines.append(self.kind.value)
        return "\n".join(lines)


class NondeterministicError(ValueError):
    pass


def run_deterministic(aut: Automaton, word) -> Verdict:
    """Run a deterministic machine to completion.

    Between two letter consumptions only endmarker moves happen, and they
    change nothing but the state, so a repeated state among them is a loop.
    """
    if not is_deterministic(aut):
        raise NondeterministicError("run_deterministic needs a deterministic automaton")
    conf = Configuration.initial(aut, word)
    trace = []
    wrapped_states = set()
    while True:
        moves = list(successors(aut, conf))
        if not moves:
            return Verdict(VerdictKind.REJECT_UNDEFINED, tuple(trace))
        (st, nxt), = moves
        if st.consumed == END:
            if conf.state in wrapped_states:
                return Verdict(VerdictKind.REJECT_LOOP, tuple(trace))
            wrapped_states.add(conf.state)
        else:
            wrapped_states.clear()
        trace.append(st)
        if nxt is ACCEPT:
            return Verdict(VerdictKind.ACCEPT, tuple(trace))
        conf = nxt


def words(alphabet, max_len: int):
    """All words over ``alphabet`` up to ``max_len``, by length then lexicographically."""
    letters = sorted(alphabet)
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


def enumerate_language(aut: Automaton, max_len: int, alphabet=None,
                       max_configs: int = DEFAULT_CONFIG_CAP) -> set:
    """``{w : |w| <= max_len, w accepted}`` as a set of token tuples."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    alphabet = aut.alphabet if alphabet is None else alphabet
    return {w for w in words(alphabet, max_len) if accepts(aut, w, max_configs)}


def sort_words(ws):
    """Canonical order: by length, then lexicographically."""
    return sorted(ws, key=lambda w: (len(w), tuple(w)))
