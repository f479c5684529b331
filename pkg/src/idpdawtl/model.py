"""Input-driven pushdown automata with translucent letters: data model.

An automaton is immutable once built.  Transition tables map
``(state, letter, top)`` to an outcome, which is either :data:`ACCEPT` or a
frozenset of targets.  Targets are ``(state, pushed_symbol)`` pairs for push
letters and bare states otherwise.  The pushdown bottom and the endmarker are
engine sentinels spelled with the reserved tokens ``_`` and ``end``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

log = logging.getLogger(__name__)

BOTTOM = "_"
END = "end"
RESERVED = frozenset({"_", "end", "->", "push", "pop", "none", "accept", "//"})

RETURNING = "returning"
NON_RETURNING = "non-returning"
MODES = (RETURNING, NON_RETURNING)

PUSH, POP, STATE = "D", "R", "N"


class _Accept:
    __slots__ = ()

    def __repr__(self):
        return "ACCEPT"

    def __reduce__(self):
        return "ACCEPT"


ACCEPT = _Accept()

Outcome = Union[_Accept, frozenset]


class ValidationError(ValueError):
    """Raised when a description violates the well-formedness rules.

    ``violations`` holds every problem found, not only the first one.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


_TOKEN = re.compile(r"^\S+$")


def valid_token(tok) -> bool:
    return isinstance(tok, str) and bool(_TOKEN.match(tok)) and tok not in RESERVED


@dataclass(frozen=True)
class Signature:
    push: frozenset
    pop: frozenset
    state: frozenset

    @property
    def alphabet(self) -> frozenset:
        return self.push | self.pop | self.state

    def letter_class(self, letter):
        if letter in self.push:
            return PUSH
        if letter in self.pop:
            return POP
        if letter in self.state:
            return STATE
        raise KeyError(letter)


@dataclass(frozen=True, eq=True)
class Automaton:
    states: frozenset
    initial: str
    signature: Signature
    stack_alphabet: frozenset
    tau: Mapping[str, frozenset]
    delta_D: Mapping[tuple, Outcome]
    delta_R: Mapping[tuple, Outcome]
    delta_N: Mapping[tuple, Outcome]
    mode: str = RETURNING
    # derived lookup tables, excluded from equality
    _table: dict = field(default=None, compare=False, repr=False)
    _cls: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        table = {}
        for tab in (self.delta_D, self.delta_R, self.delta_N):
            table.update(tab)
        cls = {a: PUSH for a in self.signature.push}
        cls.update({a: POP for a in self.signature.pop})
        cls.update({a: STATE for a in self.signature.state})
        cls[END] = STATE
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_cls", cls)

    @property
    def alphabet(self) -> frozenset:
        return self.signature.alphabet

    @property
    def returning(self) -> bool:
        return self.mode == RETURNING

    def outcome(self, state, letter, top):
        """Table entry for ``(state, letter, top)`` or None when undefined."""
        return self._table.get((state, letter, top))

    def letter_class(self, letter):
        return self._cls[letter]

    def transitions(self):
        """Iterate ``(key, outcome)`` over all three tables."""
        yield from self.delta_D.items()
        yield from self.delta_R.items()
        yield from self.delta_N.items()

    def with_mode(self, mode) -> "Automaton":
        return build(self.states, self.initial, self.signature, self.stack_alphabet,
                     self.tau, self.delta_D, self.delta_R, self.delta_N, mode)


def _freeze_table(table):
    out = {}
    for key, val in table.items():
        out[tuple(key)] = ACCEPT if val is ACCEPT else frozenset(val)
    return out


def build(states, initial, signature, stack_alphabet, tau, delta_D, delta_R, delta_N,
          mode=RETURNING, *, check=True) -> Automaton:
    """Assemble an :class:`Automaton` from plain collections.

    Missing translucency entries are filled with the empty set.  Raises
    :class:`ValidationError` when ``check`` is set and the result is malformed.
    """
    states = frozenset(states)
    tau = {q: frozenset(tau.get(q, ())) for q in states} | {
        q: frozenset(v) for q, v in tau.items() if q not in states}
    aut = Automaton(
        states=states,
        initial=initial,
        signature=Signature(frozenset(signature.push), frozenset(signature.pop),
                            frozenset(signature.state)),
        stack_alphabet=frozenset(stack_alphabet),
        tau=tau,
        delta_D=_freeze_table(delta_D),
        delta_R=_freeze_table(delta_R),
        delta_N=_freeze_table(delta_N),
        mode=mode,
    )
    if check:
        problems = violations(aut)
        if problems:
            raise ValidationError(problems)
    return aut


def violations(aut: Automaton) -> list:
    """Every broken invariant of ``aut``, as human-readable strings."""
    out = []
    sig = aut.signature
    if sig.push & sig.pop or sig.push & sig.state or sig.pop & sig.state:
        out.append("signature sets not disjoint: "
                   + " ".join(sorted((sig.push & sig.pop) | (sig.push & sig.state)
                                     | (sig.pop & sig.state))))
    if aut.mode not in MODES:
        out.append(f"unknown mode {aut.mode!r}")
    for kind, toks in (("letter", sig.alphabet), ("stack symbol", aut.stack_alphabet),
                       ("state", aut.states)):
        for tok in sorted(toks):
            if not valid_token(tok):
                out.append(f"invalid {kind} token {tok!r} (reserved or malformed)")
    if aut.states & sig.alphabet:
        out.append("states and letters overlap: " + " ".join(sorted(aut.states & sig.alphabet)))
    if aut.initial not in aut.states:
        out.append(f"initial state {aut.initial!r} is not declared")
    for q, letters in aut.tau.items():
        if q not in aut.states:
            out.append(f"translucency given for unknown state {q!r}")
        extra = letters - sig.alphabet
        if extra:
            out.append(f"translucent letters of {q!r} not in the alphabet: "
                       + " ".join(sorted(extra)))
    tops = aut.stack_alphabet | {BOTTOM}
    tables = (("delta_D", aut.delta_D, sig.push),
              ("delta_R", aut.delta_R, sig.pop),
              ("delta_N", aut.delta_N, sig.state | {END}))
    for name, table, allowed in tables:
        for key, val in table.items():
            q, a, z = key
            where = f"{name}({q}, {a}, {z})"
            if q not in aut.states:
                out.append(f"{where}: unknown state {q!r}")
            if a not in allowed:
                out.append(f"{where}: wrong table for letter class")
            if z not in tops:
                out.append(f"{where}: unknown stack symbol {z!r}")
            if val is ACCEPT:
                continue
            for target in val:
                if name == "delta_D":
                    if not (isinstance(target, tuple) and len(target) == 2):
                        out.append(f"{where}: push target must be (state, symbol)")
                        continue
                    p, sym = target
                    if sym not in aut.stack_alphabet:
                        out.append(f"{where}: pushed symbol {sym!r} not in stack alphabet")
                else:
                    p = target
                if p not in aut.states:
                    out.append(f"{where}: unknown target state {p!r}")
    return out


def is_deterministic(aut: Automaton) -> bool:
    return all(val is ACCEPT or len(val) <= 1 for _, val in aut.transitions())


def signatures_compatible(a: Automaton, b: Automaton) -> bool:
    return a.signature == b.signature


# ---------------------------------------------------------------------------
# text format

@dataclass
class RawDescription:
    """Unvalidated content of a text description, with source line numbers."""

    mode: list = field(default_factory=list)
    push: list = field(default_factory=list)
    pop: list = field(default_factory=list)
    state_letters: list = field(default_factory=list)
    stack: list = field(default_factory=list)
    states: list = field(default_factory=list)
    initial: list = field(default_factory=list)
    translucent: list = field(default_factory=list)   # (line, state, tokens)
    trans: list = field(default_factory=list)         # (line, q, a, z, rhs tokens)
    errors: list = field(default_factory=list)


_LISTS = {
    "letters.push": "push",
    "letters.pop": "pop",
    "letters.state": "state_letters",
    "stack": "stack",
    "states": "states",
}


def parse(text: str) -> RawDescription:
    """Split a description into declarations without checking them."""
    raw = RawDescription()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("//", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        toks = rest.split()
        if not sep:
            raw.errors.append(f"line {lineno}: missing ':'")
        elif head == "mode":
            raw.mode.append((lineno, toks))
        elif head in _LISTS:
            getattr(raw, _LISTS[head]).extend((lineno, t) for t in toks)
        elif head == "initial":
            raw.initial.append((lineno, toks))
        elif head == "translucent":
            if len(toks) < 2 or toks[1] != "->":
                raw.errors.append(f"line {lineno}: expected 'translucent: <state> -> <tokens>'")
            else:
                raw.translucent.append((lineno, toks[0], toks[2:]))
        elif head == "trans":
            if len(toks) < 5 or toks[3] != "->":
                raw.errors.append(f"line {lineno}: expected 'trans: <state> <letter> <top> -> ...'")
            else:
                raw.trans.append((lineno, toks[0], toks[1], toks[2], toks[4:]))
        else:
            raw.errors.append(f"line {lineno}: unknown declaration {head!r}")
    return raw


def validate(raw) -> Automaton:
    """Turn a :class:`RawDescription` (or text) into an :class:`Automaton`.

    All violations are collected and raised together as a
    :class:`ValidationError`.
    """
    if isinstance(raw, str):
        raw = parse(raw)
    errs = list(raw.errors)

    mode = RETURNING
    if len(raw.mode) > 1:
        errs.append("mode declared more than once")
    if raw.mode:
        lineno, toks = raw.mode[0]
        if len(toks) != 1 or toks[0] not in MODES:
            errs.append(f"line {lineno}: mode must be 'returning' or 'non-returning'")
        else:
            mode = toks[0]

    def tokens(entries, kind):
        seen = []
        for lineno, tok in entries:
            if tok in (BOTTOM, END) or tok in ("⊥", "◁"):
                errs.append(f"line {lineno}: sentinel {tok!r} declared as ordinary {kind}")
            elif not valid_token(tok):
                errs.append(f"line {lineno}: invalid {kind} token {tok!r}")
            else:
                seen.append(tok)
        return seen

    push = tokens(raw.push, "letter")
    pop = tokens(raw.pop, "letter")
    nletters = tokens(raw.state_letters, "letter")
    stack = tokens(raw.stack, "stack symbol")
    states = tokens(raw.states, "state")

    for kind, group in (("push", push), ("pop", pop), ("state", nletters)):
        dups = {t for t in group if group.count(t) > 1}
        if dups:
            errs.append(f"letters.{kind} lists duplicates: " + " ".join(sorted(dups)))
    overlap = (set(push) & set(pop)) | (set(push) & set(nletters)) | (set(pop) & set(nletters))
    if overlap:
        errs.append("signature sets not disjoint: " + " ".join(sorted(overlap)))

    initial = None
    if len(raw.initial) != 1 or len(raw.initial[0][1]) != 1:
        errs.append("exactly one 'initial: <state>' line is required")
    else:
        initial = raw.initial[0][1][0]

    sig = Signature(frozenset(push), frozenset(pop), frozenset(nletters))
    letters = sig.alphabet
    state_set = frozenset(states)
    stack_set = frozenset(stack)

    tau = {}
    for lineno, q, toks in raw.translucent:
        if q not in state_set:
            errs.append(f"line {lineno}: translucency for unknown state {q!r}")
            continue
        bad = [t for t in toks if t not in letters]
        if bad:
            errs.append(f"line {lineno}: translucent tokens not in the alphabet: {' '.join(bad)}")
        tau.setdefault(q, set()).update(t for t in toks if t in letters)
    missing = sorted(state_set - set(tau))
    if missing:
        log.warning("no translucency given for %s; using the empty set", ", ".join(missing))

    tables = {PUSH: {}, POP: {}, STATE: {}}
    accept_keys = set()
    for lineno, q, a, z, rhs in raw.trans:
        where = f"line {lineno}"
        if q not in state_set:
            errs.append(f"{where}: unknown state {q!r}")
        if z != BOTTOM and z not in stack_set:
            errs.append(f"{where}: unknown stack symbol {z!r}")
        if a == END:
            cls = STATE
        elif a in letters:
            cls = sig.letter_class(a)
        else:
            errs.append(f"{where}: unknown letter {a!r}")
            continue
        key = (q, a, z)
        if rhs == ["accept"]:
            if tables[cls].get(key):
                errs.append(f"{where}: accept mixed with targets for {key}")
            tables[cls][key] = ACCEPT
            accept_keys.add(key)
            continue
        if key in accept_keys:
            errs.append(f"{where}: accept mixed with targets for {key}")
            continue
        target = rhs[0] if rhs else None
        if target not in state_set:
            errs.append(f"{where}: unknown target state {target!r}")
        action = rhs[1:]
        expected = {PUSH: "push", POP: "pop", STATE: "none"}[cls]
        if not action or action[0] != expected:
            got = action[0] if action else "nothing"
            errs.append(f"{where}: wrong table for letter class ({a!r} needs "
                        f"'{expected}', got '{got}')")
            continue
        if cls == PUSH:
            if len(action) != 2 or action[1] not in stack_set:
                errs.append(f"{where}: push needs one declared stack symbol, got "
                            f"{' '.join(action[1:]) or 'none'}")
                continue
            tables[cls].setdefault(key, set()).add((target, action[1]))
        else:
            if len(action) != 1:
                errs.append(f"{where}: trailing tokens after '{expected}'")
                continue
            tables[cls].setdefault(key, set()).add(target)

    if initial is not None and initial not in state_set:
        errs.append(f"initial state {initial!r} is not declared")
    if state_set & letters:
        errs.append("states and letters overlap: " + " ".join(sorted(state_set & letters)))
    if errs:
        raise ValidationError(errs)
    return build(state_set, initial, sig, stack_set, tau,
                 tables[PUSH], tables[POP], tables[STATE], mode)


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return validate(fh.read())


def _outcome_lines(key, val, cls):
    q, a, z = key
    head = f"trans: {q} {a} {z} ->"
    if val is ACCEPT:
        return [f"{head} accept"]
    if cls == PUSH:
        return [f"{head} {p} push {sym}" for p, sym in sorted(val)]
    action = "pop" if cls == POP else "none"
    return [f"{head} {p} {action}" for p in sorted(val)]


def dumps(aut: Automaton, extra: Iterable[str] = ()) -> str:
    """Canonical text form; ``validate(dumps(a)) == a`` for every valid ``a``."""
    sig = aut.signature
    lines = [
        f"mode: {aut.mode}",
        "letters.push: " + " ".join(sorted(sig.push)),
        "letters.pop: " + " ".join(sorted(sig.pop)),
        "letters.state: " + " ".join(sorted(sig.state)),
        "stack: " + " ".join(sorted(aut.stack_alphabet)),
        "states: " + " ".join(sorted(aut.states)),
        f"initial: {aut.initial}",
    ]
    for q in sorted(aut.states):
        lines.append(f"translucent: {q} -> " + " ".join(sorted(aut.tau.get(q, ()))))
    for cls, table in ((PUSH, aut.delta_D), (POP, aut.delta_R), (STATE, aut.delta_N)):
        for key in sorted(table):
            lines.extend(_outcome_lines(key, table[key], cls))
    lines.extend(extra)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def rename_states(aut: Automaton, mapping: Mapping[str, str]) -> Automaton:
    """Apply a state bijection ``mapping`` to every component of ``aut``."""
    m = mapping.get

    def ren_key(key):
        q, a, z = key
        return (m(q, q), a, z)

    def ren_d(val):
        return val if val is ACCEPT else {(m(p, p), s) for p, s in val}

    def ren(val):
        return val if val is ACCEPT else {m(p, p) for p in val}

    return build(
        {m(q, q) for q in aut.states}, m(aut.initial, aut.initial), aut.signature,
        aut.stack_alphabet, {m(q, q): v for q, v in aut.tau.items()},
        {ren_key(k): ren_d(v) for k, v in aut.delta_D.items()},
        {ren_key(k): ren(v) for k, v in aut.delta_R.items()},
        {ren_key(k): ren(v) for k, v in aut.delta_N.items()},
        aut.mode,
    )
