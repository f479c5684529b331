"""Emptiness and finiteness via a context-free grammar, plus bounded checks.

A returning machine is turned into its letter-equivalent NPDA, the NPDA into
a grammar with the triple construction, and the grammar is tested with the
textbook fixpoints.  Letter-equivalence preserves both emptiness and
finiteness, since only finitely many words share a Parikh vector.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from . import engine
from .constructions import OrdinaryNPDA, letter_equivalent_npda, npda_accepts
from .engine import ResourceLimitExceeded
from .model import BOTTOM, POP, PUSH, Automaton, is_deterministic

DEFAULT_GRAMMAR_CAP = 2_000_000


class ModeError(ValueError):
    """The question is not decided for machines in this mode."""


# ---------------------------------------------------------------------------
# grammars

@dataclass
class CFG:
    """Context-free grammar.  A right-hand side symbol is a nonterminal iff
    it is a key of ``productions`` or listed in ``nonterminals``."""
    nonterminals: set
    terminals: set
    start: object
    productions: dict = field(default_factory=dict)   # A -> set of tuples

    def __post_init__(self):
        self.nonterminals = set(self.nonterminals) | set(self.productions)
        for a in self.nonterminals:
            self.productions.setdefault(a, set())
        bad = []
        for a, rhss in self.productions.items():
            for rhs in rhss:
                for x in rhs:
                    if x not in self.nonterminals and x not in self.terminals:
                        bad.append(f"{a!r} -> {rhs!r}: undeclared symbol {x!r}")
        if self.start not in self.nonterminals:
            bad.append(f"start symbol {self.start!r} is not a nonterminal")
        if bad:
            raise ValueError("; ".join(bad))

    def size(self) -> int:
        return sum(len(r) for r in self.productions.values())

    @classmethod
    def from_text(cls, text: str) -> "CFG":
        """Parse ``A -> x y | z`` lines; ``eps`` is the empty word, the first LHS starts."""
        prods, order = {}, []
        for line in text.strip().splitlines():
            lhs, rhs = line.split("->")
            lhs = lhs.strip()
            order.append(lhs)
            for alt in rhs.split("|"):
                toks = tuple(t for t in alt.split() if t != "eps")
                prods.setdefault(lhs, set()).add(toks)
        terms = {t for r in prods.values() for alt in r for t in alt if t not in prods}
        return cls(set(prods), terms, order[0], prods)


def _is_nt(cfg, x):
    return x in cfg.nonterminals


def generating(cfg: CFG) -> set:
    """Nonterminals that derive at least one terminal word."""
    gen = set()
    uses = defaultdict(list)
    missing = {}
    todo = []
    for a, rhss in cfg.productions.items():
        for rhs in rhss:
            nts = {x for x in rhs if _is_nt(cfg, x)}
            key = (a, rhs)
            missing[key] = len(nts)
            for x in nts:
                uses[x].append(key)
            if not nts:
                todo.append(a)
    while todo:
        a = todo.pop()
        if a in gen:
            continue
        gen.add(a)
        for key in uses[a]:
            missing[key] -= 1
            if missing[key] == 0:
                todo.append(key[0])
    return gen


def cfg_empty(cfg: CFG) -> bool:
    return cfg.start not in generating(cfg)


def useful(cfg: CFG) -> CFG:
    """Restriction to symbols that are generating and reachable from the start."""
    gen = generating(cfg)
    if cfg.start not in gen:
        return CFG({cfg.start}, set(cfg.terminals), cfg.start, {cfg.start: set()})
    prods = {a: {r for r in rhss if all(not _is_nt(cfg, x) or x in gen for x in r)}
             for a, rhss in cfg.productions.items() if a in gen}
    reach = {cfg.start}
    todo = [cfg.start]
    while todo:
        a = todo.pop()
        for rhs in prods[a]:
            for x in rhs:
                if _is_nt(cfg, x) and x not in reach:
                    reach.add(x)
                    todo.append(x)
    return CFG(reach, set(cfg.terminals), cfg.start, {a: prods[a] for a in reach})


@dataclass
class CNF:
    grammar: CFG
    has_empty: bool            # whether the start derived the empty word
    provenance: dict           # CNF nonterminal -> original nonterminal


def to_cnf(cfg: CFG) -> CNF:
    """Chomsky normal form over useful symbols, with a provenance map.

    The empty word is dropped from the language and reported separately.
    """
    g = useful(cfg)
    prov = {a: a for a in g.nonterminals}
    prods = {a: set(r) for a, r in g.productions.items()}
    nts = set(g.nonterminals)
    counter = [0]

    def fresh(origin):
        counter[0] += 1
        name = ("cnf", counter[0])
        nts.add(name)
        prov[name] = prov.get(origin, origin)
        prods[name] = set()
        return name

    # move terminals out of long right-hand sides
    term_nt = {}
    for a in list(prods):
        new = set()
        for rhs in prods[a]:
            if len(rhs) >= 2:
                out = []
                for x in rhs:
                    if x in nts:
                        out.append(x)
                    else:
                        if x not in term_nt:
                            t = fresh(a)
                            prov[t] = ("terminal", x)
                            prods[t] = {(x,)}
                            term_nt[x] = t
                        out.append(term_nt[x])
                rhs = tuple(out)
            new.add(rhs)
        prods[a] = new
    # binarize
    for a in list(prods):
        new = set()
        for rhs in prods[a]:
            cur = a
            while len(rhs) > 2:
                nxt = fresh(a)
                new_rhs = (rhs[0], nxt)
                if cur == a:
                    new.add(new_rhs)
                else:
                    prods[cur].add(new_rhs)
                cur, rhs = nxt, rhs[1:]
            if cur == a:
                new.add(rhs)
            else:
                prods[cur].add(rhs)
        prods[a] = new
    # remove epsilon productions
    nullable = set()
    changed = True
    while changed:
        changed = False
        for a, rhss in prods.items():
            if a not in nullable and any(all(x in nullable for x in r) for r in rhss):
                nullable.add(a)
                changed = True
    has_empty = g.start in nullable
    for a in prods:
        new = set()
        for rhs in prods[a]:
            if len(rhs) == 2:
                x, y = rhs
                new.add(rhs)
                if x in nullable:
                    new.add((y,))
                if y in nullable:
                    new.add((x,))
            elif rhs:
                new.add(rhs)
        prods[a] = new
    # remove unit productions
    unit = {a: {a} for a in prods}
    changed = True
    while changed:
        changed = False
        for a in prods:
            for b in list(unit[a]):
                for rhs in prods[b]:
                    if len(rhs) == 1 and rhs[0] in nts and rhs[0] not in unit[a]:
                        unit[a].add(rhs[0])
                        changed = True
    final = {a: {r for b in unit[a] for r in prods[b] if not (len(r) == 1 and r[0] in nts)}
             for a in prods}
    cnf = useful(CFG(nts, set(g.terminals), g.start, final))
    return CNF(cnf, has_empty, prov)


def _find_cycle(graph):
    """Some cycle of a directed graph as a node list, or None."""
    color = {}
    for root in graph:
        if root in color:
            continue
        stack = [(root, iter(graph[root]))]
        path = [root]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                c = color.get(nxt)
                if c == 1:
                    return path[path.index(nxt):] + [nxt]
                if c is None:
                    color[nxt] = 1
                    stack.append((nxt, iter(graph.get(nxt, ()))))
                    path.append(nxt)
                    break
            else:
                color[node] = 2
                stack.pop()
                path.pop()
    return None


def cfg_cycle(cfg: CFG):
    """A pumping cycle of the CNF grammar in original nonterminals, or None."""
    cnf = to_cnf(cfg)
    g = cnf.grammar
    graph = {a: sorted({x for r in rhss for x in r if x in g.nonterminals}, key=repr)
             for a, rhss in g.productions.items()}
    cyc = _find_cycle(graph)
    if cyc is None:
        return None
    return [cnf.provenance.get(a, a) for a in cyc]


def cfg_finite(cfg: CFG) -> bool:
    return cfg_cycle(cfg) is None


def cfg_words(cfg: CFG, max_len: int) -> set:
    """All derivable words of length <= max_len (fixpoint over bounded sets)."""
    lang = {a: set() for a in cfg.nonterminals}
    changed = True
    while changed:
        changed = False
        for a, rhss in cfg.productions.items():
            for rhs in rhss:
                acc = {()}
                for x in rhs:
                    parts = lang[x] if x in cfg.nonterminals else {(x,)}
                    acc = {u + v for u in acc for v in parts if len(u) + len(v) <= max_len}
                    if not acc:
                        break
                new = acc - lang[a]
                if new:
                    lang[a] |= new
                    changed = True
    return lang[cfg.start]


def shortest_words(cfg: CFG) -> dict:
    """Least word per generating nonterminal, ordered by (length, tokens)."""
    best = {}
    changed = True
    while changed:
        changed = False
        for a, rhss in cfg.productions.items():
            for rhs in rhss:
                parts = []
                for x in rhs:
                    if x in cfg.nonterminals:
                        if x not in best:
                            break
                        parts.append(best[x])
                    else:
                        parts.append((x,))
                else:
                    w = tuple(t for p in parts for t in p)
                    if a not in best or (len(w), w) < (len(best[a]), best[a]):
                        best[a] = w
                        changed = True
    return best


# ---------------------------------------------------------------------------
# NPDA -> grammar

FINAL = ("final",)


def npda_to_cfg(npda: OrdinaryNPDA, cap: int = DEFAULT_GRAMMAR_CAP) -> CFG:
    """Triple construction; nonterminal ``(p, X, q)`` derives the words that
    take ``p`` with ``X`` on top to ``q`` with that ``X`` removed.

    Drain states may empty the stack, bottom included, by moving into a
    fresh state, so acceptance becomes acceptance by empty stack.  Only
    triples that derive some word are generated, by saturation.
    """
    sig = npda.signature
    syms = sorted(npda.stack_alphabet) + [BOTTOM]
    # rules: (p, letter or None, X, r, gamma) with gamma the replacement of X
    rules = []
    for (p, a, x), targets in npda.moves.items():
        cls = sig.letter_class(a)
        for t in targets:
            if cls == PUSH:
                r, z = t
                rules.append((p, a, x, r, (z, x)))
            elif cls == POP:
                rules.append((p, a, x, t, (BOTTOM,) if x == BOTTOM else ()))
            else:
                rules.append((p, a, x, t, (x,)))
    for (p, x), targets in npda.silent.items():
        for t in targets:
            rules.append((p, None, x, t, (x,)))
    for d in npda.drain:
        for x in syms:
            rules.append((d, None, x, FINAL, ()))
    for x in syms:
        rules.append((FINAL, None, x, FINAL, ()))

    gen = set()
    by_start = defaultdict(set)           # (p, X) -> {q : (p, X, q) generating}
    by_end = defaultdict(set)             # (q, X) -> {p}
    one = defaultdict(list)               # (r, Y) -> rules with gamma = (Y,)
    two_first = defaultdict(list)         # (r, Y1) -> rules with gamma = (Y1, Y2)
    two_second = defaultdict(list)        # Y2 -> rules with gamma = (Y1, Y2)
    todo = []

    def add(t):
        if t not in gen:
            gen.add(t)
            by_start[(t[0], t[1])].add(t[2])
            by_end[(t[2], t[1])].add(t[0])
            todo.append(t)
            if len(gen) > cap:
                raise ResourceLimitExceeded(f"more than {cap} grammar triples")

    for rule in rules:
        p, a, x, r, gamma = rule
        if not gamma:
            add((p, x, r))
        elif len(gamma) == 1:
            one[(r, gamma[0])].append(rule)
        else:
            two_first[(r, gamma[0])].append(rule)
            two_second[gamma[1]].append(rule)
    while todo:
        u, y, v = todo.pop()
        for p, a, x, r, gamma in one[(u, y)]:
            add((p, x, v))
        for p, a, x, r, gamma in two_first[(u, y)]:
            for q in list(by_start[(v, gamma[1])]):
                add((p, x, q))
        for p, a, x, r, gamma in two_second[y]:
            if u in by_start[(r, gamma[0])]:
                add((p, x, v))

    start = ("S",)
    prods = defaultdict(set)
    root = (npda.initial, BOTTOM, FINAL)
    if root in gen:
        prods[start].add((root,))
    for p, a, x, r, gamma in rules:
        lead = () if a is None else (a,)
        if not gamma:
            if (p, x, r) in gen:
                prods[(p, x, r)].add(lead)
        elif len(gamma) == 1:
            for q in by_start[(r, gamma[0])]:
                prods[(p, x, q)].add(lead + ((r, gamma[0], q),))
        else:
            y1, y2 = gamma
            for s in by_start[(r, y1)]:
                for q in by_start[(s, y2)]:
                    prods[(p, x, q)].add(lead + ((r, y1, s), (s, y2, q)))
    cfg = CFG(set(prods) | {start}, set(npda.alphabet), start, dict(prods))
    return useful(cfg)


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Unknown:
    bound: int

    def __str__(self):
        return f"Unknown({self.bound})"


@dataclass(frozen=True)
class DecisionReport:
    question: str
    answer: object                 # True, False or Unknown
    witness: Optional[tuple] = None
    bound: Optional[int] = None
    detail: str = ""

    @property
    def exit_code(self) -> int:
        if isinstance(self.answer, Unknown):
            return 3
        return 0 if self.answer else 1

    def to_dict(self) -> dict:
        ans = str(self.answer) if isinstance(self.answer, Unknown) else bool(self.answer)
        return {"question": self.question, "answer": ans,
                "witness": None if self.witness is None else " ".join(self.witness),
                "bound": self.bound, "detail": self.detail}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def format(self) -> str:
        ans = str(self.answer) if isinstance(self.answer, Unknown) else str(bool(self.answer)).lower()
        lines = [f"{self.question}: {ans}"]
        if self.witness is not None:
            lines.append("witness: " + (" ".join(self.witness) if self.witness else "(empty word)"))
        if self.bound is not None:
            lines.append(f"bound: {self.bound}")
        if self.detail:
            lines.append(self.detail)
        return "\n".join(lines)


def _grammar_of(aut: Automaton) -> CFG:
    if not aut.returning:
        raise ModeError("emptiness and finiteness are only decided for returning machines")
    return npda_to_cfg(letter_equivalent_npda(aut))


def _witness(aut, cfg):
    w = shortest_words(cfg).get(cfg.start)
    if w is None:
        return None
    if not engine.accepts(aut, w):
        raise AssertionError(f"grammar witness {' '.join(w)!r} is rejected by the machine")
    return w


def emptiness(aut: Automaton) -> DecisionReport:
    """Answer True means the language is empty; otherwise a verified witness comes along."""
    cfg = _grammar_of(aut)
    if cfg_empty(cfg):
        return DecisionReport("emptiness", True, detail=f"grammar size {cfg.size()}")
    return DecisionReport("emptiness", False, _witness(aut, cfg),
                          detail=f"grammar size {cfg.size()}")


def finiteness(aut: Automaton) -> DecisionReport:
    """Answer True means the language is finite.  Nonempty languages carry a witness."""
    cfg = _grammar_of(aut)
    if cfg_empty(cfg):
        return DecisionReport("finiteness", True, detail="empty language")
    cycle = cfg_cycle(cfg)
    w = _witness(aut, cfg)
    if cycle is None:
        return DecisionReport("finiteness", True, w, detail="no pumping cycle")
    states = []
    for nt in cycle:
        if isinstance(nt, tuple) and len(nt) == 3:
            states.append(_show_state(nt[0]))
    return DecisionReport("finiteness", False, w,
                          detail="pumping cycle through " + " -> ".join(states))


def _show_state(st):
    if st == FINAL:
        return "final"
    q, s = st
    return f"{q}{{{','.join(sorted(s))}}}"


# ---------------------------------------------------------------------------
# complement and bounded semi-checks

def complement_accepts(aut: Automaton, word) -> bool:
    """Membership in the complement, for deterministic machines only."""
    if not is_deterministic(aut):
        raise engine.NondeterministicError("complement_accepts needs a deterministic automaton")
    return not engine.run_deterministic(aut, word).accepted


def _member(aut, w):
    if is_deterministic(aut):
        return engine.run_deterministic(aut, w).accepted
    return engine.accepts(aut, w)


def bounded_universality(aut: Automaton, bound: int, alphabet=None) -> DecisionReport:
    if bound < 0:
        raise ValueError("bound must be non-negative")
    alphabet = aut.alphabet if alphabet is None else alphabet
    det = is_deterministic(aut)
    for w in engine.words(alphabet, bound):
        rejected = complement_accepts(aut, w) if det else not engine.accepts(aut, w)
        if rejected:
            return DecisionReport("universality_bounded", False, w, bound)
    return DecisionReport("universality_bounded", Unknown(bound), None, bound)


def _check_modes(a, b, cross_mode):
    if a.mode != b.mode and not cross_mode:
        raise ModeError(f"mode mismatch ({a.mode} vs {b.mode}); pass cross_mode=True to compare")


def bounded_inclusion(a: Automaton, b: Automaton, bound: int, *, cross_mode=False,
                      alphabet=None) -> DecisionReport:
    """Search for a word of L(a) outside L(b); Unknown when none exists up to ``bound``."""
    _check_modes(a, b, cross_mode)
    alphabet = (a.alphabet | b.alphabet) if alphabet is None else alphabet
    for w in engine.words(alphabet, bound):
        if _member(a, w) and not _member(b, w):
            return DecisionReport("inclusion_bounded", False, w, bound)
    return DecisionReport("inclusion_bounded", Unknown(bound), None, bound)


def bounded_equivalence(a: Automaton, b: Automaton, bound: int, *, cross_mode=False,
                        alphabet=None) -> DecisionReport:
    _check_modes(a, b, cross_mode)
    alphabet = (a.alphabet | b.alphabet) if alphabet is None else alphabet
    for w in engine.words(alphabet, bound):
        if _member(a, w) != _member(b, w):
            return DecisionReport("equivalence_bounded", False, w, bound)
    return DecisionReport("equivalence_bounded", Unknown(bound), None, bound)


def npda_cfg_agree(npda: OrdinaryNPDA, max_len: int) -> bool:
    """Bounded cross-check of the grammar against the NPDA it came from."""
    from .constructions import npda_language
    return cfg_words(npda_to_cfg(npda), max_len) == npda_language(npda, max_len)


__all__ = [
    "CFG", "CNF", "DecisionReport", "ModeError", "Unknown",
    "bounded_equivalence", "bounded_inclusion", "bounded_universality",
    "cfg_cycle", "cfg_empty", "cfg_finite", "cfg_words", "complement_accepts",
    "emptiness", "finiteness", "generating", "npda_accepts", "npda_cfg_agree",
    "npda_to_cfg", "shortest_words", "to_cnf", "useful",
]
