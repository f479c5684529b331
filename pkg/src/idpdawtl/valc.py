"""Linear bounded automata and encodings of their accepting computations.

A configuration is a token list ``[ t1 .. ti q t(i+1) .. tn ]``: the state
token stands right before the scanned cell.  ``[`` and ``]`` are the fixed
endmarker tokens.  The head never scans ``[``; moving left onto it, or right
off ``]``, crashes the machine, and a crash rejects.

Decorated tokens are ``x'`` (single prime) and ``x''`` (double prime).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import model
from .model import ACCEPT, BOTTOM, END

LEFT, RIGHT = "[", "]"
SEP = "#"
MID = "c"


class LbaError(ValueError):
    pass


def p1(x):
    return x + "'"


def p2(x):
    return x + "''"


def level(tok):
    """Prime level of a decorated token: 0, 1 or 2."""
    if tok.endswith("''"):
        return 2
    if tok.endswith("'"):
        return 1
    return 0


def base(tok):
    return tok[: len(tok) - level(tok)]


@dataclass(frozen=True)
class LBA:
    states: frozenset
    initial: str
    tape: frozenset            # includes both endmarkers
    inputs: frozenset
    delta: dict = field(hash=False)   # (q, t) -> (p, t', "L" | "R")

    def __post_init__(self):
        problems = lba_violations(self)
        if problems:
            raise LbaError("; ".join(problems))

    @property
    def inner(self) -> frozenset:
        """Tape symbols other than the endmarkers."""
        return self.tape - {LEFT, RIGHT}

    @property
    def symbols(self) -> frozenset:
        """Tokens that make up configurations and separators (T, Q and #)."""
        return self.tape | self.states | {SEP}


def lba_violations(lba: LBA) -> list:
    out = []
    for tok in sorted(lba.tape | lba.states):
        if not model.valid_token(tok) or tok in (SEP, MID) or level(tok):
            out.append(f"token {tok!r} is reserved or ends with a prime")
    if lba.tape & lba.states:
        out.append("tape symbols and states overlap")
    if not {LEFT, RIGHT} <= lba.tape:
        out.append("the tape alphabet must contain the endmarkers [ and ]")
    if not lba.inputs <= lba.inner:
        out.append("input letters must be inner tape symbols")
    if lba.initial not in lba.states:
        out.append(f"initial state {lba.initial!r} is not declared")
    for (q, t), (p, w, d) in lba.delta.items():
        where = f"delta({q}, {t})"
        if q not in lba.states or p not in lba.states:
            out.append(f"{where}: unknown state")
        if t not in lba.tape or w not in lba.tape:
            out.append(f"{where}: unknown tape symbol")
        if d not in ("L", "R"):
            out.append(f"{where}: direction must be L or R")
        if t == LEFT:
            out.append(f"{where}: the head never scans the left endmarker")
        if t == RIGHT and w != RIGHT:
            out.append(f"{where}: endmarkers are never overwritten")
        if t != RIGHT and w in (LEFT, RIGHT):
            out.append(f"{where}: an endmarker cannot be written")
    return out


def parse_lba(text: str) -> LBA:
    fields = {"lba.states": [], "lba.initial": [], "lba.tape": [], "lba.input": []}
    delta = {}
    errors = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        toks = rest.split()
        if key in fields:
            fields[key] += toks
        elif key == "lba.trans":
            if len(toks) != 6 or toks[2] != "->":
                errors.append(f"line {n}: expected 'lba.trans: q t -> p w L|R'")
                continue
            q, t, _, p, w, d = toks
            if (q, t) in delta:
                errors.append(f"line {n}: second transition for ({q}, {t}); LBAs are deterministic")
            delta[(q, t)] = (p, w, d)
        else:
            errors.append(f"line {n}: unknown key {key!r}")
    if len(fields["lba.initial"]) != 1:
        errors.append("exactly one initial state required")
    if errors:
        raise LbaError("; ".join(errors))
    return LBA(frozenset(fields["lba.states"]), fields["lba.initial"][0],
               frozenset(fields["lba.tape"]), frozenset(fields["lba.input"]), delta)


def load_lba(path) -> LBA:
    with open(path, encoding="utf-8") as fh:
        return parse_lba(fh.read())


def dumps_lba(lba: LBA) -> str:
    lines = [
        "lba.states: " + " ".join(sorted(lba.states)),
        f"lba.initial: {lba.initial}",
        "lba.tape: " + " ".join(sorted(lba.tape)),
        "lba.input: " + " ".join(sorted(lba.inputs)),
    ]
    for (q, t), (p, w, d) in sorted(lba.delta.items()):
        lines.append(f"lba.trans: {q} {t} -> {p} {w} {d}")
    return "\n".join(lines) + "\n"


def toy_lba() -> LBA:
    """Accepts (ab)^k, k >= 1, halting after 2k + 1 moves; state z never halts."""
    text = resources.files(__package__).joinpath("fixtures", "toy.lba").read_text("utf-8")
    return parse_lba(text)


# ---------------------------------------------------------------------------
# configurations and runs

def initial_config(lba: LBA, word) -> tuple:
    return (LEFT, lba.initial) + tuple(word) + (RIGHT,)


def state_index(lba: LBA, conf) -> int:
    idx = [i for i, x in enumerate(conf) if x in lba.states]
    if len(idx) != 1:
        raise LbaError(f"not a configuration: {' '.join(conf)}")
    return idx[0]


def successor(lba: LBA, conf) -> Optional[tuple]:
    """Next configuration, or None when the machine halts or crashes."""
    j = state_index(lba, conf)
    q = conf[j]
    cells = list(conf[:j] + conf[j + 1:])
    h = j                                   # index of the scanned cell
    move = lba.delta.get((q, cells[h]))
    if move is None:
        return None
    p, w, d = move
    cells[h] = w
    h = h + 1 if d == "R" else h - 1
    if h <= 0 or h >= len(cells):
        return None
    return tuple(cells[:h]) + (p,) + tuple(cells[h:])


def is_halting(lba: LBA, conf) -> bool:
    j = state_index(lba, conf)
    return (conf[j], conf[j + 1]) not in lba.delta


def is_config(lba: LBA, toks) -> bool:
    """Format ``[ T* Q T* ]`` with inner tape symbols only."""
    toks = tuple(toks)
    if len(toks) < 3 or toks[0] != LEFT or toks[-1] != RIGHT:
        return False
    mid = toks[1:-1]
    nq = sum(1 for x in mid if x in lba.states)
    return nq == 1 and all(x in lba.states or x in lba.inner for x in mid)


@dataclass(frozen=True)
class LbaRun:
    status: str                 # accepted | rejected | exceeded
    trace: tuple                # configurations visited, initial one first
    reason: str = ""

    @property
    def moves(self) -> int:
        return len(self.trace) - 1


def step_cap(lba: LBA, n: int) -> int:
    """Configuration-count bound for inputs of length n."""
    return len(lba.states) * (len(lba.tape) + 2) ** (n + 2) * (n + 3)


def lba_run(lba: LBA, word, max_steps: Optional[int] = None) -> LbaRun:
    word = tuple(word)
    bad = [x for x in word if x not in lba.inputs]
    if bad:
        raise LbaError(f"letters outside the input alphabet: {' '.join(bad)}")
    cap = step_cap(lba, len(word)) if max_steps is None else max_steps
    conf = initial_config(lba, word)
    trace = [conf]
    seen = {conf}
    while True:
        if len(trace) - 1 >= cap:
            return LbaRun("exceeded", tuple(trace), f"step cap {cap}")
        nxt = successor(lba, conf)
        if nxt is None:
            if is_halting(lba, conf):
                return LbaRun("accepted", tuple(trace))
            return LbaRun("rejected", tuple(trace), "head left the tape")
        if nxt in seen:
            return LbaRun("rejected", tuple(trace), "configuration repeated")
        seen.add(nxt)
        trace.append(nxt)
        conf = nxt


# ---------------------------------------------------------------------------
# valid computations

def valc_generate(lba: LBA, word, interleave=None) -> Optional[tuple]:
    """The VALC' word of the accepting run on ``word``, or None.

    By default every single-primed token precedes every double-primed one.
    ``interleave`` may be a ``random.Random`` to pick a random shuffle.
    """
    run = lba_run(lba, word)
    if run.status != "accepted":
        return None
    if run.moves % 2 == 0:
        return None
    ws = run.trace
    m = (len(ws) - 2) // 2
    left = []
    for i in range(0, 2 * m + 1, 2):
        if i:
            left.append(SEP)
        left += ws[i]
    primed = [p1(x) for x in tuple(reversed(ws[2 * m + 1])) + (SEP,)]
    dbl = []
    for i in range(2 * m - 1, 0, -2):
        if dbl:
            dbl.append(p2(SEP))
        dbl += [p2(x) for x in reversed(ws[i])]
    return tuple(left) + (MID,) + shuffle(primed, dbl, interleave)


def shuffle(u, v, rng=None) -> tuple:
    if rng is None:
        return tuple(u) + tuple(v)
    slots = [0] * len(u) + [1] * len(v)
    rng.shuffle(slots)
    iu, iv = iter(u), iter(v)
    return tuple(next(iu) if s == 0 else next(iv) for s in slots)


def _split(seq, sep):
    out = [[]]
    for x in seq:
        if x == sep:
            out.append([])
        else:
            out[-1].append(x)
    return [tuple(b) for b in out]


def in_valcp(lba: LBA, word) -> bool:
    """Membership in VALC'(lba), by parsing the two primed projections."""
    word = tuple(word)
    if word.count(MID) != 1:
        return False
    k = word.index(MID)
    left, right = word[:k], word[k + 1:]
    plain = lba.symbols
    if any(x not in plain for x in left):
        return False
    if any(level(x) == 0 or base(x) not in plain for x in right):
        return False
    evens = _split(left, SEP)
    one = [base(x) for x in right if level(x) == 1]
    two = [base(x) for x in right if level(x) == 2]
    if not one or one[-1] != SEP or SEP in one[:-1]:
        return False
    last = tuple(reversed(one[:-1]))
    odds_desc = [tuple(reversed(b)) for b in _split(two, SEP)] if two else []
    m = len(evens) - 1
    if len(odds_desc) != m:
        return False
    chain = [None] * (2 * m + 2)
    chain[0::2] = evens
    chain[1::2] = list(reversed(odds_desc)) + [last]
    if not all(is_config(lba, w) for w in chain):
        return False
    w0 = chain[0]
    if w0[1] != lba.initial or any(x not in lba.inputs for x in w0[2:-1]):
        return False
    if not is_halting(lba, chain[-1]):
        return False
    return all(successor(lba, chain[i]) == chain[i + 1] for i in range(2 * m + 1))


def decorated_alphabet(lba: LBA) -> list:
    syms = sorted(lba.symbols)
    return syms + [p1(x) for x in syms] + [p2(x) for x in syms] + [MID]


def mutate_valid(word, seed, lba: Optional[LBA] = None, alphabet=None, max_tries=1000):
    """One random edit of ``word``: substitute, delete, swap adjacent, or flip a prime level.

    With ``lba`` given, edits are redrawn until the result leaves VALC'.
    """
    rng = random.Random(seed)
    word = tuple(word)
    if alphabet is None:
        alphabet = decorated_alphabet(lba) if lba is not None else sorted(
            {base(x) for x in word if x != MID} | {MID})
    alphabet = sorted(alphabet)
    for _ in range(max_tries):
        op = rng.choice(("substitute", "delete", "swap", "flip"))
        w = list(word)
        i = rng.randrange(len(w))
        if op == "substitute":
            w[i] = rng.choice(alphabet)
        elif op == "delete":
            del w[i]
        elif op == "swap":
            if len(w) < 2:
                continue
            i = min(i, len(w) - 2)
            w[i], w[i + 1] = w[i + 1], w[i]
        else:
            if w[i] == MID:
                continue
            lv = level(w[i])
            w[i] = base(w[i]) + "'" * rng.choice([x for x in (0, 1, 2) if x != lv])
        w = tuple(w)
        if w == word:
            continue
        if lba is not None and in_valcp(lba, w):
            continue
        return w
    raise RuntimeError("no mutation found")


# ---------------------------------------------------------------------------
# an automaton for the invalid computations

DEFAULT_INVALC_CAP = 500_000


class _Builder:
    """Accumulates states and table entries; ACCEPT dominates on a shared key."""

    def __init__(self, sig):
        self.sig = sig
        self.states = set()
        self.tau = {}
        self.tables = {model.PUSH: {}, model.POP: {}, model.STATE: {}}
        self.size = 0

    def state(self, name, hidden=frozenset()):
        if name not in self.states:
            self.states.add(name)
            self.tau[name] = frozenset(hidden)
        return name

    def add(self, q, letter, top, target):
        """``target`` is ACCEPT, a state, or a ``(state, pushed)`` pair for push letters."""
        cls = model.STATE if letter == END else self.sig.letter_class(letter)
        table = self.tables[cls]
        key = (q, letter, top)
        old = table.get(key)
        if target is ACCEPT or old is ACCEPT:
            table[key] = ACCEPT
        else:
            table[key] = (old or frozenset()) | {target}
        self.size += 1
        if self.size > DEFAULT_INVALC_CAP:
            raise LbaError("INVALC' construction exceeds its size cap")


def _name(*parts):
    return "|".join(str(p) for p in parts)


def _detector(lba: LBA):
    """Lockstep test of "B is not the successor of A" over reversed token pairs.

    ``step(d, a, b)`` returns the next detector state or ACCEPT once a
    difference is certain; ``final(d)`` says whether the pairs seen so far
    form exactly the reversed successor.  Outside the three cells around the
    state symbol the two configurations must agree, so one buffered pair
    suffices: when the state symbol of A arrives, the buffer holds the
    scanned cell.
    """
    Q = lba.states

    def step(d, a, b):
        kind = d[0]
        if kind == "i":
            return ACCEPT if a in Q else ("p", a, b)
        if kind == "p":
            _, ap, bp = d
            if a not in Q:
                return ACCEPT if ap != bp else ("p", a, b)
            move = lba.delta.get((a, ap))
            if move is None:
                return ACCEPT                  # A halts, so it has no successor
            p, w, direction = move
            if direction == "R":
                if ap == RIGHT or bp != p or b != w:
                    return ACCEPT
                return ("e",)
            if bp != w:
                return ACCEPT
            return ("l", b, p)
        if kind == "e":
            return ACCEPT if a != b else d
        _, bq, p = d                           # pending left move
        if a == LEFT or bq != a or b != p:
            return ACCEPT
        return ("e",)

    def final(d):
        return d == ("e",)

    return step, final


def _format_dfa(lba: LBA):
    """DFA for the format of VALC' words (m >= 1); returns (start, step, final)."""
    Q, inner, inputs = lba.states, lba.inner, lba.inputs
    dead = None

    def left(k, x):
        if k == 0:
            return 1 if x == LEFT else dead
        if k == 1:
            return 2 if x == lba.initial else dead
        if k == 2:
            return 2 if x in inputs else (3 if x == RIGHT else dead)
        if k == 3:
            return 4 if x == SEP else dead
        if k == 4:
            return 5 if x == LEFT else dead
        if k == 5:
            return 5 if x in inner else (6 if x in Q else dead)
        return 6 if x in inner else (3 if x == RIGHT else dead)

    def primed(ps, x):
        if ps == "P0":
            return ("P1", RIGHT) if x == RIGHT else dead
        if isinstance(ps, tuple):              # ("P1", scanned-so-far)
            last = ps[1]
            if x in inner:
                return ("P1", x)
            if x in Q:
                return dead if (x, last) in lba.delta else "P2"
            return dead
        if ps == "P2":
            return "P2" if x in inner else ("P3" if x == LEFT else dead)
        if ps == "P3":
            return "P4" if x == SEP else dead
        return dead

    def double(ds, x):
        if ds == "D0":
            return "D1" if x == RIGHT else dead
        if ds == "D1":
            return "D1" if x in inner else ("D2" if x in Q else dead)
        if ds == "D2":
            return "D2" if x in inner else ("D3" if x == LEFT else dead)
        return "D0" if x == SEP else dead     # D3

    def step(s, x):
        if s[0] == "L":
            if x == MID:
                return ("R", "P0", "D0") if s[1] == 3 else dead
            if level(x) or x not in lba.symbols:
                return dead
            k = left(s[1], x)
            return dead if k is None else ("L", k)
        _, ps, ds = s
        lv = level(x)
        if x == MID or lv == 0:
            return dead
        if lv == 1:
            ps = primed(ps, base(x))
        else:
            ds = double(ds, base(x))
        if ps is None or ds is None:
            return dead
        return ("R", ps, ds)

    def final(s):
        return s[0] == "R" and s[1] == "P4" and s[2] == "D3"

    return ("L", 0), step, final


def build_invalc(lba: LBA, branches=(1, 2, 3, 4)) -> model.Automaton:
    """Returning nondeterministic machine accepting the complement of VALC'(lba).

    Four guessed tests, the guess folded into the first consumed letter:

    1. format, by a finite automaton that ignores the pushdown;
    2. configuration count, by pushing the left part and popping it against
       the primed and then the double-primed tokens, # against # only;
    3. w(2i+1) is not the successor of w(2i): w(2i) is pushed marked and, once
       it surfaces, popped in lockstep with the matching right-hand block;
    4. w(2i+2) is not the successor of w(2i+1): as 3 with w(2i+2) marked and
       the primed tokens translucent.

    Every test accepts as soon as an error is certain.  The format test asks
    for m >= 1, matching LBAs that make at least three moves.  ``branches``
    restricts the initial guess to a subset of the tests.
    """
    syms = sorted(lba.symbols)
    S1 = frozenset(p1(x) for x in syms)
    S2 = frozenset(p2(x) for x in syms)
    sig = model.Signature(frozenset(syms), S1 | S2, frozenset({MID}))
    marked = {x: x + "*" for x in syms}
    plain_tops = list(syms) + [BOTTOM]
    tops = plain_tops + sorted(marked.values())
    unmark = {v: k for k, v in marked.items()}
    b = _Builder(sig)
    start = b.state("start")

    # 1. format
    f0, fstep, ffinal = _format_dfa(lba)
    letters = sorted(sig.alphabet)
    seen = {f0}
    todo = [f0]
    fname = {}

    def fstate(s):
        if s not in fname:
            fname[s] = b.state(_name("B1", *(x if not isinstance(x, tuple) else ",".join(x)
                                             for x in s)))
        return fname[s]

    while todo:
        s = todo.pop()
        q = fstate(s)
        for x in letters:
            t = fstep(s, x)
            for z in (BOTTOM, SEP):
                if t is None:
                    b.add(q, x, z, ACCEPT)
                    continue
                tq = fstate(t)
                b.add(q, x, z, (tq, SEP) if x in sig.push else tq)
            if t is not None and t not in seen:
                seen.add(t)
                todo.append(t)
        if not ffinal(s):
            for z in (BOTTOM, SEP):
                b.add(q, END, z, ACCEPT)

    def count_pop(q, x, z, stay):
        """Pop ``x`` against plain top ``z``; a separator mismatch or an empty store accepts."""
        if z == BOTTOM or (base(x) == SEP) != (z == SEP):
            b.add(q, x, z, ACCEPT)
        else:
            b.add(q, x, z, stay)

    # 2. count
    push2 = b.state("B2|push")
    pop2a = b.state("B2|P", S2)
    pop2b = b.state("B2|D")
    for z in plain_tops:
        for x in syms:
            b.add(push2, x, z, (push2, x))
            count_pop(pop2a, p1(x), z, pop2a)
            count_pop(pop2b, p2(x), z, pop2b)
        b.add(push2, MID, z, pop2a)
        b.add(pop2a, END, z, pop2b)
        if z != BOTTOM:
            b.add(pop2b, END, z, ACCEPT)

    step, final = _detector(lba)

    def push_phase(tag, first_markable):
        """Push the left part, marking one whole configuration; returns the state after c."""
        first = b.state(_name(tag, "first"))
        at = b.state(_name(tag, "at"))
        inside = b.state(_name(tag, "in"))
        mark = b.state(_name(tag, "mark"))
        after = b.state(_name(tag, "after"))
        for z in tops:
            for x in syms:
                nxt = at if x == SEP else inside
                for q in (first, at, inside):
                    tgt = nxt if (q != first or x == SEP) else first
                    b.add(q, x, z, (tgt, x))
                if x == LEFT:
                    b.add(at, x, z, (mark, marked[x]))
                    if first_markable:
                        b.add(first, x, z, (mark, marked[x]))
                if x != SEP:
                    b.add(mark, x, z, (after if x == RIGHT else mark, marked[x]))
                b.add(after, x, z, (after, x))
        return first, after

    def make_compare(tag, hidden, lv, a_from_stack, done, end_top):
        """Detector states popping the marked block against one prime level.

        Returns ``enter(q, x, z)``, which wires the move from a seek state
        that meets the first marked symbol.  ``end_top`` is the top under
        which the endmarker legitimately closes the comparison.
        """
        deco = p1 if lv == 1 else p2
        names = {}
        pending = []

        def name(d):
            if d not in names:
                names[d] = b.state(_name(tag, *d), hidden)
                pending.append(d)
            return names[d]

        def move(q, x, z, d):
            if z in unmark:
                if base(x) == SEP:
                    b.add(q, x, z, ACCEPT)          # the input block is shorter
                    return
                y = unmark[z]
                nd = step(d, y, base(x)) if a_from_stack else step(d, base(x), y)
                b.add(q, x, z, ACCEPT if nd is ACCEPT else name(nd))
            elif z == SEP and base(x) == SEP:
                b.add(q, x, z, done if final(d) else ACCEPT)
            else:
                b.add(q, x, z, ACCEPT)

        def drain():
            while pending:
                d = pending.pop()
                q = names[d]
                for x in syms:
                    for z in tops:
                        move(q, deco(x), z, d)
                for z in tops:
                    if not (z == end_top and final(d)):
                        b.add(q, END, z, ACCEPT)

        def enter(q, x, z):
            move(q, x, z, ("i",))
            drain()

        return enter

    def seek(q, lv, z, enter):
        deco = p1 if lv == 1 else p2
        for x in syms:
            if z in unmark:
                enter(q, deco(x), z)
            else:
                count_pop(q, deco(x), z, q)

    # 3. w(2i+1) against the marked w(2i)
    first3, after3 = push_phase("B3", True)
    done3 = b.state("B3|done")
    pseek3 = b.state("B3|Pseek", S2)
    dseek3 = b.state("B3|Dseek")
    enter3p = make_compare("B3|Pcmp", S2, 1, True, done3, None)
    enter3d = make_compare("B3|Dcmp", frozenset(), 2, True, done3, BOTTOM)
    for z in tops:
        b.add(after3, MID, z, pseek3)
        seek(pseek3, 1, z, enter3p)
        b.add(pseek3, END, z, dseek3)
        seek(dseek3, 2, z, enter3d)
        b.add(dseek3, END, z, ACCEPT)

    # 4. the marked w(2i+2) against w(2i+1)
    first4, after4 = push_phase("B4", False)
    done4 = b.state("B4|done")
    dseek4 = b.state("B4|Dseek", S1)
    enter4 = make_compare("B4|cmp", S1, 2, False, done4, SEP)
    for z in tops:
        b.add(after4, MID, z, dseek4)
        seek(dseek4, 2, z, enter4)
        b.add(dseek4, END, z, ACCEPT)

    # the initial guess: union of the first moves of the chosen tests
    entry = {q for k, q in zip((1, 2, 3, 4), (fstate(f0), push2, first3, first4))
             if k in branches}
    for cls_table in b.tables.values():
        for (q, x, z), val in list(cls_table.items()):
            if z == BOTTOM and q in entry:
                if val is ACCEPT:
                    b.add(start, x, z, ACCEPT)
                else:
                    for t in val:
                        b.add(start, x, z, t)
    return model.build(b.states, start, sig, set(syms) | set(marked.values()), b.tau,
                       b.tables[model.PUSH], b.tables[model.POP], b.tables[model.STATE])
