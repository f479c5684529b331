"""Membership oracles for the witness languages, Parikh images, fixtures.

Oracles decide membership directly from each language's definition and
never run an automaton.  Shuffles with a unary component are decided by
projecting away the unary letter and counting it.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import model
from .engine import words

log = logging.getLogger(__name__)

ABH = frozenset({"a", "b", "#"})
EXA22 = frozenset({"a", "b", "a1", "b1", "a2", "b2"})
NSL = frozenset({"a", "$", "#", "¢"})
ABC = frozenset({"a", "b", "c"})


def _blocks(word):
    """Lengths of the b-blocks of the {b,#}-projection, or None if a block is empty."""
    proj = "".join(x for x in word if x != "a")
    blocks = proj.split("#")
    if any(not blk for blk in blocks):
        return None
    return [len(blk) for blk in blocks]


def l_rep(w):
    n = w.count("a")
    blocks = _blocks(w)
    return n >= 1 and blocks is not None and all(k == n for k in blocks)


def co_l_rep(w):
    return not l_rep(w)


def l_mismatch(w):
    n = w.count("a")
    blocks = _blocks(w)
    return n >= 1 and blocks is not None and any(k != n for k in blocks)


def _two_blocks(w):
    blocks = _blocks(w)
    if blocks is None or len(blocks) != 2:
        return None
    return blocks


def l1_sec3(w):
    blocks = _two_blocks(w)
    return blocks is not None and blocks[0] == w.count("a")


def l2_sec3(w):
    blocks = _two_blocks(w)
    return blocks is not None and blocks[1] == w.count("a")


def l_union_sec3(w):
    return l1_sec3(w) or l2_sec3(w)


def _runs(w):
    """Split into (plain, single-overlined, double-overlined) runs, in that order."""
    groups = {"": [], "1": [], "2": []}
    order = []
    for x in w:
        level = x[1:]
        if not order or order[-1] != level:
            order.append(level)
        groups[level].append(x[0])
    return order, groups


def l1_exa22(w):
    order, g = _runs(w)
    return (order == ["", "1", "2"]
            and g["2"] == g[""][::-1])


def l2_exa22(w):
    order, g = _runs(w)
    return (order == ["", "1", "2"]
            and g["1"] == g[""][::-1])


def l_union_exa22(w):
    return l1_exa22(w) or l2_exa22(w)


_NSL_SHAPE = re.compile(r"a((?:\$#+a+)*)\$(¢+)(a+)")


def l_nsl(w):
    """Block parser; the single word "a" is taken as the k = 0 member."""
    s = "".join(w)
    if s == "a":
        return True
    m = _NSL_SHAPE.fullmatch(s)
    if not m:
        return False
    middle, cents, last = m.groups()
    k = len(cents)
    pieces = re.findall(r"\$(#+)(a+)", middle)
    if len(pieces) != k - 1:
        return False
    for i, (hashes, a_run) in enumerate(pieces, 1):
        if len(hashes) != i or len(a_run) != 2 * i + 1:
            return False
    return len(last) == 2 * k + 1


def l_abc(w):
    n = len(w) // 3
    return len(w) % 3 == 0 and tuple(w) == ("a",) * n + ("b",) * n + ("c",) * n


def l_counts_abc(w):
    return w.count("a") == w.count("b") == w.count("c")


def reg_astar(w):
    rank = {"a": 0, "b": 1, "c": 2}
    ranks = [rank[x] for x in w]
    return ranks == sorted(ranks)


ORACLES = {
    "l_rep": (ABH, l_rep),
    "co_l_rep": (ABH, co_l_rep),
    "l_mismatch": (ABH, l_mismatch),
    "l1_sec3": (ABH, l1_sec3),
    "l2_sec3": (ABH, l2_sec3),
    "l_union_sec3": (ABH, l_union_sec3),
    "l1_exa22": (EXA22, l1_exa22),
    "l2_exa22": (EXA22, l2_exa22),
    "l_union_exa22": (EXA22, l_union_exa22),
    "l_nsl": (NSL, l_nsl),
    "l_abc": (ABC, l_abc),
    "l_counts_abc": (ABC, l_counts_abc),
    "reg_astar": (ABC, reg_astar),
}


def oracle_alphabet(name) -> frozenset:
    return ORACLES[name][0]


def oracle(name, word) -> bool:
    """Exact membership of ``word`` (a token sequence) in language ``name``.

    Letters outside the language's alphabet give False with a warning, so
    complements stay total over arbitrary input.
    """
    alphabet, pred = ORACLES[name]
    word = tuple(word)
    stray = set(word) - alphabet
    if stray:
        log.warning("%s: letters outside the alphabet: %s", name, " ".join(sorted(stray)))
        return False
    return pred(word)


# ---------------------------------------------------------------------------
# Parikh images

def parikh(word, alphabet):
    """Letter counts of ``word`` as a sorted tuple of (letter, count) pairs."""
    return tuple((x, sum(1 for y in word if y == x)) for x in sorted(alphabet))


def parikh_image(ws, alphabet) -> frozenset:
    return frozenset(parikh(w, alphabet) for w in ws)


def parikh_upto(source, n, alphabet=None, max_configs=None) -> frozenset:
    """Parikh image of the members of length <= n.

    ``source`` is an Automaton, an OrdinaryNPDA, or an oracle name.  Since a
    vector fixes the word length, the set is implicitly length-tagged.
    """
    from .constructions import OrdinaryNPDA, npda_accepts
    from .engine import accepts

    if isinstance(source, str):
        alphabet = alphabet or oracle_alphabet(source)
        member = lambda w: oracle(source, w)  # noqa: E731
    elif isinstance(source, OrdinaryNPDA):
        alphabet = alphabet or source.alphabet
        member = lambda w: npda_accepts(source, w)  # noqa: E731
    else:
        alphabet = alphabet or source.alphabet
        kw = {} if max_configs is None else {"max_configs": max_configs}
        member = lambda w: accepts(source, w, **kw)  # noqa: E731
    return parikh_image((w for w in words(alphabet, n) if member(w)), alphabet)


# ---------------------------------------------------------------------------
# the non-semilinear witness

def nsl_word(k: int) -> tuple:
    """The member of l_nsl with parameter k."""
    if k == 0:
        return ("a",)
    out = ["a"]
    for i in range(1, k):
        out += ["$"] + ["#"] * i + ["a"] * (2 * i + 1)
    out += ["$"] + ["¢"] * k + ["a"] * (2 * k + 1)
    return tuple(out)


def nsl_length_probe(n: int) -> list:
    """Sorted lengths of the l_nsl members no longer than n."""
    out = []
    k = 0
    while True:
        w = nsl_word(k)
        if len(w) > n:
            return out
        if not l_nsl(w):
            raise AssertionError(f"generator and oracle disagree at k={k}")
        out.append(len(w))
        k += 1


# ---------------------------------------------------------------------------
# fixture catalog

@dataclass(frozen=True)
class Fixture:
    name: str
    automaton: model.Automaton
    oracle: str | None
    note: str


_CATALOG = {
    "exa21": ("l_mismatch", "exact acceptor of L from the L_rep example"),
    "exa21_literal": (None, "the literal transition table; accepts a superset of l_mismatch"),
    "exa22": ("l_union_exa22", "exact non-returning acceptor of L1 u L2 (decorated letters)"),
    "exa22_literal": (None, "the literal transition table; also accepts w h2(w^R) with empty v"),
    "exa22_l1": ("l1_exa22", "first branch of exa22"),
    "exa22_l2": ("l2_exa22", "second branch of exa22"),
    "m_L1": ("l1_sec3", "deterministic, b^n # b^m shuffled with a^n"),
    "m_L2": ("l2_sec3", "deterministic, b^m # b^n shuffled with a^n"),
    "m_union_L1L2": ("l_union_sec3", "nondeterministic union of m_L1 and m_L2"),
    "m_abc_counts": ("l_counts_abc", "deterministic, equal numbers of a, b, c"),
    "m_astar": ("reg_astar", "deterministic a*b*c*, same signature as m_abc_counts"),
    "m_empty": (None, "the empty language"),
    "m_fin": (None, "exactly {a, ab}"),
}


def fixture_text(name: str) -> str:
    if name not in _CATALOG:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.wtl").read_text("utf-8")


@lru_cache(maxsize=None)
def fixture(name: str) -> Fixture:
    oracle_id, note = _CATALOG[name]
    return Fixture(name, model.validate(fixture_text(name)), oracle_id, note)


def fixtures() -> dict:
    """All fixtures, keyed by name."""
    return {name: fixture(name) for name in _CATALOG}
