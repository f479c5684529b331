"""Command-line front end.

Words are given as whitespace-separated tokens after ``--``, so that ``#``
and ``$`` survive the shell; ``--chars`` splits one contiguous argument into
single characters instead.

Exit codes: 0 accept/true, 1 reject/false, 2 usage, format or resource
errors, 3 unknown.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys

from . import constructions, decision, engine, langlib, model, valc
from .engine import ResourceLimitExceeded

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
DEFAULT_SEED = 20240601

log = logging.getLogger("idpdawtl")


class UsageError(Exception):
    pass


def _word(args):
    toks = list(args.word or [])
    if args.chars:
        return tuple(ch for tok in toks for ch in tok)
    return tuple(toks)


def _fixture_name(path):
    stem = os.path.basename(path)
    for ext in (".wtl", ".lba"):
        if stem.endswith(ext):
            stem = stem[: -len(ext)]
    return stem


def load_automaton(path) -> model.Automaton:
    """Read a description file; bundled fixtures resolve by name when no such file exists."""
    if os.path.exists(path):
        return model.load(path)
    try:
        return langlib.fixture(_fixture_name(path)).automaton
    except KeyError:
        raise UsageError(f"no such file or fixture: {path}") from None


def load_lba(path) -> valc.LBA:
    if os.path.exists(path):
        return valc.load_lba(path)
    if _fixture_name(path) == "toy":
        return valc.toy_lba()
    raise UsageError(f"no such LBA file: {path}")


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _show(word):
    return " ".join(word) if word else "(empty word)"


def _report(rep: decision.DecisionReport, args) -> int:
    print(rep.to_json() if args.json else rep.format())
    return rep.exit_code


# ---------------------------------------------------------------------------
# commands

def _read_text(path):
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    name = _fixture_name(path)
    if name == "toy":
        return valc.dumps_lba(valc.toy_lba())
    try:
        return langlib.fixture_text(name)
    except KeyError:
        raise UsageError(f"no such file or fixture: {path}") from None


def cmd_validate(args):
    text = _read_text(args.file)
    if "lba." in text and "letters." not in text:
        valc.parse_lba(text)
    else:
        model.validate(text)
    print("valid")
    return EXIT_TRUE


def cmd_run(args):
    aut = load_automaton(args.file)
    w = _word(args)
    if model.is_deterministic(aut):
        ok = engine.run_deterministic(aut, w).accepted
    else:
        ok = engine.accepts(aut, w, args.max_configs)
    print("ACCEPT" if ok else "REJECT")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_trace(args):
    aut = load_automaton(args.file)
    w = _word(args)
    if model.is_deterministic(aut):
        verdict = engine.run_deterministic(aut, w)
        print(verdict.format())
        return EXIT_TRUE if verdict.accepted else EXIT_FALSE
    steps = engine.accepting_trace(aut, w, args.max_configs)
    if steps is None:
        print("REJECT (no accepting computation)")
        return EXIT_FALSE
    for k, st in enumerate(steps, 1):
        print(st.format(k))
    print("ACCEPT")
    return EXIT_TRUE


def cmd_enumerate(args):
    aut = load_automaton(args.file)
    ws = engine.enumerate_language(aut, args.max_len, max_configs=args.max_configs)
    for w in engine.sort_words(ws):
        print(_show(w))
    print(f"{len(ws)} words up to length {args.max_len}", file=sys.stderr)
    return EXIT_TRUE


def cmd_decide(args):
    aut = load_automaton(args.file)
    fn = decision.emptiness if args.question == "emptiness" else decision.finiteness
    return _report(fn(aut), args)


def cmd_universality(args):
    aut = load_automaton(args.file)
    return _report(decision.bounded_universality(aut, args.bound), args)


def cmd_compare(args):
    a, b = load_automaton(args.file1), load_automaton(args.file2)
    rep = decision.bounded_equivalence(a, b, args.max_len, cross_mode=True)
    if args.json:
        print(rep.to_json())
    elif rep.witness is not None:
        print(f"differ on: {_show(rep.witness)}")
    else:
        print(f"equivalent up to {args.max_len}")
    return EXIT_FALSE if rep.witness is not None else EXIT_TRUE


def cmd_construct(args):
    a = load_automaton(args.file)
    if args.kind == "nonreturning":
        text = model.dumps(constructions.to_nonreturning(a))
    elif args.kind == "npda":
        text = constructions.dumps_npda(constructions.letter_equivalent_npda(a))
    else:
        if not args.file2:
            raise UsageError("construct union needs two files")
        text = model.dumps(constructions.union_compatible(a, load_automaton(args.file2)))
    _emit(text, args.output)
    return EXIT_TRUE


def cmd_oracle(args):
    if args.name not in langlib.ORACLES:
        raise UsageError(f"unknown oracle {args.name!r}; known: {', '.join(sorted(langlib.ORACLES))}")
    ok = langlib.oracle(args.name, _word(args))
    print("member" if ok else "not a member")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_parikh(args):
    src = args.source
    if src.startswith("oracle:"):
        name = src.split(":", 1)[1]
        if name not in langlib.ORACLES:
            raise UsageError(f"unknown oracle {name!r}")
        alphabet = langlib.oracle_alphabet(name)
        image = langlib.parikh_upto(name, args.max_len)
    else:
        aut = load_automaton(src)
        alphabet = aut.alphabet
        image = langlib.parikh_upto(aut, args.max_len, max_configs=args.max_configs)
    letters = sorted(alphabet)
    for vec in sorted(image, key=lambda v: (sum(c for _, c in v), v)):
        print(" ".join(f"{x}:{c}" for x, c in vec))
    print(f"{len(image)} vectors over ({', '.join(letters)}) up to length {args.max_len}",
          file=sys.stderr)
    return EXIT_TRUE


def cmd_fixtures(args):
    if args.action == "list":
        for name, fx in langlib.fixtures().items():
            a = fx.automaton
            det = "det" if model.is_deterministic(a) else "nondet"
            print(f"{name:14} {a.mode:13} {det:6} oracle={fx.oracle or '-':14} {fx.note}")
        return EXIT_TRUE
    if not args.name:
        raise UsageError("fixtures emit needs a fixture name")
    try:
        text = langlib.fixture_text(args.name)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    _emit(text, args.output)
    return EXIT_TRUE


def cmd_valc(args):
    lba = load_lba(args.lba)
    if args.action == "build":
        _emit(model.dumps(valc.build_invalc(lba)), args.output)
        return EXIT_TRUE
    w = _word(args)
    if args.action == "run":
        r = valc.lba_run(lba, w)
        for k, conf in enumerate(r.trace):
            print(f"{k}: {' '.join(conf)}")
        print(r.status + (f" ({r.reason})" if r.reason else ""))
        return EXIT_TRUE if r.status == "accepted" else EXIT_FALSE
    if args.action == "gen":
        rng = random.Random(args.seed) if args.shuffle else None
        v = valc.valc_generate(lba, w, rng)
        if v is None:
            print("no valid computation (input rejected or even move count)")
            return EXIT_FALSE
        print(" ".join(v))
        return EXIT_TRUE
    if args.action == "mutate":
        print(" ".join(valc.mutate_valid(w, args.seed, lba)))
        return EXIT_TRUE
    ok = valc.in_valcp(lba, w)
    print("in VALC'" if ok else "not in VALC'")
    return EXIT_TRUE if ok else EXIT_FALSE


# ---------------------------------------------------------------------------

def _nonneg(text):
    val = int(text)
    if val < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--chars", action="store_true",
                        help="split the word argument into single-character tokens")
    common.add_argument("--json", action="store_true", help="print reports as JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--max-configs", type=_nonneg, default=engine.DEFAULT_CONFIG_CAP)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="idpdawtl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = cmd("validate", cmd_validate, "check a description file")
    sp.add_argument("file")
    for name, fn, help in (("run", cmd_run, "accept or reject a word"),
                           ("trace", cmd_trace, "print a computation on a word")):
        sp = cmd(name, fn, help)
        sp.add_argument("file")
        sp.add_argument("word", nargs="*")
    sp = cmd("enumerate", cmd_enumerate, "list accepted words up to a length")
    sp.add_argument("file")
    sp.add_argument("--max-len", type=_nonneg, required=True)
    sp = cmd("decide", cmd_decide, "emptiness or finiteness of a returning machine")
    sp.add_argument("question", choices=["emptiness", "finiteness"])
    sp.add_argument("file")
    sp = cmd("universality", cmd_universality, "bounded search for a rejected word")
    sp.add_argument("file")
    sp.add_argument("--bound", type=_nonneg, required=True)
    sp = cmd("compare", cmd_compare, "bounded language equivalence")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--max-len", type=_nonneg, required=True)
    sp = cmd("construct", cmd_construct, "build a derived machine")
    sp.add_argument("kind", choices=["nonreturning", "npda", "union"])
    sp.add_argument("file")
    sp.add_argument("file2", nargs="?")
    sp.add_argument("-o", "--output")
    sp = cmd("oracle", cmd_oracle, "membership in a named witness language")
    sp.add_argument("name")
    sp.add_argument("word", nargs="*")
    sp = cmd("parikh", cmd_parikh, "Parikh vectors of members up to a length")
    sp.add_argument("source", help="a description file or oracle:NAME")
    sp.add_argument("--max-len", type=_nonneg, required=True)
    sp = cmd("fixtures", cmd_fixtures, "list or emit bundled fixtures")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("-o", "--output")
    sp = cmd("valc", cmd_valc, "LBA computations and the INVALC' machine")
    sp.add_argument("action", choices=["build", "run", "gen", "check", "mutate"])
    sp.add_argument("lba", help="an LBA file, or 'toy'")
    sp.add_argument("word", nargs="*")
    sp.add_argument("-o", "--output")
    sp.add_argument("--shuffle", action="store_true",
                    help="gen: random interleaving of the primed halves (uses --seed)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    tail = None
    if "--" in argv:
        k = argv.index("--")
        argv, tail = argv[:k], argv[k + 1:]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_TRUE
    if tail is not None:
        if not hasattr(args, "word"):
            print("error: this command takes no word", file=sys.stderr)
            return EXIT_USAGE
        args.word = list(args.word or []) + tail
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except (UsageError, model.ValidationError, valc.LbaError, OSError,
            constructions.IncompatibleSignatures,
            constructions.IncompatibleInitialTranslucency,
            decision.ModeError, engine.NondeterministicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitExceeded, constructions.ConstructionTooLarge) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
