"""Valid computations of a tiny LBA and the machine that accepts everything else.

Usage: python3 demos/invalc_walkthrough.py [--seed N] [--mutants N]
"""

import argparse
import random
import time

from idpdawtl import engine
from idpdawtl import valc as V


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--mutants", type=int, default=50)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)

    lba = V.toy_lba()
    print(V.dumps_lba(lba))

    run = V.lba_run(lba, ["a", "b"])
    print(f"run on 'a b': {run.status} after {run.moves} moves")
    for k, conf in enumerate(run.trace):
        print(f"  w{k} = {' '.join(conf)}")

    word = V.valc_generate(lba, ["a", "b"])
    print("\ncanonical VALC' word:\n ", " ".join(word))
    print("a shuffled one:\n ", " ".join(V.valc_generate(lba, ["a", "b"], rng)))

    t = time.perf_counter()
    m = V.build_invalc(lba)
    n_entries = sum(1 for _ in m.transitions())
    print(f"\nINVALC' machine: {len(m.states)} states, {n_entries} table entries, "
          f"built in {time.perf_counter() - t:.2f}s")
    print("accepts the valid word?", engine.accepts(m, word))

    caught = 0
    for i in range(args.mutants):
        mutant = V.mutate_valid(word, args.seed + i, lba)
        caught += engine.accepts(m, mutant)
        if i < 3:
            print("  mutant:", " ".join(mutant), "->", engine.accepts(m, mutant))
    print(f"{caught} of {args.mutants} mutants accepted")

    count_only = V.build_invalc(lba, branches=(2,))
    k = word.index("c")
    longer = word[:k] + ("a",) + word[k:]
    print("count branch alone on a word with an extra left token:",
          engine.accepts(count_only, longer))


if __name__ == "__main__":
    main()
