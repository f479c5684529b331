"""Lengths of the l_nsl members grow quadratically, so their gaps keep widening.

Usage: python3 demos/nsl_probe.py [MAX_LEN]
"""

import sys

from idpdawtl import langlib as L


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    n = int(argv[0]) if argv else 200
    lengths = L.nsl_length_probe(n)
    print(f"member lengths up to {n}: {lengths}")
    gaps = [b - a for a, b in zip(lengths, lengths[1:])]
    print(f"gaps: {gaps}")
    for k in range(3):
        print(f"k={k}: {' '.join(L.nsl_word(k))}")
    # A length set with unbounded, ever-growing gaps is not ultimately periodic.
    print("strictly growing:", all(x < y for x, y in zip(gaps, gaps[1:])))


if __name__ == "__main__":
    main()
