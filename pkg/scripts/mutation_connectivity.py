"""Mutation graph sizes and connectivity on a grid of classes for l = 1..3,
plus a few hand-picked points on M4 and M5.

usage: python3 scripts/mutation_connectivity.py [DENOMINATOR]
"""

import sys
import time
from fractions import Fraction

from lcykit.cli import sample_points
from lcykit.lattice import SymplecticClass
from lcykit.mutation import is_connected, mutation_graph

EXTRA = [
    [Fraction(2, 5), Fraction(1, 5), Fraction(3, 20), Fraction(1, 10)],
    [Fraction(2, 5), Fraction(1, 5), Fraction(3, 20), Fraction(1, 10), Fraction(1, 20)],
]


def main(den: int = 8) -> int:
    pts = [w for l in (1, 2, 3) for w in sample_points(l, den)]
    pts += [SymplecticClass.blowup(d) for d in EXTRA]
    bad = 0
    print("delta\tnodes\tedges\tout_of_set\tconnected\tseconds")
    for w in pts:
        t0 = time.perf_counter()
        g = mutation_graph(w.l, w)
        conn = is_connected(g)
        bad += not conn
        print(f"{','.join(map(str, w.delta))}\t{len(g.nodes)}\t{len(g.edges())}\t{len(g.out_of_set)}\t"
              f"{conn}\t{time.perf_counter() - t0:.2f}")
    print(f"# {bad} disconnected graphs", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 8))
