"""Toric counts along the deleted edges of the l = 4 region and on the deleted
faces of the l = 5 region, next to the region predicate."""

import sys
from fractions import Fraction as F

from lcykit.enumerate import enumerate_lcy
from lcykit.formulas import toric_region_member
from lcykit.lattice import SymplecticClass

M = (F(1, 3),) * 5
O = (F(0),) * 5
A = (F(1),) + (F(0),) * 4
D = (F(1, 3),) * 4 + (F(0),)
X = (F(1, 2),) + (F(1, 4),) * 4


def combo(weights, verts):
    return [sum(c * v[i] for c, v in zip(weights, verts)) for i in range(5)]


def main() -> int:
    rows = []
    for t in (F(1, 4), F(1, 5), F(1, 7)):
        rows.append(("MO", [t] * 4))
        rows.append(("MA", [1 - 2 * t, t, t, t]))
    for name, verts in (("MOD", (M, O, D)), ("MAD", (M, A, D)), ("MOX", (M, O, X)), ("XOA", (X, O, A))):
        rows.append((name, combo((F(1, 3), F(1, 3), F(1, 3)), verts)))
    rows.append(("X", list(X)))
    bad = 0
    print("set\tdelta\ttoric\tpredicate")
    for name, d in rows:
        w = SymplecticClass.blowup(d)
        n = enumerate_lcy(w.l, w, toric_only=True).toric_count
        pred = toric_region_member(w.l, w)
        bad += pred != (n > 0)
        print(f"{name}\t{','.join(map(str, d))}\t{n}\t{pred}")
    print(f"# {bad} disagreements", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
