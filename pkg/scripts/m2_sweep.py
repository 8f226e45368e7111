"""Compare the M2 closed forms with the enumerator on a rational grid.

usage: python3 scripts/m2_sweep.py [DENOMINATOR]
"""

import sys
import time

from lcykit.cli import sample_points
from lcykit.enumerate import enumerate_lcy
from lcykit.formulas import count_m2_general, count_m2_toric, m2_region


def main(den: int = 30) -> int:
    bad = 0
    t0 = time.perf_counter()
    print("delta\tregion\tcount\tformula\ttoric\tformula_toric")
    for w in sample_points(2, den):
        d = w.delta
        r = enumerate_lcy(2, w)
        g, t = count_m2_general(*d), count_m2_toric(*d)
        bad += (g, t) != (r.count, r.toric_count)
        print(f"{d[0]},{d[1]}\t{m2_region(*d)}\t{r.count}\t{g}\t{r.toric_count}\t{t}")
    print(f"# {bad} mismatches, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 30))
