"""Toric counts on M3 per region label, enumerator against the region value.

usage: python3 scripts/m3_regions.py [DENOMINATOR]
"""

import sys
from collections import defaultdict

from lcykit.cli import sample_points
from lcykit.enumerate import enumerate_lcy
from lcykit.formulas import m3_region


def main(den: int = 30) -> int:
    seen = defaultdict(list)
    bad = 0
    for w in sample_points(3, den):
        lab = m3_region(*w.delta)
        n = enumerate_lcy(3, w, toric_only=True).toric_count
        bad += n != lab.value
        seen[str(lab)].append((w, n, lab.value))
    print("region\tpoints\texample\ttoric\tvalue")
    for lab in sorted(seen):
        w, n, v = seen[lab][0]
        print(f"{lab}\t{len(seen[lab])}\t{','.join(map(str, w.delta))}\t{n}\t{v}")
    print(f"# {bad} mismatches", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 30))
