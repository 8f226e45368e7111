"""Exhaustive enumeration of homological log Calabi-Yau configurations.

For M_l with l >= 2 the configurations are found by a backtracking search over
the area-filtered catalog; CP^2, M_1 and the quadric use their closed family
lists (the search can still be run on them as an independent check).  On walls
of the reduced cone the result is quotiented by the orbits of the reflection
generators, computed inside the enumerated finite set.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .catalog import catalog_members, quadric_catalog, toric_catalog_members
from .config import (
    CyclicConfig,
    canonical_tuple,
    pattern_violations,
    smoothing,
)
from .lattice import (
    HomologyClass,
    LatticeError,
    Space,
    SymplecticClass,
    area,
    c1_coeffs,
    ceil_fraction,
    dot,
    floor_fraction,
    is_c1_nef,
    is_interior,
    is_reduced,
    is_symplectic_reduced,
    max_l,
    reflect_coeffs,
    reflection_generators,
)

log = logging.getLogger(__name__)

Coeffs = tuple[int, ...]
Cycle = tuple[Coeffs, ...]


@dataclass
class EnumerationResult:
    w: SymplecticClass
    configs: list[CyclicConfig]
    toric: list[CyclicConfig]
    elliptic: CyclicConfig | None
    toric_only: bool = False
    raw_count: int = 0
    raw_toric_count: int = 0
    per_length: dict[int, int] = field(default_factory=dict)
    generators: list[HomologyClass] = field(default_factory=list)
    reflection_misses: list[tuple[str, str]] = field(default_factory=list)
    orbit_of: dict[Cycle, Cycle] = field(default_factory=dict)
    method: str = "search"

    @property
    def count(self) -> int:
        return len(self.configs)

    @property
    def toric_count(self) -> int:
        return len(self.toric)

    @property
    def all(self) -> list[CyclicConfig]:
        return self.configs

    def keys(self) -> list[str]:
        return [c.key() for c in self.configs]


def _sort_key(cycle: Cycle):
    return (len(cycle), cycle)


# ---------------------------------------------------------------- search core


def _scaled_areas(w: SymplecticClass, coeffs: Sequence[Coeffs]) -> tuple[list[int], int]:
    pairing = w.pairing()
    den = lcm(*(p.denominator for p in pairing))
    scaled = [int(p * den) for p in pairing]
    areas = [sum(a * b for a, b in zip(c, scaled)) for c in coeffs]
    total = sum(a * b for a, b in zip(c1_coeffs(w.space), scaled))
    return areas, total


@dataclass
class _SearchTable:
    space: Space
    coeffs: list[Coeffs]
    areas: list[int]
    total: int
    one: list[int]
    zero: list[int]
    ge: list[int]
    index: dict[Coeffs, int]
    target: Coeffs


def _build_table(space: Space, w: SymplecticClass, classes: Sequence[Coeffs]) -> _SearchTable:
    coeffs = sorted(set(classes))
    n = len(coeffs)
    areas, total = _scaled_areas(w, coeffs)
    one = [0] * n
    zero = [0] * n
    for i in range(n):
        for j in range(n):
            p = dot(space, coeffs[i], coeffs[j])
            if p == 1:
                one[i] |= 1 << j
            elif p == 0:
                zero[i] |= 1 << j
    full = (1 << n) - 1
    ge = [full & ~((1 << i) - 1) for i in range(n)]
    return _SearchTable(space, coeffs, areas, total, one, zero, ge,
                        {c: i for i, c in enumerate(coeffs)}, c1_coeffs(space))


def _search_from(table: _SearchTable, starts: Sequence[int], kmin: int, kmax: int) -> set[tuple[int, ...]]:
    """All cycles of length kmin..kmax (>= 3) whose least catalog index is in
    `starts`, as canonical index tuples."""
    found: set[tuple[int, ...]] = set()
    one, zero, ge, areas, total = table.one, table.zero, table.ge, table.areas, table.total
    target, index = table.target, table.index
    full = (1 << len(table.coeffs)) - 1
    rank = len(target)

    def dfs(path: list[int], sumv: list[int], asum: int, mid: int) -> None:
        m = len(path)
        start, last = path[0], path[-1]
        if m >= 2 and kmin <= m + 1 <= kmax:
            rem = tuple(target[t] - sumv[t] for t in range(rank))
            j = index.get(rem)
            if j is not None and j >= start:
                bit = 1 << j
                if mid & bit and one[last] & bit and one[start] & bit:
                    found.add(canonical_tuple(path + [j]))
        if m + 2 > kmax:
            return
        cand = one[last] & ge[start] & mid
        if m >= 2:
            cand &= zero[start]
            new_mid = mid & zero[last]
        else:
            new_mid = full
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            na = asum + areas[x]
            if na >= total:
                continue
            cx = table.coeffs[x]
            path.append(x)
            dfs(path, [sumv[t] + cx[t] for t in range(rank)], na, new_mid)
            path.pop()

    for s in starts:
        if areas[s] >= total:
            continue
        dfs([s], list(table.coeffs[s]), areas[s], full)
    return found


def _search_worker(args):
    space, w, classes, starts, kmin, kmax = args
    table = _build_table(space, w, classes)
    return _search_from(table, starts, kmin, kmax)


def cycle_search(space: Space, w: SymplecticClass, classes: Sequence[Coeffs], kmin: int, kmax: int,
                 workers: int = 1) -> list[Cycle]:
    """Cycles (k >= 3) over the given classes with sum c1 and the adjacency
    pattern, as sorted canonical coefficient tuples."""
    table = _build_table(space, w, classes)
    n = len(table.coeffs)
    kmin = max(kmin, 3)
    if kmax < kmin or n == 0:
        return []
    if workers <= 1:
        idx_cycles = _search_from(table, range(n), kmin, kmax)
    else:
        chunks = [list(range(i, n, workers)) for i in range(workers)]
        idx_cycles = set()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_search_worker, [(space, w, table.coeffs, ch, kmin, kmax) for ch in chunks]):
                idx_cycles |= part
    cycles = {canonical_tuple(tuple(table.coeffs[i] for i in cyc)) for cyc in idx_cycles}
    return sorted(cycles, key=_sort_key)


def pairs_search(space: Space, w: SymplecticClass, classes: Sequence[Coeffs]) -> list[Cycle]:
    target = c1_coeffs(space)
    pool = set(classes)
    out = set()
    for a in pool:
        b = tuple(t - x for t, x in zip(target, a))
        if b in pool and dot(space, a, b) == 2:
            out.add(canonical_tuple((a, b)))
    return sorted(out, key=_sort_key)


# ------------------------------------------------------------ closed families


def _int_window(lo: Fraction, hi: Fraction, pad: int = 2) -> range:
    return range(floor_fraction(lo) - pad, ceil_fraction(hi) + pad + 1)


def minimal_family_cycles(w: SymplecticClass) -> list[Cycle]:
    """Closed family lists for CP^2, M_1 and the quadric, area-filtered."""
    space = w.space
    cands: list[Cycle] = []
    if space.is_quadric:
        # coefficients (f, b) of fF + bB; area(F) = 1, area(B) = mu
        r = range(-ceil_fraction(w.mu) - 3, ceil_fraction(w.mu) + 4)
        cands.append(((2, 2),))
        cands.append(((1, 2), (1, 0)))
        for b in r:
            cands.append(((b, 1), (2 - b, 1)))
            cands.append(((b, 1), (1, 0), (1 - b, 1)))
            cands.append(((b, 1), (1, 0), (-b, 1), (1, 0)))
    elif space.l == 0:
        cands = [((3,),), ((2,), (1,)), ((1,), (1,), (1,))]
    elif space.l == 1:
        d = w.delta[0]
        s = 1 - d
        r = _int_window(-1 / s, (2 - d) / s)
        cands.append(((3, -1),))
        cands.append(((2, 0), (1, -1)))
        for a in r:
            cands.append(((a + 1, -a), (2 - a, a - 1)))
            cands.append(((a, 1 - a), (1, -1), (2 - a, a - 1)))
            cands.append(((a, 1 - a), (1, -1), (1 - a, a), (1, -1)))
    else:
        raise LatticeError("closed family lists exist only for CP^2, M_1 and the quadric")
    pairing = w.pairing()
    out = set()
    for cyc in cands:
        if all(sum(x * p for x, p in zip(c, pairing)) > 0 for c in cyc):
            out.add(canonical_tuple(cyc))
    return sorted(out, key=_sort_key)


def small_genus_zero_classes(space: Space, w: SymplecticClass) -> list[Coeffs]:
    """Search pool for the generic route on CP^2 / M_1 / quadric."""
    if space.is_quadric:
        return [a.coeffs for a in quadric_catalog(w)]
    if space.l == 0:
        return [(1,), (2,)]
    return [a.coeffs for a in catalog_members(space.l, w)]


# ------------------------------------------------------------------ quotient


def orbit_quotient(space: Space, cycles: Sequence[Cycle], generators: Sequence[Coeffs]):
    """Union-find orbits of the reflection generators inside a finite set of
    canonical cycles.  Returns (representative map, misses)."""
    parent = {c: c for c in cycles}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    misses = []
    for cyc in cycles:
        for m in generators:
            img = canonical_tuple(tuple(reflect_coeffs(space, a, m) for a in cyc))
            if img == cyc:
                continue
            if img not in parent:
                misses.append((cyc, img))
                continue
            ra, rb = find(cyc), find(img)
            if ra != rb:
                if _sort_key(rb) < _sort_key(ra):
                    ra, rb = rb, ra
                parent[rb] = ra
    rep = {}
    groups: dict = {}
    for c in cycles:
        groups.setdefault(find(c), []).append(c)
    for members in groups.values():
        least = min(members, key=_sort_key)
        for c in members:
            rep[c] = least
    return rep, misses


# --------------------------------------------------------------- main entry


def _check_w(l_or_space, w: SymplecticClass) -> Space:
    space = w.space
    if isinstance(l_or_space, Space):
        if l_or_space != space:
            raise LatticeError("space mismatch")
    elif l_or_space is not None and (space.is_quadric or space.l != l_or_space):
        raise LatticeError(f"symplectic class is not on M{l_or_space}")
    if not space.is_quadric and space.l > max_l():
        raise LatticeError(f"l = {space.l} exceeds the cap {max_l()} (set LCY_MAX_L, at most 16)")
    if not is_reduced(w):
        raise LatticeError(f"{w} is not reduced")
    if not is_symplectic_reduced(w):
        raise LatticeError(f"{w} has an exceptional class of non-positive area")
    return space


def raw_cycles(w: SymplecticClass, toric_only: bool = False, method: str = "auto",
               workers: int = 1) -> list[Cycle]:
    """All valid T-positive configurations before the wall quotient."""
    space = w.space
    if method == "auto":
        method = "families" if (space.is_quadric or space.l <= 1) else "search"
    if method == "families":
        cycles = minimal_family_cycles(w)
    elif method == "search":
        if space.is_quadric or space.l <= 1:
            pool = small_genus_zero_classes(space, w)
        elif toric_only:
            pool = [a.coeffs for a in toric_catalog_members(space.l, w)]
        else:
            pool = [a.coeffs for a in catalog_members(space.l, w)]
        kmax = 4 if space.is_quadric else space.l + 3
        kmin = kmax if toric_only else 3
        cycles = cycle_search(space, w, pool, kmin, kmax, workers=workers)
        if not toric_only:
            cycles = [(c1_coeffs(space),)] + pairs_search(space, w, pool) + cycles
    else:
        raise ValueError(f"unknown method {method!r}")
    if toric_only:
        kt = 4 if space.is_quadric else space.l + 3
        cycles = [c for c in cycles if len(c) == kt]
    return sorted(set(cycles), key=_sort_key)


def enumerate_lcy(l, w: SymplecticClass, toric_only: bool = False, method: str = "auto",
                  workers: int = 1) -> EnumerationResult:
    space = _check_w(l, w)
    if not is_c1_nef(w):
        log.warning("%s is not c1-nef: no configurations", w)
        return EnumerationResult(w, [], [], None, toric_only=toric_only, method=method)
    cycles = raw_cycles(w, toric_only=toric_only, method=method, workers=workers)
    for cyc in cycles:
        bad = pattern_violations(space, cyc)
        if bad:
            raise AssertionError(f"enumerated invalid configuration {cyc}: {bad}")
    gens = reflection_generators(w)
    if is_interior(w):
        assert not gens, "interior class with reflection generators"
    rep, misses = orbit_quotient(space, cycles, [g.coeffs for g in gens])
    reps = sorted(set(rep.values()), key=_sort_key)
    kt = 4 if space.is_quadric else space.l + 3
    configs = [CyclicConfig.of(space, c) for c in reps]
    toric = [c for c in configs if c.k == kt]
    elliptic = next((c for c in configs if c.k == 1), None)
    per_length: dict[int, int] = {}
    for c in configs:
        per_length[c.k] = per_length.get(c.k, 0) + 1
    if misses:
        log.info("%d reflection images fell outside the enumerated set", len(misses))
    return EnumerationResult(
        w=w,
        configs=configs,
        toric=toric,
        elliptic=elliptic,
        toric_only=toric_only,
        raw_count=len(cycles),
        raw_toric_count=sum(1 for c in cycles if len(c) == kt),
        per_length=per_length,
        generators=gens,
        reflection_misses=[(_fmt(a), _fmt(b)) for a, b in misses],
        orbit_of=rep,
        method=method,
    )


def _fmt(cyc: Cycle) -> str:
    return ";".join(",".join(str(x) for x in c) for c in cyc)


def orbit_key(result: EnumerationResult, c: CyclicConfig) -> Cycle | None:
    """Orbit representative (canonical cycle) of an arbitrary configuration, or
    None if it is not in the enumerated set."""
    cyc = canonical_tuple(c.coeffs())
    return result.orbit_of.get(cyc)


def smoothing_closure(configs: Iterable[CyclicConfig]) -> set[CyclicConfig]:
    """Closure under single smoothings at every adjacency (canonical forms)."""
    todo = [c.canonical() for c in configs]
    seen = set(todo)
    while todo:
        c = todo.pop()
        for i in range(c.k if c.k > 2 else (1 if c.k == 2 else 0)):
            s = smoothing(c, i).canonical()
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return seen


def stability_check(w1: SymplecticClass, w2: SymplecticClass) -> bool:
    """True when both classes have the same catalog and reflection generators;
    in that case the enumerations are required to coincide."""
    if w1.space != w2.space:
        raise LatticeError("stability check needs classes on the same space")
    space = w1.space
    if space.is_quadric:
        same = quadric_catalog(w1) == quadric_catalog(w2)
    elif space.l == 0:
        same = True
    else:
        same = catalog_members(space.l, w1) == catalog_members(space.l, w2)
    same = same and reflection_generators(w1) == reflection_generators(w2)
    if not same:
        return False
    r1 = enumerate_lcy(space, w1)
    r2 = enumerate_lcy(space, w2)
    if r1.keys() != r2.keys():
        raise AssertionError(f"identical catalogs but different enumerations for {w1} and {w2}")
    return True
