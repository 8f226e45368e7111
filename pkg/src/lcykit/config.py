"""Cyclic homological configurations and the surgeries acting on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import (
    HomologyClass,
    LatticeError,
    Space,
    SymplecticClass,
    area,
    c1,
    c1_coeffs,
    dot,
    genus,
    intersect,
)


class ConfigError(ValueError):
    pass


Coeffs = tuple[int, ...]


def dihedral_images(items: Sequence) -> list[tuple]:
    k = len(items)
    seq = tuple(items)
    rev = tuple(reversed(seq))
    out = []
    for r in range(k):
        out.append(seq[r:] + seq[:r])
        out.append(rev[r:] + rev[:r])
    return out


def canonical_tuple(items: Sequence) -> tuple:
    """Lexicographically least rotation or reflection."""
    return min(dihedral_images(items))


@dataclass(frozen=True)
class CyclicConfig:
    space: Space
    classes: tuple[HomologyClass, ...]

    def __post_init__(self):
        classes = tuple(self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise ConfigError("a configuration needs at least one class")
        for a in classes:
            if a.space != self.space:
                raise ConfigError("class from a different space")

    @staticmethod
    def of(space: Space, coeff_lists) -> "CyclicConfig":
        return CyclicConfig(space, tuple(HomologyClass(space, tuple(c)) for c in coeff_lists))

    @property
    def k(self) -> int:
        return len(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def coeffs(self) -> tuple[Coeffs, ...]:
        return tuple(a.coeffs for a in self.classes)

    def total(self) -> HomologyClass:
        t = self.classes[0]
        for a in self.classes[1:]:
            t = t + a
        return t

    def canonical(self) -> "CyclicConfig":
        return CyclicConfig.of(self.space, canonical_tuple(self.coeffs()))

    def key(self) -> str:
        """Dedup key: canonical coefficient lists as a compact string."""
        return self.space.name + ":" + ";".join(
            ",".join(str(x) for x in c) for c in canonical_tuple(self.coeffs())
        )

    def to_json(self) -> dict:
        return {"space": self.space.name, "classes": [list(c) for c in self.coeffs()]}

    @staticmethod
    def from_json(data: dict, space: Space | None = None) -> "CyclicConfig":
        sp = space if space is not None else Space.parse(data["space"])
        return CyclicConfig.of(sp, data["classes"])

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.classes) + ")"


def canonicalize(c: CyclicConfig) -> CyclicConfig:
    return c.canonical()


def pattern_violations(space: Space, coeffs: Sequence[Coeffs]) -> list[str]:
    """Intersection pattern, genus and total-class checks on raw coefficients."""
    k = len(coeffs)
    out = []
    target = c1_coeffs(space)
    total = tuple(sum(col) for col in zip(*coeffs))
    if total != target:
        out.append(f"sum of classes {total} differs from c1 {target}")

    def g(v):
        twice = 2 + dot(space, v, v) - dot(space, target, v)
        return twice // 2

    if k == 1:
        if tuple(coeffs[0]) != target:
            out.append("single component must equal c1")
        elif g(coeffs[0]) != 1:
            out.append("single component must have genus 1")
        return out
    for i, v in enumerate(coeffs):
        if g(v) != 0:
            out.append(f"component {i} has genus {g(v)}")
    if k == 2:
        p = dot(space, coeffs[0], coeffs[1])
        if p != 2:
            out.append(f"two components must meet twice, got {p}")
        return out
    for i in range(k):
        for j in range(i + 1, k):
            p = dot(space, coeffs[i], coeffs[j])
            adjacent = j == i + 1 or (i == 0 and j == k - 1)
            want = 1 if adjacent else 0
            if p != want:
                out.append(f"components {i},{j} meet {p} times, expected {want}")
    return out


def validate(c: CyclicConfig, w: SymplecticClass | None = None) -> tuple[bool, list[str]]:
    if w is not None and w.space != c.space:
        return False, ["configuration and symplectic class live in different spaces"]
    out = pattern_violations(c.space, c.coeffs())
    if w is not None:
        for i, a in enumerate(c.classes):
            if area(w, a) <= 0:
                out.append(f"component {i} ({a}) has non-positive area {area(w, a)}")
    return (not out), out


def charge(c: CyclicConfig) -> int:
    t = c.total()
    return 12 - c.k - intersect(t, t)


def is_toric(c: CyclicConfig, w: SymplecticClass | None = None) -> bool:
    ok, _ = validate(c, w)
    return ok and c.k >= 3 and charge(c) == 0


def self_intersection_seq(c: CyclicConfig) -> list[int]:
    return [intersect(a, a) for a in c.classes]


def area_seq(c: CyclicConfig, w: SymplecticClass) -> list[Fraction]:
    return [area(w, a) for a in c.classes]


def smoothing(c: CyclicConfig, i: int) -> CyclicConfig:
    """Merge the pair (A_i, A_{i+1 mod k}) into their sum."""
    k = c.k
    if k < 2:
        raise ConfigError("cannot smooth a single component")
    if not 0 <= i < k:
        raise ConfigError(f"adjacency index {i} out of range")
    j = (i + 1) % k
    merged = c.classes[i] + c.classes[j]
    if k == 2:
        return CyclicConfig(c.space, (merged,))
    rest = [c.classes[t] for t in range(k) if t not in (i, j)]
    if j == 0:
        # the pair wraps around: put the merged class last
        return CyclicConfig(c.space, tuple(rest) + (merged,))
    return CyclicConfig(c.space, tuple(c.classes[:i]) + (merged,) + tuple(c.classes[j + 1:]))


def lift(a: HomologyClass, space: Space) -> HomologyClass:
    return HomologyClass(space, a.coeffs + (0,) * (space.rank - a.space.rank))


def _require_blowup(c: CyclicConfig) -> Space:
    if c.space.is_quadric:
        raise ConfigError("blow-ups are tracked in the basis H, E_1, ..., E_l only")
    return Space.blowup(c.space.l + 1)


def toric_blow_up(c: CyclicConfig, i: int) -> CyclicConfig:
    """Blow up the intersection point of (A_i, A_{i+1 mod k}) with E_{l+1}."""
    new = _require_blowup(c)
    k = c.k
    if k < 2:
        raise ConfigError("no intersection point to blow up")
    if not 0 <= i < k:
        raise ConfigError(f"adjacency index {i} out of range")
    e = HomologyClass(new, (0,) * c.space.rank + (1,))
    lifted = [lift(a, new) for a in c.classes]
    j = (i + 1) % k
    if k == 2:
        # both components pass through both points; blowing one up leaves a triangle
        a0, a1 = lifted[i], lifted[j]
        return CyclicConfig(new, (a0 - e, e, a1 - e))
    out = list(lifted)
    out[i] = out[i] - e
    out[j] = out[j] - e
    if j == 0:
        return CyclicConfig(new, tuple(out) + (e,))
    return CyclicConfig(new, tuple(out[: i + 1]) + (e,) + tuple(out[i + 1:]))


def non_toric_blow_up(c: CyclicConfig, i: int) -> CyclicConfig:
    """Blow up a point of A_i away from the other components."""
    new = _require_blowup(c)
    if not 0 <= i < c.k:
        raise ConfigError(f"component index {i} out of range")
    e = HomologyClass(new, (0,) * c.space.rank + (1,))
    out = [lift(a, new) for a in c.classes]
    out[i] = out[i] - e
    return CyclicConfig(new, tuple(out))


@dataclass(frozen=True)
class ReductionStep:
    case: str  # "a", "b" or "c"
    index: int
    result: CyclicConfig | None
    w: SymplecticClass | None = None


def _drop_last(a: HomologyClass, space: Space) -> HomologyClass:
    return HomologyClass(space, a.coeffs[:-1])


def truncate(w: SymplecticClass) -> SymplecticClass:
    return SymplecticClass(Space.blowup(w.l - 1), w.delta[:-1])


def reduce_once(c: CyclicConfig, w: SymplecticClass | None = None) -> ReductionStep:
    """Blow down E_l following the reduced-basis induction.

    (b) exactly one component equals E_l (k >= 3): remove it and add E_l to
        both neighbours;
    (a) exactly one component has non-zero E_l-coefficient (it is -1):
        add E_l to it;
    (c) k = 2 and the configuration is (3H-E_1-...-E_{l-1}-2E_l, E_l): terminal.
    """
    if c.space.is_quadric or c.space.l < 2:
        raise ConfigError("reduction needs M_l with l >= 2")
    l = c.space.l
    low = Space.blowup(l - 1)
    wl = truncate(w) if w is not None else None
    e_l = tuple([0] * l + [1])
    coeffs = c.coeffs()
    k = c.k
    hits = [i for i, v in enumerate(coeffs) if v == e_l]
    if k >= 3 and len(hits) == 1:
        i = hits[0]
        prev, nxt = (i - 1) % k, (i + 1) % k
        out = []
        for t in range(k):
            if t == i:
                continue
            v = coeffs[t]
            if t in (prev, nxt):
                v = v[:-1] + (v[-1] + 1,)
            if v[-1] != 0:
                raise ConfigError(f"case (b) leaves E_{l} in component {t}")
            out.append(HomologyClass(low, v[:-1]))
        return ReductionStep("b", i, CyclicConfig(low, tuple(out)), wl)
    nonzero = [i for i, v in enumerate(coeffs) if v[-1] != 0]
    if len(nonzero) == 1:
        i = nonzero[0]
        v = coeffs[i]
        if v[-1] != -1:
            raise ConfigError(f"component {i} has E_{l}-coefficient {v[-1]}")
        out = [HomologyClass(low, u[:-1]) for u in coeffs]
        return ReductionStep("a", i, CyclicConfig(low, tuple(out)), wl)
    if k == 2:
        term = tuple([3] + [-1] * (l - 1) + [-2])
        pair = set(coeffs)
        if pair == {term, e_l}:
            return ReductionStep("c", coeffs.index(term), None, w)
    raise ConfigError(f"no reduction case applies to {c}")


def germ(c: CyclicConfig, w: SymplecticClass | None = None) -> tuple[CyclicConfig, SymplecticClass | None, list[str]]:
    """Iterate reduce_once until M_1 or the terminal pair; returns the germ, its
    symplectic class, and the sequence of applied cases."""
    cur, cw = c, w
    cases: list[str] = []
    while not cur.space.is_quadric and cur.space.l >= 2:
        step = reduce_once(cur, cw)
        cases.append(step.case)
        if step.case == "c":
            break
        cur, cw = step.result, step.w
    return cur, cw, cases
