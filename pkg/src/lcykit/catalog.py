"""Finite catalogs of classes that can occur in log Calabi-Yau configurations.

For a reduced class on M_l every component of a configuration lies in one of
six parameterized families; the first three are the only ones allowed in toric
configurations.  Area positivity (and staying below the total c1-area) cuts the
integer parameter k of the first family down to a finite window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .lattice import (
    HomologyClass,
    LatticeError,
    Space,
    SymplecticClass,
    area,
    c1,
    ceil_fraction,
    floor_fraction,
    genus,
    intersect,
    is_reduced,
    is_symplectic_reduced,
)

FAMILY_NAMES = {
    1: "kH-(k-1)E1-sum(eps_i E_i)",
    2: "H-E1-sum(eps_i E_i)",
    3: "E_p-sum_{i>p}(eps_i E_i)",
    4: "2H-sum_{i>=2}(eps_i E_i)",
    5: "3H-E1-...-El",
    6: "3H-E1-...-E_{p-1}-2E_p-sum_{i>p}(eps_i E_i)",
}
TORIC_FAMILIES = (1, 2, 3)


@dataclass(frozen=True)
class ClassFamily:
    family: int
    p: int | None = None

    @property
    def toric(self) -> bool:
        return self.family in TORIC_FAMILIES

    @property
    def shape(self) -> str:
        return FAMILY_NAMES[self.family]


def _bits(n: int):
    return product((0, 1), repeat=n)


def _check_input(l: int, w: SymplecticClass) -> None:
    if w.space.is_quadric or w.space.l != l:
        raise LatticeError(f"catalog needs a class on M{l}")
    if l < 1:
        raise LatticeError("catalog is defined for l >= 1")
    if not is_reduced(w):
        raise LatticeError(f"{w} is not reduced")
    if not is_symplectic_reduced(w):
        raise LatticeError(f"{w} has an exceptional class of non-positive area")


def _k_window(w: SymplecticClass, eps_area: Fraction, total: Fraction) -> range:
    # area(kH-(k-1)E1-sum eps) = k(1-d1) + d1 - eps_area, need 0 < area < total
    d1 = w.delta[0]
    slope = 1 - d1
    lo = (eps_area - d1) / slope
    hi = (total - d1 + eps_area) / slope
    k_min = floor_fraction(lo) + 1
    k_max = ceil_fraction(hi) - 1
    return range(k_min, k_max + 1)


def family_members(l: int, w: SymplecticClass, families=(1, 2, 3, 4, 5, 6)):
    """Yield (family, coeff tuple) for members with 0 < area < total c1-area,
    plus c1 itself (family 5) which is only used by the elliptic configuration."""
    space = Space.blowup(l)
    total = w.total_area()
    d = w.delta
    for fam in families:
        if fam == 1:
            for eps in _bits(l - 1):
                eps_area = sum(e * x for e, x in zip(eps, d[1:]))
                for k in _k_window(w, eps_area, total):
                    yield ClassFamily(1), (k, -(k - 1)) + tuple(-e for e in eps)
        elif fam == 2:
            for eps in _bits(l - 1):
                yield ClassFamily(2), (1, -1) + tuple(-e for e in eps)
        elif fam == 3:
            for p in range(2, l + 1):
                for eps in _bits(l - p):
                    v = [0] * (l + 1)
                    v[p] = 1
                    for i, e in enumerate(eps, start=p + 1):
                        v[i] = -e
                    yield ClassFamily(3, p), tuple(v)
        elif fam == 4:
            for eps in _bits(l - 1):
                yield ClassFamily(4), (2, 0) + tuple(-e for e in eps)
        elif fam == 5:
            yield ClassFamily(5), c1(space).coeffs
        elif fam == 6:
            for p in range(2, l + 1):
                for eps in _bits(l - p):
                    v = [3] + [-1] * (p - 1) + [-2] + [-e for e in eps]
                    yield ClassFamily(6, p), tuple(v)


def _filtered(l: int, w: SymplecticClass, families) -> list[HomologyClass]:
    _check_input(l, w)
    space = Space.blowup(l)
    total = w.total_area()
    seen = set()
    for _, coeffs in family_members(l, w, families):
        a = area(w, HomologyClass(space, coeffs))
        if 0 < a < total:
            seen.add(coeffs)
    return [HomologyClass(space, c) for c in sorted(seen)]


def catalog_members(l: int, w: SymplecticClass) -> list[HomologyClass]:
    """Members of the full catalog with 0 < area < total c1-area, sorted
    lexicographically by coefficients.  c1 itself is excluded (it only forms the
    elliptic configuration)."""
    return _filtered(l, w, (1, 2, 3, 4, 6))


def toric_catalog_members(l: int, w: SymplecticClass) -> list[HomologyClass]:
    return _filtered(l, w, TORIC_FAMILIES)


def classify_family(a: HomologyClass) -> list[ClassFamily]:
    """All catalog families whose template matches the class."""
    if a.space.is_quadric:
        return []
    l = a.space.l
    h, e = a.coeffs[0], a.coeffs[1:]
    rest = e[1:]
    out = []
    if l >= 1:
        if e[0] == -(h - 1) and all(x in (0, -1) for x in rest):
            out.append(ClassFamily(1))
        if h == 1 and e[0] == -1 and all(x in (0, -1) for x in rest):
            out.append(ClassFamily(2))
        if h == 0:
            for p in range(2, l + 1):
                if e[:p - 1] == (0,) * (p - 1) and e[p - 1] == 1 and all(x in (0, -1) for x in e[p:]):
                    out.append(ClassFamily(3, p))
        if h == 2 and e[0] == 0 and all(x in (0, -1) for x in rest):
            out.append(ClassFamily(4))
        if a.coeffs == c1(a.space).coeffs:
            out.append(ClassFamily(5))
        if h == 3:
            for p in range(2, l + 1):
                if e[:p - 1] == (-1,) * (p - 1) and e[p - 1] == -2 and all(x in (0, -1) for x in e[p:]):
                    out.append(ClassFamily(6, p))
    return out


def negative_sphere_classes(l: int, n: int, w: SymplecticClass) -> list[HomologyClass]:
    """Classes of square -n from the table of negative symplectic sphere classes
    of M_2 and M_3, restricted to those of positive area."""
    if l not in (2, 3):
        raise LatticeError("negative sphere class tables exist for l in {2, 3} only")
    if n < 1:
        raise LatticeError("n must be positive")
    if w.space != Space.blowup(l):
        raise LatticeError(f"symplectic class must live on M{l}")
    space = Space.blowup(l)

    def v(h, *e):
        return HomologyClass(space, (h,) + tuple(e) + (0,) * (l - len(e)))

    out: list[HomologyClass] = []
    if l == 2:
        if n == 1:
            out = [v(0, 1, 0), v(0, 0, 1), v(1, -1, -1)]
        elif n % 2 == 1:
            k = (n - 1) // 2
            out = [v(-k, k + 1)]
        else:
            k = n // 2
            out = [v(-(k - 1), k, -1)]
    else:
        if n == 1:
            out = [v(0, 1), v(0, 0, 1), v(0, 0, 0, 1), v(1, -1, -1), v(1, -1, 0, -1), v(1, 0, -1, -1)]
        elif n == 2:
            out = [v(0, 1, -1), v(0, 1, 0, -1), v(0, 0, 1, -1), v(1, -1, -1, -1)]
        elif n % 2 == 1:
            k = (n - 1) // 2
            out = [v(-k, k + 1), v(-(k - 1), k, -1, -1)]
        else:
            k = (n - 2) // 2
            out = [v(-k, k + 1, -1), v(-k, k + 1, 0, -1)]
    for a in out:
        assert intersect(a, a) == -n and genus(a) == 0, a
    return sorted((a for a in out if area(w, a) > 0), key=lambda a: a.coeffs)


def quadric_catalog(w: SymplecticClass) -> list[HomologyClass]:
    """Genus-zero classes of the quadric that occur in configurations, with
    0 < area < total.  With area(F) = 1 and area(B) = mu these are F, F+B, F+2B
    and B+bF for -mu < b < mu+2."""
    if not w.space.is_quadric:
        raise LatticeError("quadric_catalog needs a quadric class")
    if w.mu < 1:
        raise LatticeError("mu must be at least 1")
    space = w.space
    total = w.total_area()
    mu = w.mu
    cands = {(1, 0), (1, 1), (1, 2)}
    for b in range(-ceil_fraction(mu), ceil_fraction(mu) + 3):
        cands.add((b, 1))
    out = []
    for c in sorted(cands):
        a = HomologyClass(space, c)
        if 0 < area(w, a) < total and genus(a) == 0:
            out.append(a)
    return out


def catalog_rows(l: int, w: SymplecticClass, toric: bool = False):
    """(class, square, genus, area) rows for the TSV catalog dump."""
    members = toric_catalog_members(l, w) if toric else catalog_members(l, w)
    return [(a, intersect(a, a), genus(a), area(w, a)) for a in members]
