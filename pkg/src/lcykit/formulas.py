"""Closed-form counts of log Calabi-Yau divisors and toric-region predicates.

Everything here is exact rational arithmetic; ceilings of rationals go through
`ceil_fraction`.  The enumerator in `enumerate` is the oracle these formulas
are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, prod

import sympy

from .lattice import (
    LatticeError,
    Space,
    SymplecticClass,
    ceil_fraction,
    is_c1_nef,
    is_reduced,
    is_restrictive,
    is_symplectic_reduced,
)


# ---------------------------------------------------------- f and g functions


@dataclass(frozen=True)
class GFunction:
    """g: {2, ..., l} -> {0, 1}; bits[0] is g(2)."""

    l: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != max(self.l - 1, 0):
            raise ValueError(f"g on {{2..{self.l}}} needs {self.l - 1} values")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("g takes values in {0, 1}")

    def __call__(self, i: int) -> int:
        if not 2 <= i <= self.l:
            raise ValueError(f"g is defined on 2..{self.l}")
        return self.bits[i - 2]


@dataclass(frozen=True)
class FFunction:
    """f: {1, ..., l} -> Z_+ with f(1) = a and steps 0 or 1; values[0] is f(1)."""

    values: tuple[int, ...]

    def __post_init__(self):
        v = self.values
        if not v or v[0] < 1:
            raise ValueError("f(1) must be a positive integer")
        if any(v[i] - v[i - 1] not in (0, 1) for i in range(1, len(v))):
            raise ValueError("f must increase by 0 or 1 at each step")

    @property
    def l(self) -> int:
        return len(self.values)

    @property
    def a(self) -> int:
        return self.values[0]

    def __call__(self, i: int) -> int:
        return self.values[i - 1]


def all_g(l: int) -> list[GFunction]:
    return [GFunction(l, bits) for bits in product((0, 1), repeat=max(l - 1, 0))]


def all_f(l: int, a: int) -> list[FFunction]:
    out = []
    for steps in product((0, 1), repeat=max(l - 1, 0)):
        vals = [a]
        for s in steps:
            vals.append(vals[-1] + s)
        out.append(FFunction(tuple(vals)))
    return out


def full_f(l: int, a: int) -> FFunction:
    """The member of F_l^a that increases at every step."""
    return FFunction(tuple(a + i for i in range(l)))


def compositions(n: int):
    """Ordered tuples of positive integers summing to n (one empty tuple for n=0)."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def psi(w: SymplecticClass, g: GFunction) -> int:
    d = w.delta
    if g.l != len(d):
        raise ValueError("g and delta have different l")
    num = d[0] - sum(g(i) * d[i - 1] for i in range(2, g.l + 1))
    return ceil_fraction(num / (1 - d[0]))


def phi(f: FFunction, g: GFunction) -> int:
    if f.l != g.l:
        raise ValueError("f and g have different l")
    out = 1
    for i in range(2, f.l + 1):
        step = f(i) - f(i - 1)
        gi = g(i)
        out *= (1 - gi) * f(i - 1) - (-1) ** gi * (step + 1)
    return out


def a_pow_t(a: int, t) -> int:
    return prod((a + i) ** ti for i, ti in enumerate(t))


def a_pow_g(a: int, g: GFunction) -> int:
    return sum(phi(f, g) for f in all_f(g.l, a))


def lemma_relation_sides(a: int, l: int) -> tuple[int, int]:
    lhs = sum(phi(f, g) for f in all_f(l, a) for g in all_g(l))
    rhs = 2 * sum(a_pow_t(a, t) for t in compositions(l - 1))
    return lhs, rhs


def lemma_relation_check(a: int, l: int) -> bool:
    lhs, rhs = lemma_relation_sides(a, l)
    return lhs == rhs


# ------------------------------------------------------------- input checks


def _blowup_class(w: SymplecticClass, l: int | None = None) -> SymplecticClass:
    if w.space.is_quadric:
        raise LatticeError("expected a class on a blow-up of CP^2")
    if l is not None and w.l != l:
        raise LatticeError(f"expected a class on M{l}, got M{w.l}")
    if not is_reduced(w) or not is_symplectic_reduced(w):
        raise LatticeError(f"{w} is not a reduced symplectic class")
    if not is_c1_nef(w):
        raise LatticeError(f"{w} is not c1-nef")
    return w


def _w(delta) -> SymplecticClass:
    return SymplecticClass.blowup([Fraction(x) for x in delta])


def _ceil_ratio(num: Fraction, den: Fraction) -> int:
    return ceil_fraction(Fraction(num) / Fraction(den))


def toric_ceiling_sum(d1, d2) -> int:
    d1, d2 = Fraction(d1), Fraction(d2)
    return _ceil_ratio(d1, 1 - d1) + _ceil_ratio(d1 - d2, 1 - d1)


# ---------------------------------------------------------- minimal models


def count_minimal(space: Space, w: SymplecticClass | None = None) -> int:
    if space.is_quadric:
        if w is None or w.mu < 1:
            raise LatticeError("quadric count needs mu >= 1")
        return 5 if w.mu == 1 else 3 * ceil_fraction(w.mu) + 3
    if space.l == 0:
        return 3
    if space.l == 1:
        if w is None:
            raise LatticeError("M1 count needs delta")
        d = w.delta[0]
        if not 0 < d < 1:
            raise LatticeError("M1 needs 0 < delta < 1")
        return 3 * _ceil_ratio(d, 1 - d) + 4
    raise LatticeError("count_minimal covers CP^2, the quadric and M1 only")


def count_minimal_toric(space: Space, w: SymplecticClass | None = None) -> int:
    if space.is_quadric:
        return 1 if w.mu == 1 else ceil_fraction(w.mu)
    if space.l == 0:
        return 1
    if space.l == 1:
        d = w.delta[0]
        return _ceil_ratio(d, 1 - d)
    raise LatticeError("count_minimal_toric covers CP^2, the quadric and M1 only")


# --------------------------------------------------------------------- M2


@dataclass(frozen=True)
class RegionLabelM2:
    kind: str  # "PPQ" for P_i P_{i+1} Q_i, "QQP" for Q_i Q_{i+1} P_{i+1}, "OM" for the wall
    i: int | None = None

    def __str__(self) -> str:
        if self.kind == "PPQ":
            return f"P{self.i}P{self.i + 1}Q{self.i}"
        if self.kind == "QQP":
            return f"Q{self.i}Q{self.i + 1}P{self.i + 1}"
        return "OM"


def m2_region(d1, d2) -> RegionLabelM2:
    w = _blowup_class(_w((d1, d2)), 2)
    d1, d2 = w.delta
    if d1 == d2:
        return RegionLabelM2("OM")
    # a_k = -k + (k+1) d1 and b_k = a_k - d2 are the areas of the walls -kH+(k+1)E1(-E2)
    big_a = 0
    while -(big_a + 1) + (big_a + 2) * d1 > 0:
        big_a += 1
    b = -big_a + (big_a + 1) * d1 - d2
    if b > 0:
        return RegionLabelM2("QQP", big_a)
    return RegionLabelM2("PPQ", big_a)


def count_m2_general(d1, d2) -> int:
    label = m2_region(d1, d2)
    if label.kind == "OM":
        return 13
    return 7 * toric_ceiling_sum(d1, d2) + 12


def count_m2_toric(d1, d2) -> int:
    label = m2_region(d1, d2)
    if label.kind == "OM":
        return 1
    return toric_ceiling_sum(d1, d2)


def count_m2_by_region(label: RegionLabelM2) -> tuple[int, int]:
    """(general, toric) counts as listed per region."""
    if label.kind == "OM":
        return 13, 1
    if label.kind == "PPQ":
        return 14 * label.i + 19, 2 * label.i + 1
    return 14 * label.i + 26, 2 * label.i + 2


# --------------------------------------------------------------------- M3


def _m3_walls(d1, d2, d3, k):
    a = -k + (k + 1) * d1
    return a, a - d2  # a_k, b_k


def m3_tf(d1, d2, d3, n: int) -> int:
    """Number of toric configurations of M3 whose self-intersection sequence
    carries the entry -n (n >= 2), or the all (-1) hexagon for n = 1."""
    s = d1 + d2 + d3
    if n == 1:
        return 1
    if n == 2:
        if d1 == d2 == d3:
            return 0
        if d1 > d2 > d3:
            return 7 if s < 1 else 3
        return (2 if s < 1 else 1)  # exactly one of d1 = d2, d2 = d3
    k = (n - 1) // 2
    a, b = _m3_walls(d1, d2, d3, k)
    if n % 2 == 1:
        if a > 0:
            return {(True, True): 5, (True, False): 2, (False, True): 2, (False, False): 1}[(d2 > d3, s < 1)]
        if s - 1 < a:
            return 2 if d2 > d3 else 1
        return 0
    if b > 0:
        return {(True, True): 5, (True, False): 2, (False, True): 2, (False, False): 1}[(d2 > d3, s < 1)]
    if d3 - d2 < b:
        return 2 if s < 1 else 1
    return 0


def count_m3_toric_terms(d1, d2, d3) -> dict[int, int]:
    w = _blowup_class(_w((d1, d2, d3)), 3)
    d1, d2, d3 = w.delta
    out = {1: 1, 2: m3_tf(d1, d2, d3, 2)}
    k = 1
    while True:
        odd = m3_tf(d1, d2, d3, 2 * k + 1)
        even = m3_tf(d1, d2, d3, 2 * k + 2)
        if odd == 0 and even == 0:
            # both walls decrease in k, so later terms vanish as well
            break
        out[2 * k + 1] = odd
        out[2 * k + 2] = even
        k += 1
    return {n: v for n, v in out.items() if v}


def count_m3_toric(d1, d2, d3) -> int:
    return sum(count_m3_toric_terms(d1, d2, d3).values())


def count_m3_toric_interior(d1, d2, d3) -> int:
    d1, d2, d3 = Fraction(d1), Fraction(d2), Fraction(d3)
    s = 1 - d1
    return 3 * (_ceil_ratio(d1, s) + _ceil_ratio(d1 - d2, s)) + 2 * (
        _ceil_ratio(d1 - d3, s) + _ceil_ratio(d1 - d2 - d3, s)
    )


M3_REGION_VALUES = {
    1: lambda i: 10 * i - 2,
    2: lambda i: 10 * i,
    3: lambda i: 10 * i + 3,
    4: lambda i: 10 * i + 5,
    5: lambda i: 4 * i - 1,
    6: lambda i: 4 * i,
    7: lambda i: 4 * i + 1,
    8: lambda i: 4 * i,
    9: lambda i: 4 * i + 2,
    10: lambda i: 4 * i + 3,
    11: lambda i: i + 1,
    12: lambda i: 3,
    13: lambda i: 2,
    14: lambda i: 1,
}


@dataclass(frozen=True)
class RegionLabelM3:
    region: int  # 1..14
    i: int | None = None

    @property
    def value(self) -> int:
        return M3_REGION_VALUES[self.region](self.i)

    def __str__(self) -> str:
        return f"({self.region})" + (f" i={self.i}" if self.i is not None else "")


def m3_region(d1, d2, d3) -> RegionLabelM3:
    """Classify a reduced point of M3 into one of the fourteen region kinds using
    the wall inequalities a_k > 0, b_k > 0 and their lower neighbours."""
    w = _blowup_class(_w((d1, d2, d3)), 3)
    d1, d2, d3 = w.delta
    s = d1 + d2 + d3
    if d1 == d2:
        if d2 == d3:
            return RegionLabelM3(14)
        return RegionLabelM3(12 if s < 1 else 13)
    na = nb = 0
    while _m3_walls(d1, d2, d3, na + 1)[0] > 0:
        na += 1
    while _m3_walls(d1, d2, d3, nb + 1)[1] > 0:
        nb += 1
    if not (na == nb or na == nb + 1):
        raise AssertionError(f"unexpected wall counts {na}, {nb} at {(d1, d2, d3)}")
    a_next = _m3_walls(d1, d2, d3, na + 1)[0]
    b_next = _m3_walls(d1, d2, d3, nb + 1)[1]
    a_mid = s - 1 < a_next
    b_mid = d3 - d2 < b_next
    if d2 == d3 and s == 1:
        return RegionLabelM3(11, na + nb + 1)
    if d2 == d3:
        if na == nb:
            return RegionLabelM3(6 if a_mid else 5, na + 1)
        return RegionLabelM3(7, na)
    if s == 1:
        if na == nb:
            return RegionLabelM3(8, na + 1)
        return RegionLabelM3(10 if b_mid else 9, na)
    if na == nb:
        return RegionLabelM3(2 if a_mid else 1, na + 1)
    return RegionLabelM3(4 if b_mid else 3, na)


# -------------------------------------------------------- restrictive region


@dataclass(frozen=True)
class FormulaValue:
    value: int
    exact: bool

    @property
    def flag(self) -> str:
        return "exact" if self.exact else "upper_bound"


def restrictive_count_toric(w: SymplecticClass) -> FormulaValue:
    _blowup_class(w)
    l = w.l
    if l < 2:
        raise LatticeError("the restrictive formulas need l >= 2")
    top = full_f(l, 4)
    twice = sum(phi(top, g) * psi(w, g) for g in all_g(l))
    if twice % 2:
        raise AssertionError("toric formula produced a half-integer")
    return FormulaValue(twice // 2, is_restrictive(w))


def _n_total(l: int, a: int) -> int:
    return sum(phi(f, g) for f in all_f(l, a) for g in all_g(l))


def restrictive_germ_terms(w: SymplecticClass) -> dict[str, Fraction]:
    """Contribution of each germ to the restrictive general count.

    keys: "elliptic", "square" (length-4 germs on M1 with k >= 0),
    "triangle" (length-3 germs with k >= 0), "triangle_line" (the germ
    (H-E1, H, H)), "pair" (length-2 germs with k >= 0), "pair_conic" (the two
    germs (2H, H-E1) and (2H-E1, H)), "terminal" (the germs
    (3H-E1-...-2E_j, E_j), summed over j)."""
    _blowup_class(w)
    l = w.l
    if l < 2:
        raise LatticeError("the restrictive formulas need l >= 2")
    half = Fraction(1, 2)
    gs = all_g(l)
    sym = 2 ** (l - 1)  # one pattern per g is fixed by the symmetry of the germ
    terms = {
        "elliptic": Fraction(1),
        "square": sum((half * a_pow_g(4, g) + half) * psi(w, g) for g in gs),
        "triangle": sum(Fraction(a_pow_g(3, g)) * psi(w, g) for g in gs),
        "triangle_line": half * (_n_total(l, 3) - sym) + sym,
        "pair": sum((half * a_pow_g(2, g) + half) * psi(w, g) for g in gs),
        "pair_conic": 2 * (half * (_n_total(l, 2) - sym) + sym),
    }
    term = Fraction(0)
    for j in range(2, l + 1):
        m = l - j + 1
        term += half * _n_total(m, 2) + Fraction(2) ** (l - j - 1)
    terms["terminal"] = term
    return terms


def restrictive_count_general(w: SymplecticClass) -> FormulaValue:
    total = sum(restrictive_germ_terms(w).values())
    if total.denominator != 1:
        raise AssertionError(f"general formula produced a non-integer {total}")
    return FormulaValue(int(total), is_restrictive(w))


def restrictive_coefficient(g: GFunction) -> int:
    """1 + (2^g + 4^g)/2 + 3^g, the coefficient of psi(delta, g)."""
    twice = 2 + a_pow_g(2, g) + a_pow_g(4, g) + 2 * a_pow_g(3, g)
    return twice // 2


# --------------------------------------------------------------- KKP bound


def kkp_upper_bound(l: int, d1, d2) -> int:
    if l < 2:
        raise LatticeError("the bound is stated for l >= 2")
    n = toric_ceiling_sum(d1, d2)
    return n * factorial(l + 2) // factorial(4)


# ---------------------------------------------------------- toric regions

_THIRD = Fraction(1, 3)
M5_POINTS = {
    "M": (_THIRD,) * 5,
    "O": (Fraction(0),) * 5,
    "A": (Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
    "D": (_THIRD,) * 4 + (Fraction(0),),
    "X": (Fraction(1, 2),) + (Fraction(1, 4),) * 4,
}
M5_DELETED_FACES = (("M", "O", "D"), ("M", "A", "D"), ("M", "O", "X"))


def in_simplex(point, vertices) -> bool:
    """Exact membership of a point in the closed simplex spanned by vertices."""
    n = len(vertices)
    rows = [[sympy.Rational(v[r]) for v in vertices] for r in range(len(point))]
    rows.append([sympy.Integer(1)] * n)
    rhs = [sympy.Rational(x) for x in point] + [sympy.Integer(1)]
    mat = sympy.Matrix(rows)
    try:
        sol, params = mat.gauss_jordan_solve(sympy.Matrix(rhs))
    except ValueError:
        return False
    if params.shape[0]:
        # degenerate vertex set; fix free parameters at zero
        sol = sol.subs({p: 0 for p in params})
    return all(x >= 0 for x in sol)


def toric_region_member(l: int, w: SymplecticClass) -> bool:
    _blowup_class(w, l)
    d = w.delta
    if l <= 3:
        return True
    if l == 4:
        if d[0] == d[1] == d[2] == d[3]:
            return False
        if d[0] + d[1] + d[2] == 1 and d[1] == d[2] == d[3]:
            return False
        return True
    if l == 5:
        for face in M5_DELETED_FACES:
            if in_simplex(d, [M5_POINTS[v] for v in face]):
                return False
        return True
    raise LatticeError("toric region predicates are known for l <= 5 only")

