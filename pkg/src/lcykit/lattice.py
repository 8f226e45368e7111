"""Second homology of rational surfaces with exact arithmetic.

Two kinds of ambient space are modelled: the l-fold blow-up M_l of CP^2 with
basis H, E_1, ..., E_l (H.H = 1, E_i.E_i = -1), and the quadric S^2 x S^2 with
basis F, B (F.F = B.B = 0, F.B = 1).  Symplectic classes are normalized so that
area(H) = 1 and area(E_i) = delta_i, or area(F) = 1 and area(B) = mu.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

DEFAULT_MAX_L = 6
HARD_MAX_L = 16


class LatticeError(ValueError):
    pass


def max_l() -> int:
    """Cap on the number of blow-ups, read from LCY_MAX_L (never above 16)."""
    raw = os.environ.get("LCY_MAX_L")
    if raw is None:
        return DEFAULT_MAX_L
    try:
        value = int(raw)
    except ValueError as exc:
        raise LatticeError(f"LCY_MAX_L must be an integer, got {raw!r}") from exc
    if value < 0:
        raise LatticeError("LCY_MAX_L must be non-negative")
    return min(value, HARD_MAX_L)


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "a/b" or an integer.  Decimal notation is rejected on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if not m:
        raise LatticeError(f"not an exact rational (use a/b): {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise LatticeError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True, order=True)
class Space:
    """M_l for l >= 0, or the quadric S^2 x S^2 (stored with l = -1)."""

    l: int

    @staticmethod
    def blowup(l: int) -> "Space":
        if l < 0:
            raise LatticeError("number of blow-ups must be non-negative")
        return Space(l)

    @staticmethod
    def quadric() -> "Space":
        return Space(-1)

    @property
    def is_quadric(self) -> bool:
        return self.l < 0

    @property
    def rank(self) -> int:
        return 2 if self.is_quadric else self.l + 1

    @property
    def name(self) -> str:
        return "quadric" if self.is_quadric else f"M{self.l}"

    @staticmethod
    def parse(text: str) -> "Space":
        t = text.strip()
        if t.lower() in ("quadric", "s2xs2"):
            return Space.quadric()
        if t.upper() == "CP2":
            return Space.blowup(0)
        m = re.fullmatch(r"[Mm](\d+)", t)
        if not m:
            raise LatticeError(f"unknown space {text!r} (expected M<l> or quadric)")
        return Space.blowup(int(m.group(1)))

    def __str__(self) -> str:
        return self.name


def dot(space: Space, u: Sequence[int], v: Sequence[int]) -> int:
    """Intersection pairing on raw coefficient vectors."""
    if space.is_quadric:
        return u[0] * v[1] + u[1] * v[0]
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


@dataclass(frozen=True)
class HomologyClass:
    space: Space
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.space.rank:
            raise LatticeError(
                f"{self.space} needs {self.space.rank} coefficients, got {len(coeffs)}"
            )

    def _check(self, other: "HomologyClass") -> None:
        if not isinstance(other, HomologyClass) or other.space != self.space:
            raise LatticeError("classes live in different spaces")

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(self.space, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(self.space, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.space, tuple(-a for a in self.coeffs))

    def __mul__(self, n: int) -> "HomologyClass":
        return HomologyClass(self.space, tuple(n * a for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.space.is_quadric:
            names = ["F", "B"]
        else:
            names = ["H"] + [f"E{i}" for i in range(1, self.space.l + 1)]
        parts = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append((sign, mag + name))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def to_json(self) -> dict:
        return {"space": self.space.name, "coeffs": list(self.coeffs)}

    @staticmethod
    def from_json(data: dict) -> "HomologyClass":
        return HomologyClass(Space.parse(data["space"]), tuple(data["coeffs"]))


def basis_class(space: Space, index: int) -> HomologyClass:
    v = [0] * space.rank
    v[index] = 1
    return HomologyClass(space, tuple(v))


def H(space: Space) -> HomologyClass:
    return basis_class(space, 0)


def E(space: Space, i: int) -> HomologyClass:
    if space.is_quadric or not 1 <= i <= space.l:
        raise LatticeError(f"E{i} does not exist in {space}")
    return basis_class(space, i)


def F(space: Space) -> HomologyClass:
    return basis_class(space, 0)


def B(space: Space) -> HomologyClass:
    return basis_class(space, 1)


def cls(space: Space, *coeffs: int) -> HomologyClass:
    return HomologyClass(space, tuple(coeffs))


def intersect(a: HomologyClass, b: HomologyClass) -> int:
    a._check(b)
    return dot(a.space, a.coeffs, b.coeffs)


def c1_coeffs(space: Space) -> tuple[int, ...]:
    if space.is_quadric:
        return (2, 2)
    return (3,) + (-1,) * space.l


def c1(space: Space) -> HomologyClass:
    return HomologyClass(space, c1_coeffs(space))


def genus(a: HomologyClass) -> int:
    twice = 2 + intersect(a, a) - intersect(c1(a.space), a)
    if twice % 2:
        raise LatticeError(f"non-integral genus for {a}")
    return twice // 2


@dataclass(frozen=True)
class SymplecticClass:
    """Normalized symplectic class: delta on M_l, or mu on the quadric."""

    space: Space
    delta: tuple[Fraction, ...] = ()
    mu: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(Fraction(d) for d in self.delta))
        if self.mu is not None:
            object.__setattr__(self, "mu", Fraction(self.mu))
        if self.space.is_quadric:
            if self.mu is None or self.delta:
                raise LatticeError("quadric class needs mu and no delta")
        else:
            if self.mu is not None:
                raise LatticeError("blow-up class takes delta, not mu")
            if len(self.delta) != self.space.l:
                raise LatticeError(f"{self.space} needs {self.space.l} deltas")

    @staticmethod
    def blowup(delta: Iterable) -> "SymplecticClass":
        d = tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in delta)
        return SymplecticClass(Space.blowup(len(d)), d)

    @staticmethod
    def quadric(mu) -> "SymplecticClass":
        m = parse_rational(mu) if isinstance(mu, str) else Fraction(mu)
        return SymplecticClass(Space.quadric(), (), m)

    @property
    def l(self) -> int:
        return self.space.l

    def pairing(self) -> tuple[Fraction, ...]:
        """Area of each basis element."""
        if self.space.is_quadric:
            return (Fraction(1), self.mu)
        return (Fraction(1),) + self.delta

    def padded(self, n: int = 3) -> tuple[Fraction, ...]:
        return self.delta + (Fraction(0),) * max(0, n - len(self.delta))

    def total_area(self) -> Fraction:
        """Pairing with c1."""
        return area(self, c1(self.space))

    def to_json(self):
        if self.space.is_quadric:
            return {"space": "quadric", "mu": format_rational(self.mu)}
        return {"space": self.space.name, "delta": [format_rational(d) for d in self.delta]}

    def __str__(self) -> str:
        if self.space.is_quadric:
            return f"quadric(mu={format_rational(self.mu)})"
        return f"{self.space}({', '.join(format_rational(d) for d in self.delta)})"


def area(w: SymplecticClass, a: HomologyClass) -> Fraction:
    if w.space != a.space:
        raise LatticeError("symplectic class and homology class live in different spaces")
    if w.space.is_quadric:
        return a.coeffs[0] + a.coeffs[1] * w.mu
    # E_i has area delta_i, so the coefficient e_i contributes e_i * delta_i.
    return a.coeffs[0] + sum(e * d for e, d in zip(a.coeffs[1:], w.delta))


def is_reduced(w: SymplecticClass) -> bool:
    if w.space.is_quadric:
        return w.mu >= 1
    d = w.delta
    if any(x <= 0 for x in d):
        return False
    if any(d[i] < d[i + 1] for i in range(len(d) - 1)):
        return False
    p = w.padded()
    return p[0] + p[1] + p[2] <= 1


def is_symplectic_reduced(w: SymplecticClass) -> bool:
    """Reduced and every exceptional class (E_i, H-E_i-E_j, and H-E_1 on M_1) has
    positive area; without this no symplectic form exists in the class."""
    if not is_reduced(w):
        return False
    if w.space.is_quadric:
        return True
    p = w.padded(2)
    if w.l == 1:
        return p[0] < 1
    if w.l >= 2:
        return p[0] + p[1] < 1
    return True


def is_c1_nef(w: SymplecticClass) -> bool:
    if not is_reduced(w):
        return False
    if w.space.is_quadric:
        return True
    return 3 - sum(w.delta) > 0


def is_restrictive(w: SymplecticClass) -> bool:
    if w.space.is_quadric or not is_reduced(w):
        return False
    d = w.delta
    l = len(d)
    if sum(d) >= 1:
        return False
    if l >= 2 and not d[0] > d[1]:
        return False
    for k in range(2, l):  # 1-based k = 2..l-1
        if not d[k - 1] > sum(d[k:]):
            return False
    return True


def is_interior(w: SymplecticClass) -> bool:
    if not is_reduced(w):
        return False
    if w.space.is_quadric:
        return w.mu > 1
    d = w.delta
    if len(set(d)) != len(d):
        return False
    p = w.padded()
    if w.l >= 2 and not p[0] + p[1] + p[2] < 1:
        return False
    if w.l == 1 and not d[0] < 1:
        return False
    return True


def reflect(a: HomologyClass, mirror: HomologyClass) -> HomologyClass:
    if intersect(mirror, mirror) != -2:
        raise LatticeError(f"reflection needs a (-2)-class, got {mirror}")
    return a + intersect(a, mirror) * mirror


def reflect_coeffs(space: Space, a: Sequence[int], m: Sequence[int]) -> tuple[int, ...]:
    t = dot(space, a, m)
    return tuple(x + t * y for x, y in zip(a, m))


def reflection_generators(w: SymplecticClass) -> list[HomologyClass]:
    """(-2)-classes of zero area that generate the homological action of
    symplectomorphisms on a wall of the reduced cone."""
    space = w.space
    if space.is_quadric:
        return [cls(space, 1, -1)] if w.mu == 1 else []
    d = w.delta
    gens = []
    for i, j in combinations(range(1, space.l + 1), 2):
        if d[i - 1] == d[j - 1]:
            gens.append(E(space, i) - E(space, j))
    for i, j, k in combinations(range(1, space.l + 1), 3):
        if d[i - 1] + d[j - 1] + d[k - 1] == 1:
            gens.append(H(space) - E(space, i) - E(space, j) - E(space, k))
    return gens
