"""Toric configurations as Delzant polygons, plus the linear-algebra and
continued-fraction tools that go with them (GS criterion, torus-bundle
monodromy, def-tautness via the Phi map)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import sympy
from sympy.solvers.simplex import InfeasibleLPError, lpmax

from .config import CyclicConfig, area_seq, dihedral_images, self_intersection_seq
from .lattice import SymplecticClass

Vec = tuple[int, int]
Point = tuple[Fraction, Fraction]


class DelzantError(ValueError):
    pass


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def primitive(v) -> Vec:
    """Primitive integer vector in the direction of a non-zero rational vector."""
    x, y = Fraction(v[0]), Fraction(v[1])
    if x == 0 and y == 0:
        raise DelzantError("zero vector has no direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    xi, yi = int(x * den), int(y * den)
    g = gcd(abs(xi), abs(yi))
    return xi // g, yi // g


# ------------------------------------------------------------ generating set


@dataclass(frozen=True)
class GeneratingSet:
    s: tuple[int, ...]
    d: tuple[Vec, ...]

    def closure_defects(self) -> list[int]:
        """Indices i (0-based) where d_{i-1} + s_i d_i + d_{i+1} != 0 cyclically."""
        k = len(self.s)
        bad = []
        for i in range(k):
            p, c, n = self.d[i - 1], self.d[i], self.d[(i + 1) % k]
            if (p[0] + self.s[i] * c[0] + n[0], p[1] + self.s[i] * c[1] + n[1]) != (0, 0):
                bad.append(i)
        return bad

    def closes(self) -> bool:
        return not self.closure_defects()

    def corner_dets(self) -> list[int]:
        k = len(self.d)
        return [det(self.d[i], self.d[(i + 1) % k]) for i in range(k)]

    def winding(self) -> int:
        return winding_number(self.d)


def generating_set(s: Sequence[int]) -> GeneratingSet:
    s = tuple(int(x) for x in s)
    if len(s) < 3:
        raise DelzantError("a generating set needs at least three self-intersections")
    d: list[Vec] = [(0, -1), (1, 0)]
    for i in range(2, len(s)):
        a, b = d[i - 1], d[i - 2]
        c = s[i - 1]
        d.append((-c * a[0] - b[0], -c * a[1] - b[1]))
    return GeneratingSet(s, tuple(d))


def winding_number(dirs: Sequence[Vec]) -> int:
    """Turns of a cyclic sequence of directions with consecutive turns in (0, pi),
    counted as crossings of the positive x-axis."""
    k = len(dirs)
    n = 0
    for i in range(k):
        u, v = dirs[i], dirs[(i + 1) % k]
        if det(u, v) <= 0:
            raise DelzantError("consecutive directions do not turn left")
        # the positive x-axis lies in the half-open arc (u, v]
        if -u[1] > 0 and v[1] >= 0 and (v[1] > 0 or v[0] > 0):
            n += 1
    return n


# ------------------------------------------------------------------ polygon


@dataclass(frozen=True)
class DelzantPolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        if len(vs) < 3:
            raise DelzantError("a polygon needs three vertices")
        if _signed_area2(vs) < 0:
            vs = (vs[0],) + tuple(reversed(vs[1:]))
        object.__setattr__(self, "vertices", vs)

    @property
    def k(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Fraction, Fraction]]:
        vs = self.vertices
        return [(vs[(i + 1) % self.k][0] - vs[i][0], vs[(i + 1) % self.k][1] - vs[i][1]) for i in range(self.k)]

    def area(self) -> Fraction:
        return _signed_area2(self.vertices) / 2

    def centroid_of_vertices(self) -> Point:
        return (sum(v[0] for v in self.vertices) / self.k, sum(v[1] for v in self.vertices) / self.k)

    def transform(self, m, t=(0, 0)) -> "DelzantPolygon":
        (a, b), (c, d) = m
        return DelzantPolygon(tuple((a * x + b * y + t[0], c * x + d * y + t[1]) for x, y in self.vertices))

    def rotate_start(self, r: int) -> "DelzantPolygon":
        vs = self.vertices
        return DelzantPolygon(vs[r:] + vs[:r])

    def to_json(self) -> dict:
        return {"vertices": [[str(x), str(y)] for x, y in self.vertices]}


def _signed_area2(vs) -> Fraction:
    n = len(vs)
    return sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n))


def build_polygon(s: Sequence[int], a: Sequence) -> DelzantPolygon:
    s = tuple(s)
    a = tuple(Fraction(x) for x in a)
    if len(s) != len(a):
        raise DelzantError("s and a differ in length")
    gs = generating_set(s)
    if not gs.closes():
        raise DelzantError(f"not a toric (s, a) pair: closure fails at {gs.closure_defects()}")
    if any(x != 1 for x in gs.corner_dets()):
        raise DelzantError("not a toric (s, a) pair: corner determinant differs from 1")
    if gs.winding() != 1:
        raise DelzantError("not a toric (s, a) pair: winding number differs from 1")
    if any(x <= 0 for x in a):
        raise DelzantError("edge lengths must be positive")
    q = [(Fraction(0), Fraction(0))]
    for ai, di in zip(a, gs.d):
        x, y = q[-1]
        q.append((x + ai * di[0], y + ai * di[1]))
    if q[-1] != q[0]:
        raise DelzantError("not a toric (s, a) pair: edges do not close up")
    p = DelzantPolygon(tuple(q[:-1]))
    if not is_delzant(p):
        raise DelzantError("constructed polygon is not Delzant")
    return p


def edge_directions(p: DelzantPolygon) -> list[Vec]:
    return [primitive(e) for e in p.edges()]


def is_delzant(p: DelzantPolygon) -> bool:
    try:
        u = edge_directions(p)
    except DelzantError:
        return False
    k = len(u)
    for i in range(k):
        # strictly convex, counterclockwise, unimodular corner
        if det(u[i], u[(i + 1) % k]) != 1:
            return False
    try:
        return winding_number(u) == 1
    except DelzantError:
        return False


def affine_lengths(p: DelzantPolygon) -> list[Fraction]:
    out = []
    for e in p.edges():
        u = primitive(e)
        out.append(e[0] / u[0] if u[0] else e[1] / u[1])
    return out


def boundary_data(p: DelzantPolygon) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """(s, a) read off the polygon: a_i is the affine length of edge i and s_i is
    the integer with n_{i-1} + n_{i+1} + s_i n_i = 0 for inward primitive
    normals (equivalently for the primitive edge directions)."""
    if not is_delzant(p):
        raise DelzantError("boundary data needs a Delzant polygon")
    u = edge_directions(p)
    k = len(u)
    s = []
    for i in range(k):
        prev, nxt = u[i - 1], u[(i + 1) % k]
        si = -det(prev, nxt)
        if (prev[0] + nxt[0] + si * u[i][0], prev[1] + nxt[1] + si * u[i][1]) != (0, 0):
            raise DelzantError("edge directions violate the normal relation")
        s.append(si)
    return tuple(s), tuple(affine_lengths(p))


def inward_normals(p: DelzantPolygon) -> list[Vec]:
    return [(-y, x) for x, y in edge_directions(p)]


def same_boundary_data(x, y) -> bool:
    """(s, a) pairs equal up to rotation and reversal."""
    px = list(zip(x[0], x[1]))
    py = tuple(zip(y[0], y[1]))
    return len(px) == len(py) and any(img == py for img in dihedral_images(px))


def toric_data(c: CyclicConfig, w: SymplecticClass) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    return tuple(self_intersection_seq(c)), tuple(area_seq(c, w))


def polygon_of(c: CyclicConfig, w: SymplecticClass) -> DelzantPolygon:
    s, a = toric_data(c, w)
    return build_polygon(s, a)


def expected_area(w: SymplecticClass) -> Fraction:
    """Lattice area of the moment polygon: [omega]^2 / 2."""
    if w.space.is_quadric:
        return w.mu
    return (1 - sum(x * x for x in w.delta)) / 2


def chop_corner(p: DelzantPolygon, i: int, eps) -> DelzantPolygon:
    """Cut the corner at the end of edge i (vertex i+1) by a triangle of size eps."""
    eps = Fraction(eps)
    u = edge_directions(p)
    k = p.k
    v = p.vertices[(i + 1) % k]
    before = (v[0] - eps * u[i][0], v[1] - eps * u[i][1])
    after = (v[0] + eps * u[(i + 1) % k][0], v[1] + eps * u[(i + 1) % k][1])
    vs = list(p.vertices)
    j = (i + 1) % k
    new = vs[:j] + [before, after] + vs[j + 1:]
    return DelzantPolygon(tuple(new))


# ----------------------------------------------------------- GS criterion


@dataclass
class GSReport:
    matrix: list[list[int]]
    a: list[Fraction]
    solvable: bool
    unique: bool
    z: list[Fraction] | None
    positive: bool
    negative: bool
    method: str
    nullity: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "solvable": self.solvable,
            "unique": self.unique,
            "z": None if self.z is None else [str(x) for x in self.z],
            "positive": self.positive,
            "negative": self.negative,
            "method": self.method,
            "nullity": self.nullity,
        }


def intersection_matrix(c: CyclicConfig) -> list[list[int]]:
    s = self_intersection_seq(c)
    k = len(s)
    if k == 1:
        return [[s[0]]]
    if k == 2:
        return [[s[0], 2], [2, s[1]]]
    q = [[0] * k for _ in range(k)]
    for i in range(k):
        q[i][i] = s[i]
        q[i][(i + 1) % k] = 1
        q[(i + 1) % k][i] = 1
    return q


def _lp_sign(q: sympy.Matrix, a: sympy.Matrix, sign: int):
    """Exact LP: maximize t subject to sign*z_i >= t, t <= 1, Q z = a."""
    k = q.shape[0]
    z = sympy.symbols(f"z0:{k}")
    t = sympy.Symbol("t")
    cons = [sympy.Eq(sum(q[i, j] * z[j] for j in range(k)), a[i]) for i in range(k)]
    cons += [sign * z[i] - t >= 0 for i in range(k)]
    cons.append(t <= 1)
    try:
        opt, sol = lpmax(t, cons)
    except InfeasibleLPError:
        return None, None
    return opt, [Fraction(str(sol.get(v, 0))) for v in z]


def _polygon_witness(c: CyclicConfig, w: SymplecticClass) -> list[Fraction] | None:
    """Support numbers of an interior point of the moment polygon."""
    try:
        p = polygon_of(c, w)
    except DelzantError:
        return None
    center = p.centroid_of_vertices()
    out = []
    for v, n in zip(p.vertices, inward_normals(p)):
        out.append((center[0] - v[0]) * n[0] + (center[1] - v[1]) * n[1])
    return out


def gs_solve(c: CyclicConfig, w: SymplecticClass, use_polygon: bool = True) -> GSReport:
    qm = intersection_matrix(c)
    a = [Fraction(x) for x in area_seq(c, w)]
    q = sympy.Matrix(qm)
    av = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in a])
    k = len(a)
    if q.det() != 0:
        zs = q.LUsolve(av)
        z = [Fraction(str(x)) for x in zs]
        return GSReport(qm, a, True, True, z, all(x > 0 for x in z), all(x <= 0 for x in z), "unique")
    nullity = len(q.nullspace())
    try:
        sol, params = q.gauss_jordan_solve(av)
    except ValueError:
        return GSReport(qm, a, False, False, None, False, False, "inconsistent", nullity)
    z0 = [Fraction(str(x)) for x in sol.subs({p: 0 for p in params})]
    if use_polygon:
        wit = _polygon_witness(c, w)
        if wit is not None and all(x > 0 for x in wit):
            check = [sum(qm[i][j] * wit[j] for j in range(k)) for i in range(k)]
            if check == a:
                return GSReport(qm, a, True, False, wit, True, False, "polygon", nullity)
    opt, zp = _lp_sign(q, av, 1)
    if opt is not None and opt > 0:
        return GSReport(qm, a, True, False, zp, True, False, "lp", nullity)
    opt_n, zn = _lp_sign(q, av, -1)
    if opt_n is not None and opt_n >= 0:
        return GSReport(qm, a, True, False, zn, False, True, "lp", nullity)
    return GSReport(qm, a, True, False, z0, False, False, "lp", nullity)


# --------------------------------------------------------------- monodromy


def monodromy_factor(s: int) -> tuple[tuple[int, int], tuple[int, int]]:
    return ((-s, 1), (-1, 0))


def matmul(x, y):
    return tuple(
        tuple(sum(x[i][t] * y[t][j] for t in range(2)) for j in range(2)) for i in range(2)
    )


def monodromy(s: Sequence[int]):
    if not s:
        raise DelzantError("monodromy needs at least one entry")
    m = ((1, 0), (0, 1))
    for x in s:
        m = matmul(m, monodromy_factor(x))
    return m


IDENTITY = ((1, 0), (0, 1))


# ------------------------------------------------------ continued fractions


@dataclass(frozen=True)
class CF:
    """Homogeneous value p/q of a continued fraction; q = 0 is infinity."""

    p: int
    q: int

    @property
    def infinite(self) -> bool:
        return self.q == 0

    def value(self) -> Fraction | None:
        return None if self.q == 0 else Fraction(self.p, self.q)

    def __eq__(self, other):
        if isinstance(other, CF):
            return self.p * other.q == self.q * other.p
        if other is None:
            return self.q == 0
        return self.q != 0 and Fraction(self.p, self.q) == Fraction(other)

    def __hash__(self):
        return hash(self.value())

    def __str__(self) -> str:
        if self.q == 0:
            return "inf"
        return str(Fraction(self.p, self.q))


def cf_eval(b: Sequence) -> CF:
    """[b1, ..., bk] = b1 - 1/(b2 - 1/(... - 1/bk)) evaluated formally on
    homogeneous pairs, so a zero denominator yields infinity and 1/infinity = 0."""
    if not b:
        raise ValueError("empty continued fraction")
    vals = [Fraction(x) for x in b]
    p, q = vals[-1], Fraction(1)
    for x in reversed(vals[:-1]):
        p, q = x * p - q, p
    m = p.denominator * q.denominator // gcd(p.denominator, q.denominator)
    pi, qi = int(p * m), int(q * m)
    g = gcd(abs(pi), abs(qi)) or 1
    pi, qi = pi // g, qi // g
    if qi < 0 or (qi == 0 and pi < 0):
        pi, qi = -pi, -qi
    return CF(pi, qi)


def cf_tails(n: Sequence[int]) -> list[CF]:
    return [cf_eval(n[j:]) for j in range(1, len(n))]


def cf_admissible(n: Sequence[int]) -> bool:
    """Every denominator [n_j, ..., n_k] with j >= 2 is a positive number."""
    for t in cf_tails(n):
        if t.infinite or t.value() <= 0:
            return False
    return True


# ---------------------------------------------------------------- tautness


def in_c_set(n: Sequence[int]) -> bool:
    """(n_1, ..., n_k, n_{k+1}) in C."""
    n = tuple(n)
    k = len(n) - 1
    if k < 1:
        return False
    head = n[:k]
    return sum(n) == 3 * (k - 1) and cf_eval(head) == 0 and cf_admissible(head)


def phi_map(n: Sequence[int], a: Sequence[int]) -> tuple[int, ...]:
    n, a = tuple(n), tuple(a)
    if len(n) != len(a):
        raise ValueError("n and a differ in length")
    if not in_c_set(n):
        raise ValueError(f"{n} is not in C")
    if any(x < 0 for x in a) or any(x + y < 2 for x, y in zip(n, a)):
        raise ValueError("need a_i >= 0 and n_i + a_i >= 2")
    k = len(n) - 1
    m = [x + y for x, y in zip(n, a)]
    return (1, 1 - m[0]) + tuple(-x for x in m[1:k]) + (1 - m[k],)


def blown_up_ps(seq: Sequence[int]) -> tuple[int, ...] | None:
    """p-vector of a sequence (1, 1-p_1, -p_2, ..., -p_{m-1}, 1-p_m), or None."""
    seq = tuple(seq)
    if len(seq) < 3 or seq[0] != 1:
        return None
    p = (1 - seq[1],) + tuple(-x for x in seq[2:-1]) + (1 - seq[-1],)
    if any(x < 2 for x in p):
        return None
    return p


def phi_preimages(seq: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    p = blown_up_ps(seq)
    if p is None:
        raise ValueError(f"{tuple(seq)} is not a blown-up sequence with all p_i >= 2")
    k = len(p) - 1
    out = []

    def rec(prefix: list[int]):
        i = len(prefix)
        if i == k:
            last = 3 * (k - 1) - sum(prefix)
            n = tuple(prefix) + (last,)
            if p[k] - last < 0 or not in_c_set(n):
                return
            out.append((n, tuple(pi - ni for pi, ni in zip(p, n))))
            return
        for ni in range(1, p[i] + 1):
            prefix.append(ni)
            rec(prefix)
            prefix.pop()

    rec([])
    return sorted(out)


def _always_taut(seq: tuple[int, ...]) -> bool:
    for img in dihedral_images(seq):
        if len(img) == 2:
            x, y = img
            if x == 1 and y <= 3:
                return True
            if x == -1 and y in (-1, -2, -3):
                return True
            if x == 0 and y <= 4:
                return True
        if len(img) == 3 and img[0] == 1 and img[1] == 1 and img[2] <= 1:
            return True
    return False


@dataclass
class TautResult:
    status: str  # "taut", "not taut" or "undecided"
    preimages: list = field(default_factory=list)
    reason: str = ""

    @property
    def taut(self) -> bool | None:
        return {"taut": True, "not taut": False}.get(self.status)


def def_taut(seq: Sequence[int]) -> TautResult:
    seq = tuple(int(x) for x in seq)
    if blown_up_ps(seq) is not None:
        pre = phi_preimages(seq)
        if len(pre) == 1:
            return TautResult("taut", pre, "unique Phi-preimage")
        if not pre:
            return TautResult("undecided", pre, "no Phi-preimage: not a blown-up sequence of this type")
        return TautResult("not taut", pre, f"{len(pre)} Phi-preimages")
    if _always_taut(seq):
        return TautResult("taut", [], "length two or (1,1,p) family")
    return TautResult("undecided", [], "no criterion applies")


# --------------------------------------------------------------------- SVG


def polygon_svg(p: DelzantPolygon, s: Sequence[int] | None = None, a: Sequence | None = None,
                scale: int = 60) -> str:
    xs = [v[0] for v in p.vertices]
    ys = [v[1] for v in p.vertices]
    x0, x1 = int(sympy.floor(min(xs))) - 1, int(sympy.ceiling(max(xs))) + 1
    y0, y1 = int(sympy.floor(min(ys))) - 1, int(sympy.ceiling(max(ys))) + 1
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def px(pt):
        return (float((pt[0] - x0) * scale), float((y1 - pt[1]) * scale))

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}">',
        '<g stroke="#dddddd" stroke-width="1">',
    ]
    for x in range(x0, x1 + 1):
        lines.append(f'<line x1="{(x - x0) * scale}" y1="0" x2="{(x - x0) * scale}" y2="{height}"/>')
    for y in range(y0, y1 + 1):
        lines.append(f'<line x1="0" y1="{(y1 - y) * scale}" x2="{width}" y2="{(y1 - y) * scale}"/>')
    lines.append("</g>")
    lines.append('<g fill="#999999">')
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            lines.append(f'<circle cx="{(x - x0) * scale}" cy="{(y1 - y) * scale}" r="2"/>')
    lines.append("</g>")
    pts = " ".join("{:.4f},{:.4f}".format(*px(v)) for v in p.vertices)
    lines.append(f'<polygon points="{pts}" fill="#cfe2f3" stroke="#1c4587" stroke-width="2"/>')
    if s is not None and a is not None:
        for i, v in enumerate(p.vertices):
            w = p.vertices[(i + 1) % p.k]
            mx, my = px(((v[0] + w[0]) / 2, (v[1] + w[1]) / 2))
            lines.append(
                f'<text x="{mx:.4f}" y="{my:.4f}" font-size="12" text-anchor="middle">'
                f"{s[i]} / {a[i]}</text>"
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
