"""Toric mutations of Delzant polygons and the mutation graph on the toric
configurations of a fixed symplectic class.

A mutation at vertex v casts the ray from v in direction u1 + u2 (the sum of
the primitive edge directions leaving v), cuts the polygon along it and shears
one piece by the transvection fixing that direction.  Results are matched back
to configurations through their boundary data (s, a) up to rotation and
reflection.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .config import CyclicConfig, canonical_tuple
from .delzant import (
    DelzantError,
    DelzantPolygon,
    boundary_data,
    det,
    is_delzant,
    polygon_of,
    primitive,
)
from .enumerate import enumerate_lcy, orbit_key, smoothing_closure
from .lattice import SymplecticClass

log = logging.getLogger(__name__)

Matrix = tuple[tuple[int, int], tuple[int, int]]


class MutationRejected(DelzantError):
    pass


@dataclass(frozen=True)
class MutationMove:
    vertex: int
    direction: tuple[int, int]
    exit_edge: int
    shear: Matrix
    source: int | None = None
    target: int | None = None

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "direction": list(self.direction),
            "exit_edge": self.exit_edge,
            "shear": [list(r) for r in self.shear],
            "source": self.source,
            "target": self.target,
        }


def shear_matrix(w, sign: int = 1) -> Matrix:
    """Matrix of y -> y + sign * det(w, y) * w."""
    w0, w1 = w
    return ((1 - sign * w0 * w1, sign * w0 * w0), (-sign * w1 * w1, 1 + sign * w0 * w1))


def _apply(m: Matrix, base, x):
    dx, dy = x[0] - base[0], x[1] - base[1]
    return (base[0] + m[0][0] * dx + m[0][1] * dy, base[1] + m[1][0] * dx + m[1][1] * dy)


def _clean(points) -> list:
    """Drop repeated points and straight-angle vertices of a closed chain."""
    pts = []
    for q in points:
        if not pts or pts[-1] != q:
            pts.append(q)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            e1 = (b[0] - a[0], b[1] - a[1])
            e2 = (c[0] - b[0], c[1] - b[1])
            if det(e1, e2) == 0 and e1[0] * e2[0] + e1[1] * e2[1] > 0:
                del pts[i]
                changed = True
                break
    return pts


def eigenray(p: DelzantPolygon, v: int) -> tuple[tuple[int, int], int, tuple[Fraction, Fraction]]:
    """(direction, exit edge index, exit point) of the ray from vertex v.

    Raises MutationRejected when the ray leaves through a vertex."""
    vs = p.vertices
    k = p.k
    base = vs[v]
    u1 = primitive((vs[(v + 1) % k][0] - base[0], vs[(v + 1) % k][1] - base[1]))
    u2 = primitive((vs[v - 1][0] - base[0], vs[v - 1][1] - base[1]))
    w = primitive((u1[0] + u2[0], u1[1] + u2[1]))
    for j in range(k):
        if j in (v, (v - 1) % k):
            continue
        a, b = vs[j], vs[(j + 1) % k]
        e = (b[0] - a[0], b[1] - a[1])
        den = det(w, e)
        if den == 0:
            continue
        lam = Fraction(det(w, (base[0] - a[0], base[1] - a[1]))) / den
        if not 0 <= lam <= 1:
            continue
        x = (a[0] + lam * e[0], a[1] + lam * e[1])
        d = (x[0] - base[0], x[1] - base[1])
        if d[0] * w[0] + d[1] * w[1] <= 0:
            continue
        if lam in (0, 1):
            raise MutationRejected(f"forbidden mutation: the ray from vertex {v} meets another vertex")
        return w, j, x
    raise MutationRejected(f"no exit point for the ray from vertex {v}")


def toric_mutate(p: DelzantPolygon, v: int) -> tuple[DelzantPolygon, MutationMove]:
    """Mutate p at vertex v.  Returns the new polygon and the move, or raises
    MutationRejected."""
    if not is_delzant(p):
        raise DelzantError("mutation needs a Delzant polygon")
    k = p.k
    v %= k
    w, j, x = eigenray(p, v)
    vs = p.vertices
    base = vs[v]
    # piece on the u1 side: base, v+1, ..., j, exit point; the rest is fixed
    side1 = [vs[(v + t) % k] for t in range((j - v) % k + 1)] + [x]
    side2 = [vs[(j + 1 + t) % k] for t in range((v - j - 1) % k)]
    found = []
    for sign in (1, -1):
        m = shear_matrix(w, sign)
        pts = _clean([_apply(m, base, q) for q in side1] + side2)
        if len(pts) < 3:
            continue
        try:
            q = DelzantPolygon(tuple(pts))
        except DelzantError:
            continue
        if is_delzant(q):
            found.append((q, m))
    if not found:
        raise MutationRejected(f"mutation at vertex {v} does not give a Delzant polygon")
    if len(found) > 1:
        raise AssertionError(f"both shears at vertex {v} give Delzant polygons")
    q, m = found[0]
    if q.area() != p.area():
        raise AssertionError("mutation changed the area")
    return q, MutationMove(v, w, j, m)


# -------------------------------------------------------------------- graph


def data_key(sa) -> tuple:
    """Rotation and reflection invariant key of boundary data (s, a)."""
    s, a = sa
    return canonical_tuple(list(zip(s, a)))


@dataclass
class MutationGraph:
    w: SymplecticClass
    nodes: list[CyclicConfig]
    data: list[tuple[tuple[int, ...], tuple[Fraction, ...]]]
    moves: list[MutationMove] = field(default_factory=list)
    out_of_set: list[tuple[int, MutationMove, tuple]] = field(default_factory=list)
    rejected: list[tuple[int, int, str]] = field(default_factory=list)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.nodes)))
        for m in self.moves:
            if m.source != m.target:
                g.add_edge(m.source, m.target)
        return g

    def edges(self) -> list[tuple[int, int]]:
        return sorted({tuple(sorted((m.source, m.target))) for m in self.moves if m.source != m.target})

    def to_dot(self) -> str:
        lines = ["graph mutations {"]
        for i, c in enumerate(self.nodes):
            label = str(c).replace('"', "'")
            lines.append(f'  n{i} [label="{i}: {label}"];')
        for a, b in self.edges():
            lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "w": str(self.w),
            "nodes": [c.to_json() for c in self.nodes],
            "edges": [list(e) for e in self.edges()],
            "connected": is_connected(self),
            "out_of_set": len(self.out_of_set),
        }


def _expand(args):
    i, s, a = args
    from .delzant import build_polygon

    p = build_polygon(s, a)
    out = []
    for v in range(p.k):
        try:
            q, move = toric_mutate(p, v)
        except MutationRejected as e:
            out.append((v, None, None, str(e)))
            continue
        out.append((v, move, boundary_data(q), None))
    return i, out


def mutation_graph(l, w: SymplecticClass, workers: int = 1) -> MutationGraph:
    res = enumerate_lcy(l, w, toric_only=True)
    nodes = list(res.toric)
    if not nodes:
        raise ValueError(f"no toric configurations for {w}")
    data = []
    index: dict[tuple, int] = {}
    for i, c in enumerate(nodes):
        sa = boundary_data(polygon_of(c, w))
        key = data_key(sa)
        if key in index:
            raise AssertionError(f"toric configurations {index[key]} and {i} share boundary data")
        index[key] = i
        data.append(sa)
    g = MutationGraph(w, nodes, data)
    jobs = [(i, sa[0], sa[1]) for i, sa in enumerate(data)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_expand, jobs))
    else:
        results = [_expand(j) for j in jobs]
    for i, out in sorted(results, key=lambda r: r[0]):
        for v, move, sa, reason in out:
            if move is None:
                g.rejected.append((i, v, reason))
                continue
            target = index.get(data_key(sa))
            move = MutationMove(move.vertex, move.direction, move.exit_edge, move.shear, i, target)
            if target is None:
                log.info("mutation of node %d at vertex %d leaves the toric set", i, v)
                g.out_of_set.append((i, move, sa))
            else:
                g.moves.append(move)
    return g


def is_connected(g: MutationGraph) -> bool:
    return nx.is_connected(g.graph())


def mutation_path(g: MutationGraph, a: int, b: int) -> list[MutationMove]:
    """Moves along a shortest path from node a to node b."""
    nodes = nx.shortest_path(g.graph(), a, b)
    out = []
    for x, y in zip(nodes, nodes[1:]):
        out.append(next(m for m in g.moves if m.source == x and m.target == y
                        or m.source == y and m.target == x))
    return out


def reversal_failures(g: MutationGraph) -> list[MutationMove]:
    """Moves whose target has no vertex mutating back to the source data."""
    from .delzant import build_polygon

    bad = []
    for m in g.moves:
        p = build_polygon(*g.data[m.target])
        want = data_key(g.data[m.source])
        back = False
        for v in range(p.k):
            try:
                q, _ = toric_mutate(p, v)
            except MutationRejected:
                continue
            if data_key(boundary_data(q)) == want:
                back = True
                break
        if not back:
            bad.append(m)
    return bad


# ---------------------------------------------------------- realization


@dataclass
class RealizationReport:
    w: SymplecticClass
    total: int
    toric: int
    covered: list[CyclicConfig]
    uncovered: list[CyclicConfig]
    outside: list[CyclicConfig]

    def to_json(self) -> dict:
        return {
            "w": str(self.w),
            "total": self.total,
            "toric": self.toric,
            "covered": len(self.covered),
            "uncovered": [c.to_json() for c in self.uncovered],
        }


def realization_report(l, w: SymplecticClass) -> RealizationReport:
    """Compare the smoothing closure of the toric set with the full set."""
    res = enumerate_lcy(l, w)
    closure = smoothing_closure(res.toric)
    reached = set()
    outside = []
    for c in sorted(closure, key=lambda c: c.key()):
        rep = orbit_key(res, c)
        if rep is None:
            outside.append(c)
        else:
            reached.add(rep)
    covered, uncovered = [], []
    for c in res.configs:
        (covered if canonical_tuple(c.coeffs()) in reached else uncovered).append(c)
    return RealizationReport(w, res.count, res.toric_count, covered, uncovered, outside)
