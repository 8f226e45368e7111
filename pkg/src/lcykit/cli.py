"""Command-line front end: ``lcykit <command> ...`` or ``python -m lcykit``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement

from . import __version__
from .catalog import catalog_rows
from .config import self_intersection_seq
from .delzant import (
    DelzantError,
    boundary_data,
    def_taut,
    gs_solve,
    monodromy,
    polygon_of,
    polygon_svg,
)
from .enumerate import enumerate_lcy
from .formulas import (
    count_m2_general,
    count_m2_toric,
    count_m3_toric,
    count_minimal,
    count_minimal_toric,
    kkp_upper_bound,
    lemma_relation_check,
    m2_region,
    m3_region,
    restrictive_count_general,
    restrictive_count_toric,
    toric_region_member,
)
from .lattice import (
    LatticeError,
    Space,
    SymplecticClass,
    format_rational,
    is_c1_nef,
    is_interior,
    is_reduced,
    is_restrictive,
    is_symplectic_reduced,
    parse_rational,
)
from .mutation import is_connected, mutation_graph, mutation_path, realization_report


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    inputs: dict
    version: str = __version__
    digest: str = ""
    files: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def load_schema(name: str) -> dict:
    """JSON schema shipped for the output of a command."""
    ref = resources.files("lcykit").joinpath("schemas", f"{name}.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# ------------------------------------------------------------------ inputs


def parse_seq(text: str) -> list[Fraction]:
    if text is None or text.strip() == "":
        return []
    try:
        return [parse_rational(t.strip()) for t in text.split(",")]
    except LatticeError as e:
        raise UsageError(str(e)) from None


def make_class(space_text: str, delta: str | None, mu: str | None) -> SymplecticClass:
    try:
        space = Space.parse(space_text)
    except LatticeError as e:
        raise UsageError(str(e)) from None
    if space.is_quadric:
        if mu is None:
            raise UsageError("the quadric needs --mu")
        try:
            return SymplecticClass.quadric(parse_rational(mu))
        except LatticeError as e:
            raise UsageError(str(e)) from None
    d = parse_seq(delta or "")
    if len(d) != space.l:
        raise UsageError(f"{space.name} needs {space.l} values in --delta, got {len(d)}")
    return SymplecticClass.blowup(d)


def _space_arg(w: SymplecticClass):
    return w.space if w.space.is_quadric else w.l


def sample_points(l: int, den: int) -> list[SymplecticClass]:
    """Reduced, symplectic, c1-nef classes on M_l with all delta_i in (1/den)Z."""
    out = []
    for parts in combinations_with_replacement(range(den - 1, 0, -1), l):
        d = [Fraction(x, den) for x in parts]
        w = SymplecticClass.blowup(d)
        if is_reduced(w) and is_symplectic_reduced(w) and is_c1_nef(w):
            out.append(w)
    return out


# ------------------------------------------------------------------ output


def _dump(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    rows = obj if isinstance(obj, list) else [obj]
    if rows and isinstance(rows[0], dict):
        keys = sorted(rows[0])
        lines = ["\t".join(keys)]
        for r in rows:
            lines.append("\t".join(json.dumps(r[k]) if isinstance(r[k], (list, dict)) else str(r[k]) for k in keys))
        return "\n".join(lines) + "\n"
    return "\n".join(str(r) for r in rows) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands


def cmd_enumerate(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    res = enumerate_lcy(_space_arg(w), w, toric_only=args.toric, workers=args.workers)
    configs = res.toric if args.toric else res.configs
    if args.format == "tsv":
        out.append("index\tlength\tclasses\tsquares\n")
        for i, c in enumerate(configs):
            out.append(f"{i}\t{c.k}\t{c}\t{','.join(map(str, self_intersection_seq(c)))}\n")
        return 0
    data = {
        "w": w.to_json(),
        "count": res.count,
        "toric_count": res.toric_count,
        "configs": [c.to_json() for c in configs],
    }
    out.append(_dump(data, "json"))
    return 0


def formula_counts(w: SymplecticClass) -> tuple[int | None, int | None, str]:
    """(general, toric, note) from the closed forms that apply to w."""
    space = w.space
    if space.is_quadric or space.l <= 1:
        return count_minimal(space, w), count_minimal_toric(space, w), "minimal"
    d = w.delta
    if space.l == 2:
        return count_m2_general(*d), count_m2_toric(*d), "M2"
    general = toric = None
    note = "none"
    if is_restrictive(w):
        general = restrictive_count_general(w).value
        toric = restrictive_count_toric(w).value
        note = "restrictive"
    if space.l == 3:
        toric = count_m3_toric(*d)
        note = "M3" if general is None else note + "+M3"
    return general, toric, note


def cmd_count(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    general = toric = None
    if args.method in ("formula", "both"):
        general, toric, note = formula_counts(w)
    res = None
    if args.method in ("enumerate", "both"):
        res = enumerate_lcy(_space_arg(w), w, workers=args.workers)
    fmt = lambda x: "n/a" if x is None else str(x)
    mismatch = False
    if res is not None and args.method == "both":
        mismatch = (general is not None and general != res.count) or (toric is not None and toric != res.toric_count)
    if args.format == "json":
        out.append(_dump({
            "w": w.to_json(),
            "method": args.method,
            "formula": general,
            "formula_toric": toric,
            "enumerated": None if res is None else res.count,
            "enumerated_toric": None if res is None else res.toric_count,
            "match": not mismatch,
        }, "json"))
    elif args.method == "both":
        out.append(f"{fmt(general)} / {res.count}\n")
        out.append(f"toric {fmt(toric)} / {res.toric_count}\n")
    elif res is not None:
        out.append(f"{res.count}\ntoric {res.toric_count}\n")
    else:
        out.append(f"{fmt(general)}\ntoric {fmt(toric)}\n")
    return 1 if mismatch else 0


def cmd_region(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    data = {"w": w.to_json(), "interior": is_interior(w), "c1_nef": is_c1_nef(w)}
    if not w.space.is_quadric and w.l >= 1:
        data["restrictive"] = is_restrictive(w)
    if not w.space.is_quadric:
        if w.l == 2:
            data["region"] = str(m2_region(*w.delta))
        elif w.l == 3:
            lab = m3_region(*w.delta)
            data["region"] = str(lab)
            data["toric_count"] = lab.value
        if 2 <= w.l <= 4:
            data["kkp_bound"] = kkp_upper_bound(w.l, w.delta[0], w.delta[1])
        if w.l <= 5:
            data["toric_region"] = toric_region_member(w.l, w)
    out.append(_dump(data, args.format))
    return 0


def cmd_polygon(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    res = enumerate_lcy(_space_arg(w), w, toric_only=True)
    if not 0 <= args.config_index < len(res.toric):
        raise UsageError(f"--config-index must be in 0..{len(res.toric) - 1}")
    c = res.toric[args.config_index]
    p = polygon_of(c, w)
    s, a = boundary_data(p)
    gs = gs_solve(c, w)
    data = {
        "config": c.to_json(),
        "s": list(s),
        "a": [format_rational(x) for x in a],
        "vertices": p.to_json()["vertices"],
        "area": format_rational(p.area()),
        "monodromy": [list(r) for r in monodromy(s)],
        "gs": gs.to_json(),
    }
    if args.svg:
        _write(args.svg, polygon_svg(p, s, [format_rational(x) for x in a]))
        data["svg"] = os.path.basename(args.svg)
    out.append(_dump(data, args.format))
    return 0


def cmd_mutation_graph(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    g = mutation_graph(_space_arg(w), w, workers=args.workers)
    data = g.to_json()
    if args.path:
        a, b = args.path
        n = len(g.nodes)
        if not (0 <= a < n and 0 <= b < n):
            raise UsageError(f"--path indices must be in 0..{n - 1}")
        try:
            data["path"] = [m.to_json() for m in mutation_path(g, a, b)]
        except Exception:
            data["path"] = None
    if args.dot:
        _write(args.dot, g.to_dot())
        data["dot"] = os.path.basename(args.dot)
    out.append(_dump(data, args.format))
    return 0


def cmd_realize(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    rep = realization_report(_space_arg(w), w)
    out.append(_dump(rep.to_json(), args.format))
    return 0


def cmd_taut(args, out: list[str]) -> int:
    try:
        seq = [int(x) for x in args.seq.split(",")]
    except ValueError:
        raise UsageError("--seq takes comma separated integers") from None
    r = def_taut(seq)
    if args.format == "json":
        out.append(_dump({
            "seq": seq,
            "status": r.status,
            "preimages": [{"n": list(n), "a": list(a)} for n, a in r.preimages],
            "reason": r.reason,
        }, "json"))
        return 0
    if r.status == "taut":
        out.append("def-taut\n")
    elif r.status == "not taut":
        out.append(f"not def-taut; {len(r.preimages)} preimages\n")
    else:
        out.append(f"undecided; {r.reason}\n")
    for n, a in r.preimages:
        out.append(f"  n={','.join(map(str, n))}  a={','.join(map(str, a))}\n")
    return 0


def cmd_catalog(args, out: list[str]) -> int:
    w = make_class(args.space, args.delta, args.mu)
    if w.space.is_quadric or w.l < 1:
        raise UsageError("the catalog dump is for M_l with l >= 1")
    out.append("class\tsquare\tgenus\tarea\n")
    for a, sq, g, ar in catalog_rows(w.l, w, toric=args.toric):
        out.append(f"{a}\t{sq}\t{g}\t{format_rational(ar)}\n")
    return 0


# ---------------------------------------------------------------- selftest


def _selftest_points() -> list[SymplecticClass]:
    pts = [SymplecticClass.blowup([])]
    pts += [SymplecticClass.quadric(Fraction(m)) for m in ("1", "3/2", "2", "7/3")]
    pts += [SymplecticClass.blowup([Fraction(x)]) for x in ("1/3", "1/2", "2/3", "3/4")]
    pts += sample_points(2, 7)
    pts += sample_points(3, 6)
    return pts


def run_selftest() -> tuple[dict, int]:
    rows = []
    mismatches = 0
    for w in _selftest_points():
        res = enumerate_lcy(_space_arg(w), w)
        general, toric, note = formula_counts(w)
        ok = (general is None or general == res.count) and (toric is None or toric == res.toric_count)
        row = {
            "w": w.to_json(),
            "count": res.count,
            "toric_count": res.toric_count,
            "formula": general,
            "formula_toric": toric,
            "source": note,
            "ok": ok,
        }
        if not w.space.is_quadric and w.l == 3:
            row["region"] = str(m3_region(*w.delta))
        rows.append(row)
        mismatches += not ok
    taut = def_taut((1, -2, -3, -3, -2, -3, -2))
    lemma = {f"{a},{l}": lemma_relation_check(a, l) for a in (2, 3, 4) for l in range(2, 7)}
    mismatches += taut.taut is not False
    mismatches += not all(lemma.values())
    graphs = []
    for w in (SymplecticClass.quadric(Fraction(2)),
              SymplecticClass.blowup([Fraction(2, 5), Fraction(1, 5)]),
              SymplecticClass.blowup([Fraction(6, 15), Fraction(5, 15), Fraction(4, 15)])):
        g = mutation_graph(_space_arg(w), w)
        conn = is_connected(g)
        graphs.append({"w": w.to_json(), "nodes": len(g.nodes), "edges": [list(e) for e in g.edges()],
                       "connected": conn})
        mismatches += not conn
    report = {
        "version": __version__,
        "points": rows,
        "taut_example": {"status": taut.status, "preimages": len(taut.preimages)},
        "lemma_relation": lemma,
        "mutation_graphs": graphs,
        "mismatches": mismatches,
    }
    return report, mismatches


def cmd_selftest(args, out: list[str]) -> int:
    report, bad = run_selftest()
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "selftest.json"), text)
    n = len(report["points"])
    out.append(f"selftest: {n} points, {bad} mismatches, digest {digest(text)}\n")
    return 1 if bad else 0


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcykit", description="log Calabi-Yau divisor enumeration and counts")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--space", required=True, help="M<l>, CP2 or quadric")
        p.add_argument("--delta", help="comma separated rationals a/b")
        p.add_argument("--mu", help="quadric parameter, rational a/b")
        if fmt:
            p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--manifest", help="write a run manifest to this file")

    p = sub.add_parser("enumerate", help="list all configurations")
    common(p)
    p.add_argument("--toric", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", help="closed-form and enumerated counts")
    common(p)
    p.set_defaults(format="text")
    p.add_argument("--method", choices=("formula", "enumerate", "both"), default="both")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("region", help="region labels and predicates")
    common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("polygon", help="moment polygon of a toric configuration")
    common(p)
    p.add_argument("--config-index", type=int, default=0)
    p.add_argument("--svg", help="write an SVG drawing here")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("mutation-graph", help="mutation graph on the toric configurations")
    common(p)
    p.add_argument("--dot", help="write a DOT file here")
    p.add_argument("--path", type=int, nargs=2, metavar=("FROM", "TO"))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mutation_graph)

    p = sub.add_parser("realize", help="smoothing closure of the toric set")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("catalog", help="dump the class catalog as TSV")
    common(p, fmt=False)
    p.add_argument("--toric", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("taut", help="def-tautness of a self-intersection sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_taut)

    p = sub.add_parser("selftest", help="formulas against the enumerator on a built-in grid")
    p.add_argument("--out", help="directory for selftest.json")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    out: list[str] = []
    try:
        code = args.func(args, out)
    except (UsageError, LatticeError, DelzantError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = "".join(out)
    sys.stdout.write(text)
    if getattr(args, "manifest", None):
        inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "manifest")}
        m = RunManifest(args.command, inputs, digest=digest(text))
        _write(args.manifest, json.dumps(m.to_json(), indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
