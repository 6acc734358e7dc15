"""Command-line front end: ``sat2tri <command> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import farey as fy
from . import formula as fm
from .blockgraph import build_block_graph
from .compiler import compile_formula
from .splitting import MIN_GENUS_GUARD, min_genus
from .tri.blocks import GateError, LibraryError, load_library
from .tri.core import Triangulation, TriangulationError, validate
from .tri.homology import homology_h1

__all__ = ["main", "build_parser", "parse_bipartition_set"]


class UsageError(Exception):
    pass


def _read_formula(path: str, fmt: str = "auto") -> fm.Formula:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return fm.normalize_cnf(fm.parse_formula(text, fmt))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _slope(text: str) -> fy.Slope:
    try:
        return fy.parse_slope(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_bipartition_set(text: str, n: int) -> list[fm.Bipartition]:
    """``"1|23,12|3"`` -> ordered bipartitions of ``{1..n}``."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if item.count("|") != 1:
            raise UsageError(f"bipartition {item!r} needs exactly one '|'")
        sides = item.split("|")
        try:
            plus, minus = ({int(ch) for ch in side} for side in sides)
        except ValueError:
            raise UsageError(f"bipartition {item!r}: element ids are single digits") from None
        try:
            out.append(fm.Bipartition(plus, minus, n))
        except ValueError as exc:
            raise UsageError(f"bipartition {item!r}: {exc}") from None
    return out


# ---------------------------------------------------------------- commands


def _genus_report(f: fm.Formula) -> dict:
    q = fm.length(f)
    bg = build_block_graph(f)
    sat = bool(fm.brute_force_sat(f))
    report = {"q_length": q, "claim_genus": q + 2, "sat": sat, "blocks": len(bg.blocks)}
    if len(bg.blocks) > MIN_GENUS_GUARD:
        report["min_genus"] = None
        report["note"] = f"{len(bg.blocks)} blocks exceed the search guard {MIN_GENUS_GUARD}"
        return report
    res = min_genus(bg)
    report["min_genus"] = str(res)
    report["exact"] = res.exact
    return report


def cmd_genus(args) -> tuple[dict, str]:
    r = _genus_report(_read_formula(args.cnf, args.format))
    mg = r["min_genus"] if r["min_genus"] is not None else "not searched"
    line = f"|Q|={r['q_length']}, claim genus {r['claim_genus']}, SAT: {'yes' if r['sat'] else 'no'}, min amalgamated genus {mg}"
    return r, line


def cmd_sat(args) -> tuple[dict, str]:
    f = _read_formula(args.cnf, args.format)
    models = fm.brute_force_sat(f)
    r = {"sat": bool(models), "models": len(models), "witness": models[0] if models else None}
    if not models:
        return r, "UNSAT"
    w = " ".join(f"{k}={int(v)}" for k, v in models[0].items())
    return r, f"SAT ({len(models)} models) {w}"


def cmd_farey(args) -> tuple[dict, str]:
    s, t = _slope(args.s), _slope(args.t)
    d = fy.farey_distance(s, t)
    return {"from": str(s), "to": str(t), "distance": d}, str(d)


def cmd_fib(args) -> tuple[dict, str]:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    s = fy.fibonacci_slope(args.k)
    d = fy.farey_distance(s, fy.Slope(1, 0))
    closed = fy.fibonacci_distance_closed_form(args.k)
    r = {"k": args.k, "slope": str(s), "distance": d, "closed_form": closed}
    return r, f"{s}  distance to 1/0: {d} (closed form {closed})"


def cmd_verify(args) -> tuple[dict, str]:
    try:
        text = Path(args.tri).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.tri}: {exc.strerror or exc}") from None
    try:
        t = Triangulation.from_text(text)
    except (TriangulationError, ValueError) as exc:
        raise UsageError(f"{args.tri}: {exc}") from None
    rep = validate(t)
    r = rep.summary()
    r.pop("violations")
    r["violations"] = rep.violations
    lines = [
        f"tetrahedra {rep.tet_count}, vertices {rep.vertices}, edges {rep.edges}, faces {rep.faces}",
        f"euler characteristic {rep.euler_characteristic}, orientable {'yes' if rep.orientable else 'no'}, "
        f"boundary tori {len(rep.boundary)}",
    ]
    if rep.ok:
        h = homology_h1(t)
        r["h1"] = h.to_dict()
        lines.append(f"H1 = {_short_h1(h)}")
        lines.append("ok")
    else:
        lines += [f"violation: {v}" for v in rep.violations]
    return r, "\n".join(lines), (0 if rep.ok else 1)


def _short_h1(h) -> str:
    parts = ["Z" if h.rank == 1 else f"Z^{h.rank}"] if h.rank else []
    for k in h.torsion:
        digits = str(k)
        parts.append(f"Z/{digits}" if len(digits) <= 24 else f"Z/({len(digits)}-digit order)")
    return " + ".join(parts) if parts else "0"


def cmd_bipartitions(args) -> tuple[dict, str]:
    if not 1 <= args.n <= 9:
        raise UsageError("--n must be between 1 and 9")
    P = parse_bipartition_set(args.set, args.n)
    f = fm.compile_bipartitions(P, args.n)
    text = fm.to_dimacs(f) if args.format == "dimacs" else fm.to_expr(f) + "\n"
    Path(args.out).write_text(text, encoding="utf-8")
    r = {"n": args.n, "set": sorted(map(str, set(P))), "q_length": fm.length(f), "out": args.out}
    return r, f"wrote {args.out}: {len(set(P))} bipartitions, |Q|={fm.length(f)}"


def cmd_compile(args) -> tuple[dict, str]:
    f = _read_formula(args.cnf, args.format)
    library = None
    blocks = args.blocks or os.environ.get("SAT2TRI_BLOCKS")
    if args.k_override is not None and args.k_override < 1:
        raise UsageError("--k-override must be positive")
    if args.mode == "concrete":
        if not blocks or not Path(blocks).is_dir():
            raise UsageError("concrete mode needs --blocks DIR or SAT2TRI_BLOCKS naming a directory")
        library = load_library(blocks)
    tri, cert = compile_formula(f, library=library, mode=args.mode, k_override=args.k_override)
    Path(args.out).write_text(tri.to_text(), encoding="utf-8")
    Path(args.cert).write_text(cert.to_json() + "\n", encoding="utf-8")
    r = {"out": args.out, "cert": args.cert, "tetrahedra": cert.tet_count, "budget": cert.budget,
         "gluings": len(cert.gluings), "authentic": cert.authentic}
    return r, (
        f"wrote {args.out} ({cert.tet_count} tetrahedra, budget {cert.budget}, "
        f"{len(cert.gluings)} gluings) and {args.cert}"
    )


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sat2tri", description="CNF formulas to block graphs and triangulated 3-manifolds.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cnf_args(sp):
        sp.add_argument("--cnf", required=True, help="formula file (DIMACS or expression)")
        sp.add_argument("--format", choices=["auto", "dimacs", "expr"], default="auto")

    sp = sub.add_parser("compile", help="emit a gluing table and certificate")
    cnf_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--cert", required=True)
    sp.add_argument("--mode", choices=["abstract", "concrete"], default="abstract")
    sp.add_argument("--blocks", help="block data directory (default $SAT2TRI_BLOCKS)")
    sp.add_argument("--k-override", type=int)
    sp.set_defaults(run=cmd_compile)

    sp = sub.add_parser("genus", help="genus claim, minimal amalgamated genus and SAT verdict")
    cnf_args(sp)
    sp.set_defaults(run=cmd_genus)

    sp = sub.add_parser("sat", help="brute-force satisfiability")
    cnf_args(sp)
    sp.set_defaults(run=cmd_sat)

    sp = sub.add_parser("farey", help="Farey graph utilities")
    fsub = sp.add_subparsers(dest="farey_command", required=True, parser_class=_Parser)
    dp = fsub.add_parser("dist", help="distance between two slopes")
    dp.add_argument("s")
    dp.add_argument("t")
    dp.set_defaults(run=cmd_farey)

    sp = sub.add_parser("fib", help="Fibonacci slope F_{k+1}/F_k and its distance to 1/0")
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(run=cmd_fib)

    sp = sub.add_parser("verify", help="validate a gluing table and report H1")
    sp.add_argument("--tri", required=True)
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("bipartitions", help="CNF whose models are a given set of ordered bipartitions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--set", required=True, help='e.g. "1|23,12|3"')
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=["expr", "dimacs"], default="expr")
    sp.set_defaults(run=cmd_bipartitions)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = args.run(args)
    except UsageError as exc:
        print(f"sat2tri: error: {exc}", file=sys.stderr)
        return 2
    except (GateError, LibraryError, AssertionError) as exc:
        print(f"sat2tri: gate failure: {exc}", file=sys.stderr)
        return 1
    except fm.NotCNFError as exc:
        print(f"sat2tri: error: {exc}", file=sys.stderr)
        return 2
    data, text, *rest = result
    code = rest[0] if rest else 0
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
