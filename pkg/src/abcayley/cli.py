"""Command-line front end.

Verbs::

    abcayley analyze FILE        bounds, certificates and (if small) the exact value
    abcayley chi FILE            just the chromatic number or its brackets
    abcayley convert DIRECTION   distance/circulant <-> matrix
    abcayley payan --n N         Payan check over cube-like graphs on Z_2^N
    abcayley qnd N               the cube-with-diagonals matrix and its chi
    abcayley batch DIR           one summary row per matrix file

Exit codes: 2 parse/usage error, 3 vertex cap exceeded, 4 conversion
inapplicable, 5 some batch file failed.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

from . import __version__, homo, oracle, payan
from .intlat import DimensionError, IntMatrix, cross_product, kernel, lattice_equal
from .sacg import (
    DistanceSet,
    MatrixParseError,
    SpecError,
    check_circulant,
    circulant_to_matrix,
    distance_to_matrix,
    format_matrix,
    from_group_spec,
    has_loops,
    matrix_to_distance,
    parse_matrix,
    Circulant,
)

EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INAPPLICABLE = 4
EXIT_BATCH = 5

QND_BUDGET = 1_000_000


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def load_matrix(source: str) -> IntMatrix:
    """A matrix file path, ``-`` for stdin, or inline rows like ``"5 0; 4 7"``."""
    if source == "-":
        text = sys.stdin.read()
    elif os.path.exists(source):
        text = Path(source).read_text()
    elif ";" in source or source.replace("-", "").replace(" ", "").isdigit():
        rows = [r.split() for r in source.split(";") if r.strip()]
        text = f"{len(rows)} {len(rows[0])}\n" + "\n".join(" ".join(r) for r in rows)
    else:
        raise CliError(f"no such file: {source}", EXIT_PARSE)
    try:
        return parse_matrix(text)
    except MatrixParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from None


# ---------------------------------------------------------------------------
# analysis


def analyze_matrix(m: IntMatrix, radius: int | None = None, cap: int = oracle.DEFAULT_CAP,
                   budget: int | None = None, sign_budget: int | None = None, oracle_when_exact: bool = True) -> dict[str, Any]:
    """Everything ``analyze`` reports, as a JSON-ready dict."""
    out: dict[str, Any] = {"dimension": m.nrows, "rank": m.ncols, "matrix": m.tolist()}
    if has_loops(m):
        out.update(loops=True, bipartite=False, chi=None, status="loops")
        return out
    out["loops"] = False
    bv = homo.bipartite_test(m)
    out["bipartite"] = bv.bipartite
    out["column_sums"] = list(bv.column_sums)
    report = homo.chi_upper_pipeline(m, sign_budget)
    out["bounds"] = report.to_json()
    lower = report.lower.value if report.lower else None
    upper = report.upper.value if report.upper else None
    order = oracle.quotient_order(m)
    out["order"] = order
    out["oracle"] = None
    if order is not None and (oracle_when_exact or not report.exact):
        if order > cap:
            out["oracle"] = {"kind": "finite", "error": "cap", "vertices": order, "cap": cap}
        else:
            res = oracle.oracle_chi(m, cap, budget)
            out["oracle"] = _oracle_json("finite", order, res)
            if res.exact:
                lower = upper = res.value
            elif res.status == "bounds":
                lower = max(lower or 0, res.lower)
                upper = res.upper if upper is None else min(upper, res.upper)
    elif order is None and not report.exact:
        r = radius if radius is not None else oracle.default_radius(m)
        try:
            ball = oracle.ball_subgraph(m, r, cap)
        except oracle.CapExceededError as exc:
            out["oracle"] = {"kind": "ball", "radius": r, "error": "cap", "vertices": exc.size, "cap": cap}
        else:
            res = oracle.chromatic_number(ball, budget, lexicographic=False)
            out["oracle"] = _oracle_json("ball", ball.vertex_count, res, radius=r)
            # a ball only certifies a lower bound on the infinite graph
            ball_low = res.value if res.exact else res.lower
            lower = max(lower or 0, ball_low)
    out["lower"] = lower
    out["upper"] = upper
    out["chi"] = lower if lower is not None and lower == upper else None
    out["status"] = "exact" if out["chi"] is not None else "bounds"
    if report.exact:
        out["source"] = "lemmas"
    elif out["chi"] is not None:
        out["source"] = "oracle"
    else:
        out["source"] = None
    return out


def _oracle_json(kind: str, vertices: int, res: oracle.ChromaticResult, **extra) -> dict[str, Any]:
    d = {"kind": kind, "vertices": vertices, "status": res.status, "lower": res.lower,
         "upper": res.upper, "nodes": res.nodes}
    d.update(extra)
    return d


def render_analysis(a: dict[str, Any]) -> str:
    buf = io.StringIO()
    p = lambda *s: print(*s, file=buf)  # noqa: E731
    p(f"dimension {a['dimension']}, rank {a['rank']}")
    if a["loops"]:
        p("uncolorable: loop")
        return buf.getvalue()
    p("loops: none")
    sums = " ".join(str(s) for s in a["column_sums"])
    p(f"bipartite: {'yes' if a['bipartite'] else 'no'} (column sums {sums})")
    b = a["bounds"]
    for side in ("lower", "upper"):
        if b[side] is None:
            p(f"{side} bound: none" + ("  (no <=3 certificate)" if side == "upper" else ""))
        else:
            steps = len(b[side].get("chain", []))
            tail = f"  [{steps}-step chain]" if steps else ""
            p(f"{side} bound: {b[side]['value']}  ({b[side]['reason']}){tail}")
    o = a["oracle"]
    if o is not None:
        if o.get("error") == "cap":
            p(f"oracle: {o['kind']} graph has {o['vertices']} vertices, over cap {o['cap']}")
        elif o["kind"] == "finite":
            if o["status"] == "exact":
                p(f"oracle: exact chi = {o['lower']} on {o['vertices']} vertices")
            else:
                p(f"oracle: {o['lower']} <= chi <= {o['upper']} on {o['vertices']} vertices (budget)")
        else:
            val = o["lower"] if o["status"] == "bounds" else o["upper"]
            p(f"oracle: ball of radius {o['radius']} ({o['vertices']} vertices) needs {val} colors")
    elif a["source"] == "lemmas":
        p("oracle: not needed")
    p(_chi_line(a))
    return buf.getvalue()


def _chi_line(a: dict[str, Any]) -> str:
    if a["loops"]:
        return "uncolorable: loop"
    if a["chi"] is not None:
        return f"chi = {a['chi']} ({'exact via lemmas' if a['source'] == 'lemmas' else 'exact via oracle'})"
    lo = a["lower"] if a["lower"] is not None else "?"
    hi = a["upper"] if a["upper"] is not None else "?"
    return f"{lo} <= chi <= {hi}"


def _cap_hit(a: dict[str, Any]) -> bool:
    o = a.get("oracle")
    return bool(o and o.get("error") == "cap")


def cmd_analyze(args) -> int:
    m = load_matrix(args.file)
    a = analyze_matrix(m, args.radius, args.cap, args.budget, args.sign_budget)
    if args.export_edges:
        _export(m, a, args)
    emit(args, a, render_analysis(a))
    return EXIT_CAP if _cap_hit(a) else 0


def cmd_chi(args) -> int:
    m = load_matrix(args.file)
    a = analyze_matrix(m, args.radius, args.cap, args.budget, args.sign_budget, oracle_when_exact=False)
    doc = {k: a[k] for k in ("chi", "lower", "upper", "status", "loops") if k in a}
    doc["source"] = a.get("source")
    emit(args, doc, _chi_line(a) + "\n")
    return EXIT_CAP if _cap_hit(a) else 0


def _export(m: IntMatrix, a: dict[str, Any], args) -> None:
    if a.get("order") is not None:
        g = oracle.materialize_finite(m, args.cap)
    else:
        g = oracle.ball_subgraph(m, args.radius if args.radius is not None else oracle.default_radius(m), args.cap)
    with open(args.export_edges, "w") as fh:
        oracle.write_edge_list(g, fh)
    print(f"wrote {g.vertex_count} vertices to {args.export_edges}", file=sys.stderr)


def emit(args, doc: Any, text: str) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(dump_json(doc) + "\n")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# conversions


def _ints(values) -> list[int]:
    try:
        return [int(v) for v in values]
    except ValueError:
        raise CliError(f"expected integers, got {' '.join(values)}", EXIT_PARSE) from None


def cmd_convert(args) -> int:
    d = args.direction
    try:
        if d == "distance-to-matrix":
            a = _ints(args.payload)
            m = distance_to_matrix(a)
            ok = lattice_equal(m, from_group_spec(DistanceSet(tuple(a))).matrix)
            doc = {"matrix": m.tolist(), "check": "ok" if ok else "mismatch"}
            text = format_matrix(m) + f"kernel check: {doc['check']}\n"
        elif d == "circulant-to-matrix":
            n, *a = _ints(args.payload)
            m = circulant_to_matrix(n, a)
            ok = lattice_equal(m, from_group_spec(Circulant(n, tuple(a))).matrix)
            doc = {"matrix": m.tolist(), "check": "ok" if ok else "mismatch"}
            text = format_matrix(m) + f"kernel check: {doc['check']}\n"
        elif d == "matrix-to-distance":
            m = load_matrix(" ".join(args.payload))
            dist = matrix_to_distance(m)
            if dist is None:
                raise CliError("inapplicable: cross product is zero or has gcd > 1", EXIT_INAPPLICABLE)
            # the columns must span the whole kernel of the signed cross product
            ok = lattice_equal(m, kernel(IntMatrix.row_vector(cross_product(m))))
            doc = {"distances": list(dist), "check": "ok" if ok else "mismatch"}
            text = "Z, {" + ", ".join(map(str, dist)) + "}\n" + f"kernel check: {doc['check']}\n"
        else:
            m = load_matrix(" ".join(args.payload))
            res = check_circulant(m, args.delete)
            if not res.ok:
                raise CliError(f"inapplicable: {res.reason}", EXIT_INAPPLICABLE)
            doc = {"n": res.n, "connections": list(res.connections), "condition": res.reason}
            text = f"Z_{res.n}, {{{', '.join(map(str, res.connections))}}}\ncondition: {res.reason}\n"
    except (SpecError, DimensionError) as exc:
        raise CliError(f"inapplicable: {exc}", EXIT_INAPPLICABLE) from None
    emit(args, doc, text)
    return 0


# ---------------------------------------------------------------------------
# cube-like graphs


def cmd_payan(args) -> int:
    if args.n < 1 or (args.samples is None and args.n > payan.EXHAUSTIVE_MAX_N) or args.n > 6:
        raise CliError(f"n = {args.n} is over the enumeration limit; use --samples for n > "
                       f"{payan.EXHAUSTIVE_MAX_N} (at most 6)", EXIT_PARSE)
    report = payan.exhaustive_payan_check(args.n, args.samples, args.seed, args.workers)
    text = f"checked {report.checked} specs, chi=3 count: {report.chi3_count}\n"
    if report.inconsistent:
        text += f"verdict mismatches: {len(report.inconsistent)}\n"
    emit(args, report.to_json(), text)
    return 0 if report.ok else 1


def cmd_qnd(args) -> int:
    if args.n < 1:
        raise CliError("n must be >= 1", EXIT_PARSE)
    m = payan.qnd_matrix(args.n)
    a = analyze_matrix(m, cap=args.cap, budget=args.budget or QND_BUDGET)
    doc = {"n": args.n, "matrix": m.tolist(), "analysis": a}
    extra = ""
    if args.n % 2 == 0 and not _cap_hit(a):
        # the fold map onto K_4 is a proper coloring; check it rather than trust it
        fold_ok = oracle.check_coloring(payan.qnd_graph(args.n), payan.sokolova_upper(args.n))
        doc["fold_coloring"] = fold_ok
        extra = f"fold 4-coloring: {'proper' if fold_ok else 'NOT proper'}\n"
        if fold_ok and (a["upper"] is None or a["upper"] > 4):
            a["upper"] = 4
            if a["lower"] == 4:
                a["chi"], a["status"], a["source"] = 4, "exact", "oracle"
    text = format_matrix(m) + render_analysis(a) + extra
    emit(args, doc, text)
    return EXIT_CAP if _cap_hit(a) else 0


# ---------------------------------------------------------------------------
# batch


def _batch_one(path: Path, args) -> dict[str, Any]:
    t0 = time.perf_counter()
    try:
        m = parse_matrix(path.read_text())
        a = analyze_matrix(m, args.radius, args.cap, args.budget, args.sign_budget)
    except Exception as exc:  # collected, not fatal
        return {"name": path.name, "error": f"{type(exc).__name__}: {exc}"}
    ms = int((time.perf_counter() - t0) * 1000)
    return {"name": path.name, "m": m.nrows, "r": m.ncols, "lower": a.get("lower"), "upper": a.get("upper"),
            "chi": a.get("chi"), "loops": a["loops"], "ms": ms}


def _batch_cell(row: dict[str, Any]) -> str:
    if row["loops"]:
        return "loop"
    if row["chi"] is not None:
        return str(row["chi"])
    lo = "?" if row["lower"] is None else row["lower"]
    hi = "?" if row["upper"] is None else row["upper"]
    return f"[{lo}, {hi}]"


def cmd_batch(args) -> int:
    d = Path(args.dir)
    if not d.is_dir():
        raise CliError(f"not a directory: {d}", EXIT_PARSE)
    files = sorted(p for p in d.iterdir() if p.is_file())
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(lambda p: _batch_one(p, args), files))
    ok = [r for r in rows if "error" not in r]
    errors = [r for r in rows if "error" in r]
    if args.json:
        sys.stdout.write(dump_json({"rows": ok, "errors": errors}) + "\n")
    else:
        lines = [f"{'name':<24} {'m':>3} {'r':>3} {'bounds':>10} {'chi':>8} {'ms':>7}"]
        for r in ok:
            lo = "?" if r["lower"] is None else r["lower"]
            hi = "?" if r["upper"] is None else r["upper"]
            lines.append(f"{r['name']:<24} {r['m']:>3} {r['r']:>3} {f'{lo}..{hi}':>10} {_batch_cell(r):>8} {r['ms']:>7}")
        if errors:
            lines.append("")
            lines.append("errors:")
            lines.extend(f"  {e['name']}: {e['error']}" for e in errors)
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_BATCH if errors else 0


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abcayley", description="Chromatic numbers of abelian Cayley graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, solver=True):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if solver:
            p.add_argument("--radius", type=_nonneg, default=None, help="ball radius for infinite graphs")
            p.add_argument("--cap", type=_positive, default=oracle.DEFAULT_CAP, help="vertex cap for the oracle")
            p.add_argument("--budget", type=_positive, default=None, help="search node budget")
            p.add_argument("--sign-budget", type=_positive, default=None, help="sign patterns tried for chi <= 3")

    p = sub.add_parser("analyze", help="bounds, certificates and oracle value")
    p.add_argument("file")
    p.add_argument("--export-edges", metavar="PATH", help="write the (finite or ball) graph as an edge list")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chi", help="chromatic number or brackets")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("convert", help="distance/circulant <-> matrix")
    p.add_argument("direction", choices=["distance-to-matrix", "matrix-to-distance",
                                         "circulant-to-matrix", "matrix-to-circulant"])
    p.add_argument("payload", nargs="+", help="integers, a matrix file, or inline rows '5 0; 4 7'")
    p.add_argument("--delete", choices=["first", "last"], default="first")
    common(p, solver=False)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("payan", help="no cube-like graph on Z_2^n has chi = 3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=_positive, default=None, help="sample this many generating sets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    common(p, solver=False)
    p.set_defaults(func=cmd_payan)

    p = sub.add_parser("qnd", help="cube-with-diagonals graph Q_n^d")
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=_positive, default=oracle.DEFAULT_CAP)
    p.add_argument("--budget", type=_positive, default=None)
    common(p, solver=False)
    p.set_defaults(func=cmd_qnd)

    p = sub.add_parser("batch", help="summarize every matrix file in a directory")
    p.add_argument("dir")
    p.add_argument("--jobs", type=_positive, default=4)
    common(p)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr if exc.code != EXIT_INAPPLICABLE else sys.stdout)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
