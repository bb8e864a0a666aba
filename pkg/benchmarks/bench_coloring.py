"""Compiled vs pure-Python coloring search on a fixed set of Cayley graphs.

    python3 benchmarks/bench_coloring.py [--repeat N] [--json]

Both backends must agree on value, coloring and node count; the script
exits nonzero if they do not.
"""

import argparse
import json
import sys
import time

from abcayley import kernels, oracle, payan
from abcayley._search_py import dsatur_search as python_search
from abcayley.intlat import IntMatrix
from abcayley.sacg import Circulant, from_group_spec


def cases():
    yield "C13(1,5)", oracle.materialize_finite(from_group_spec(Circulant(13, (1, 5))))
    yield "C35(6,10)", oracle.materialize_finite(IntMatrix([[5, 0], [4, 7]]))
    yield "C97(1,12,33)", oracle.materialize_finite(from_group_spec(Circulant(97, (1, 12, 33))))
    yield "C200(1,7,36)", oracle.materialize_finite(from_group_spec(Circulant(200, (1, 7, 36))))
    yield "Q6^d", payan.qnd_graph(6)
    yield "Q9^d", payan.qnd_graph(9)
    yield "unit-distance ball r=7", oracle.ball_subgraph(IntMatrix([[4, 0], [-5, 4], [4, -5], [0, 4]]), 7)
    yield "Z(2,3,7) ball r=10", oracle.ball_subgraph(IntMatrix([[-3, 7], [2, 0], [0, -2]]), 10)


def run(search, g, budget):
    indptr, indices = g.csr()
    clique = oracle.greedy_clique(g)
    t0 = time.perf_counter()
    res = search(indptr, indices, g.vertex_count, clique, budget)
    return time.perf_counter() - t0, (res[0], list(res[1]), res[2], res[3])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--budget", type=int, default=2_000_000)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if kernels.BACKEND != "cython":
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rows = []
    mismatch = False
    for name, g in cases():
        fast = min(run(kernels.dsatur_search, g, args.budget)[0] for _ in range(args.repeat))
        slow = min(run(python_search, g, args.budget)[0] for _ in range(args.repeat))
        a = run(kernels.dsatur_search, g, args.budget)[1]
        b = run(python_search, g, args.budget)[1]
        mismatch |= a != b
        rows.append({"graph": name, "vertices": g.vertex_count, "chi": a[0], "exact": a[3], "nodes": a[2],
                     "compiled_ms": round(fast * 1000, 3), "python_ms": round(slow * 1000, 3),
                     "speedup": round(slow / fast, 1) if fast else None, "agree": a == b})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'graph':<24} {'n':>6} {'chi':>4} {'nodes':>9} {'compiled ms':>12} {'python ms':>11} {'speedup':>8}")
        for r in rows:
            chi = f"{r['chi']}" + ("" if r["exact"] else "+")
            print(f"{r['graph']:<24} {r['vertices']:>6} {chi:>4} {r['nodes']:>9} {r['compiled_ms']:>12.2f} "
                  f"{r['python_ms']:>11.2f} {r['speedup']:>7}x" + ("" if r["agree"] else "  MISMATCH"))
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
