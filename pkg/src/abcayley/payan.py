"""Cube-like graphs: no cube-like graph has chromatic number 3.

A cube-like graph ``Cay(Z_2^n, S)`` has a matrix of the form ``(A | 2I_m)``
with ``A`` a 0/1 matrix.  If some column ``y`` of ``A`` has odd weight
``z``, the cube-with-diagonals graph ``Q_{z-1}^d`` maps into it, and since
``z - 1`` is even that graph needs four colors.  Otherwise every column sum
is even and the graph is bipartite.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

from .homo import HomChain, make_step
from .intlat import IntMatrix, as_matrix, lattice_membership
from .oracle import Coloring, ConcreteGraph, chromatic_number, materialize_finite
from .sacg import CubeLike, NotGeneratingError


def qnd_matrix(n: int) -> IntMatrix:
    """``(w_{n+1} | 2I_{n+1})``: the cube ``Q_n`` with antipodal diagonals."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n + 1
    return IntMatrix.column_vector([1] * m).hstack(_two_identity(m))


def qnd_spec(n: int) -> CubeLike:
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens.append((1,) * n)
    return CubeLike(n, tuple(gens))


def _two_identity(m: int) -> IntMatrix:
    return IntMatrix([[2 * (i == j) for j in range(m)] for i in range(m)])


def _f2_rank(vectors: Sequence[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def _bits(g: Sequence[int]) -> int:
    return sum(b << i for i, b in enumerate(g))


def f2_kernel(columns: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Basis of ``{x in F_2^m : sum x_i c_i = 0}``, in reduced echelon form, as 0/1 tuples."""
    m = len(columns)
    rows = [[columns[j][i] & 1 for j in range(m)] for i in range(n)]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(n):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * m
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = rows[i][f]
        basis.append(tuple(x))
    return basis


def _check_generating(spec: CubeLike) -> None:
    rank = _f2_rank([_bits(g) for g in spec.generators])
    if rank < spec.n:
        raise NotGeneratingError(2 ** (spec.n - rank))


def cube_like_matrix(spec: CubeLike) -> IntMatrix:
    """``(A | 2I_m)`` with ``A`` a 0/1 lift of an F_2 kernel basis of the generators."""
    _check_generating(spec)
    m = len(spec.generators)
    kernel = f2_kernel(spec.generators, spec.n)
    a = IntMatrix.from_columns(kernel, m)
    return a.hstack(_two_identity(m))


def reduce_mod2(a) -> IntMatrix:
    """Entries reduced into {0, 1}; with a ``2I`` block alongside, the lattice is unchanged."""
    a = as_matrix(a)
    return IntMatrix([[x % 2 for x in row] for row in a.entries], ncols=a.ncols)


def reduce_mod2_chain(full) -> tuple[HomChain, IntMatrix]:
    """Column operations taking ``(A | 2I_m)`` to ``(A mod 2 | 2I_m)``."""
    full = as_matrix(full)
    m = full.nrows
    k = full.ncols - m
    if k < 0 or full.select_columns(range(k, full.ncols)) != _two_identity(m):
        raise ValueError("matrix is not of the form (A | 2I)")
    chain = HomChain()
    cur = full
    for j in range(k):
        for i in range(m):
            x = cur[i, j]
            q = (x - x % 2) // 2
            if q:
                st = make_step(cur, "add_column_multiple", col=j, src=k + i, factor=-q)
                chain.append(st)
                cur = st.target
    return chain, cur


@dataclass
class CubeLikeVerdict:
    outcome: str  # "loops", "bipartite", "at_least_four"
    matrix: IntMatrix
    z: int | None = None
    column: int | None = None
    witness: HomChain | None = None

    @property
    def chi_lower(self) -> int | None:
        return {"bipartite": 2, "at_least_four": 4}.get(self.outcome)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"outcome": self.outcome}
        if self.z is not None:
            out["z"] = self.z
            out["column"] = self.column
            out["witness"] = self.witness.to_json()
        return out


def _has_loop(full: IntMatrix) -> bool:
    for i in range(full.nrows):
        e = [0] * full.nrows
        e[i] = 1
        if lattice_membership(full, e) is not None:
            return True
    return False


def payan_witness(full: IntMatrix, j: int) -> HomChain:
    """Chain ``Q_{z-1}^d -> full`` through column ``j`` (a 0/1 column of odd weight ``z``)."""
    full = as_matrix(full)
    m = full.nrows
    y = full.column(j)
    support = [i for i, x in enumerate(y) if x]
    z = len(support)
    src = qnd_matrix(z - 1)
    # first hop: e_k -> e_{i_k}, landing on (y | 2e_{i_1} ... 2e_{i_z})
    k = full.ncols - m
    two = [tuple(2 * (r == i) for r in range(m)) for i in support]
    mid = IntMatrix.from_columns([y] + two, m)
    chain = HomChain([make_step(src, "generator_map", target=mid, images=tuple(i + 1 for i in support))])
    # second hop: append the remaining columns, then restore the column order
    placed = [j] + [k + i for i in support]
    rest = [c for c in range(full.ncols) if c not in placed]
    cur = mid
    for c in rest:
        st = make_step(cur, "append_column", column=full.column(c))
        chain.append(st)
        cur = st.target
    order = placed + rest
    perm = tuple(order.index(c) for c in range(full.ncols))
    if perm != tuple(range(full.ncols)):
        chain.append(make_step(cur, "permute_columns", perm=perm))
    return chain


def payan_analyze(spec: CubeLike) -> CubeLikeVerdict:
    full = cube_like_matrix(spec)
    if _has_loop(full):
        return CubeLikeVerdict("loops", full)
    k = full.ncols - full.nrows
    for j in range(k):
        z = sum(full.column(j))
        if z % 2:
            return CubeLikeVerdict("at_least_four", full, z, j, payan_witness(full, j))
    return CubeLikeVerdict("bipartite", full)


def fold_color(x: Sequence[int]) -> int:
    """``x -> (x_1, x_2 + ... + x_n mod 2)``, packed as ``2*a + b``."""
    return 2 * (x[0] & 1) + (sum(x[1:]) & 1)


def qnd_graph(n: int) -> ConcreteGraph:
    return materialize_finite(qnd_matrix(n))


def qnd_group_element(label: Sequence[int]) -> tuple[int, ...]:
    """Element of ``Z_2^n`` represented by a coset label of ``qnd_matrix(n)``."""
    w = label[-1]
    return tuple((x + w) & 1 for x in label[:-1])


def sokolova_upper(n: int) -> Coloring:
    """Fold 4-coloring of the materialized ``Q_n^d`` (``n`` even)."""
    if n < 2 or n % 2:
        raise ValueError("the fold coloring needs an even n >= 2")
    g = qnd_graph(n)
    return Coloring([fold_color(qnd_group_element(lab)) for lab in g.labels], 4)


# ---------------------------------------------------------------------------
# enumeration


def cube_like_graph(spec: CubeLike) -> ConcreteGraph:
    """The Cayley graph on ``Z_2^n`` built directly with XOR (vertex = bitmask)."""
    n = spec.n
    gens = [_bits(g) for g in spec.generators]
    size = 1 << n
    adjacency = [tuple(sorted({v ^ s for s in gens})) for v in range(size)]
    labels = [tuple((v >> i) & 1 for i in range(n)) for v in range(size)]
    return ConcreteGraph(size, adjacency, labels, (), tuple(spec.generators))


def _spec_from_mask(n: int, vectors: Sequence[int]) -> CubeLike:
    return CubeLike(n, tuple(tuple((v >> i) & 1 for i in range(n)) for v in vectors))


def generating_subsets(n: int):
    """Every generating set ``S`` of nonzero vectors of ``Z_2^n`` (as sorted bitmask tuples)."""
    nonzero = range(1, 1 << n)
    for size in range(n, (1 << n)):
        for combo in itertools.combinations(nonzero, size):
            if _f2_rank(combo) == n:
                yield combo


def sample_generating_subsets(n: int, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    """``count`` distinct generating sets drawn uniformly (rejection sampling)."""
    rng = random.Random(seed)
    total = (1 << ((1 << n) - 1))
    seen: set[tuple[int, ...]] = set()
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 100 * count + 1000:
            raise RuntimeError("could not draw enough distinct generating sets")
        mask = rng.randrange(1, total)
        combo = tuple(v for v in range(1, 1 << n) if mask >> (v - 1) & 1)
        if combo in seen or _f2_rank(combo) < n:
            continue
        seen.add(combo)
        out.append(combo)
    return out


def _check_one(args) -> dict[str, Any]:
    n, combo = args
    spec = _spec_from_mask(n, combo)
    verdict = payan_analyze(spec)
    chi = chromatic_number(cube_like_graph(spec))
    summary = None
    if verdict.witness is not None:
        summary = {"z": verdict.z, "column": verdict.column, "steps": len(verdict.witness.steps)}
    return {
        "spec": {"n": n, "generators": list(combo)},
        "verdict": verdict.outcome,
        "chi_exact": chi.value,
        "witness_summary": summary,
    }


@dataclass
class PayanReport:
    n: int
    entries: list[dict[str, Any]]

    @property
    def checked(self) -> int:
        return len(self.entries)

    @property
    def chi3_count(self) -> int:
        return sum(1 for e in self.entries if e["chi_exact"] == 3)

    @property
    def inconsistent(self) -> list[dict[str, Any]]:
        bad = []
        for e in self.entries:
            chi, v = e["chi_exact"], e["verdict"]
            if (v == "bipartite") != (chi == 2) or (v == "at_least_four") != (chi is not None and chi >= 4):
                bad.append(e)
        return bad

    @property
    def ok(self) -> bool:
        return self.chi3_count == 0 and not self.inconsistent

    def to_json(self) -> list[dict[str, Any]]:
        return self.entries


EXHAUSTIVE_MAX_N = 4


def exhaustive_payan_check(n: int, sample_budget: int | None = None, seed: int = 0, workers: int = 1) -> PayanReport:
    """Oracle chi and lemma verdict for every (or ``sample_budget`` sampled) generating set.

    Generators are bitmasks: bit ``i`` of a mask is coordinate ``i``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sample_budget is None:
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}; pass a sample budget")
        combos = list(generating_subsets(n))
    else:
        if n > 6:
            raise ValueError("sampling is limited to n <= 6")
        combos = sample_generating_subsets(n, sample_budget, seed)
    combos.sort(key=lambda c: (len(c), c))
    jobs = [(n, c) for c in combos]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            entries = list(pool.map(_check_one, jobs, chunksize=32))
    else:
        entries = [_check_one(j) for j in jobs]
    return PayanReport(n, entries)
