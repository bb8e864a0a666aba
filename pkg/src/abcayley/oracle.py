"""Ground truth at desk scale.

Finite quotients are materialized through the Smith decomposition, infinite
graphs through BFS balls, and chromatic numbers are computed exactly by
branch and bound (see :mod:`abcayley.kernels`).
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .homo import HomChain, Step
from .intlat import CosetReducer, IntMatrix, as_matrix, hnf, snf
from .sacg import SACGraph

DEFAULT_CAP = 100_000


class InfiniteQuotientError(ValueError):
    pass


class CapExceededError(RuntimeError):
    def __init__(self, size, cap):
        self.size, self.cap = size, cap
        super().__init__(f"graph has {size} vertices, cap is {cap}")


@dataclass
class ConcreteGraph:
    vertex_count: int
    adjacency: list[tuple[int, ...]]
    labels: list[tuple[int, ...]]
    loops: tuple[int, ...] = ()
    generator_images: tuple[tuple[int, ...], ...] = ()
    _index: dict | None = field(default=None, repr=False)

    def index(self, label: Sequence[int]) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[tuple(label)]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v]) + (1 if v in self._loopset() else 0)

    def _loopset(self):
        return set(self.loops)

    @property
    def has_loops(self) -> bool:
        return bool(self.loops)

    def csr(self) -> tuple[list[int], list[int]]:
        indptr = [0]
        indices: list[int] = []
        for nb in self.adjacency:
            indices.extend(nb)
            indptr.append(len(indices))
        return indptr, indices


def _graph_matrix(g) -> IntMatrix:
    return g.matrix if isinstance(g, SACGraph) else as_matrix(g)


def quotient_order(g) -> int | None:
    """``|Z^m / H|``, or None when infinite."""
    m = _graph_matrix(g)
    diag = snf(m).diag
    if len(diag) < m.nrows or any(d == 0 for d in diag):
        return None
    return math.prod(diag)


def materialize_finite(g, cap: int = DEFAULT_CAP) -> ConcreteGraph:
    """Explicit Cayley graph of a finite quotient ``Z^m / H``.

    Vertices are the canonical coset representatives (the box under the
    Hermite diagonal) in lexicographic order.
    """
    m = _graph_matrix(g)
    dim = m.nrows
    form = hnf(m)
    if form.rank < dim:
        raise InfiniteQuotientError(f"lattice rank {form.rank} < dimension {dim}: infinite quotient")
    sm = snf(m)
    diag = sm.diag[:dim]
    order = math.prod(diag)
    if order > cap:
        raise CapExceededError(order, cap)
    box = [form.h[i, i] for i in range(dim)]
    factors = [i for i, d in enumerate(diag) if d > 1]
    mods = [diag[i] for i in factors]
    # smith coordinates of each generator: column i of u, reduced
    u_rows = [[sm.u[i, j] for j in range(dim)] for i in factors]
    gens = [tuple(u_rows[k][j] % mods[k] for k in range(len(factors))) for j in range(dim)]
    strides = []
    s = 1
    for d in reversed(mods):
        strides.append(s)
        s *= d
    strides.reverse()

    labels = list(itertools.product(*(range(b) for b in box)))
    n = len(labels)
    if factors:
        lab = np.array(labels, dtype=object).reshape(n, dim)
        ured = np.array([[x % mods[k] for x in row] for k, row in enumerate(u_rows)], dtype=object)
        digits = (lab.dot(ured.T)) % np.array(mods, dtype=object)
        digits = digits.astype(np.int64)
        mods_a = np.array(mods, dtype=np.int64)
        strides_a = np.array(strides, dtype=np.int64)
        code = digits @ strides_a
        where = np.empty(n, dtype=np.int64)
        where[code] = np.arange(n)
        nbrs = []
        for gv in gens:
            ga = np.array(gv, dtype=np.int64)
            nbrs.append(where[((digits + ga) % mods_a) @ strides_a])
            nbrs.append(where[((digits - ga) % mods_a) @ strides_a])
        nb = np.stack(nbrs, axis=1)
    else:
        nb = np.zeros((n, 2 * dim), dtype=np.int64)
    loops = ()
    if any(not any(gv) for gv in gens):
        loops = tuple(range(n))
    adjacency = []
    for v in range(n):
        row = set(nb[v].tolist())
        row.discard(v)
        adjacency.append(tuple(sorted(row)))
    return ConcreteGraph(n, adjacency, labels, loops, tuple(gens))


def ball_subgraph(g, radius: int, cap: int = DEFAULT_CAP) -> ConcreteGraph:
    """Induced subgraph on the vertices within ``radius`` generator steps of 0."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    m = _graph_matrix(g)
    dim = m.nrows
    reduce = CosetReducer(m)
    steps = []
    for i in range(dim):
        for s in (1, -1):
            e = [0] * dim
            e[i] = s
            steps.append((i, s))
    start = reduce((0,) * dim)
    dist = {start: 0}
    frontier = deque([start])
    nbr: dict[tuple, list[tuple]] = {}
    loop = False
    while frontier:
        v = frontier.popleft()
        d = dist[v]
        out = []
        for i, s in steps:
            w = list(v)
            w[i] += s
            w = reduce(w)
            out.append(w)
            if w == v:
                loop = True
            if w not in dist and d < radius:
                dist[w] = d + 1
                if len(dist) > cap:
                    raise CapExceededError(len(dist), cap)
                frontier.append(w)
        nbr[v] = out
    labels = sorted(dist)
    index = {lab: k for k, lab in enumerate(labels)}
    adjacency = []
    for lab in labels:
        row = {index[w] for w in nbr[lab] if w in index}
        row.discard(index[lab])
        adjacency.append(tuple(sorted(row)))
    loops = tuple(range(len(labels))) if loop else ()
    gens = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    return ConcreteGraph(len(labels), adjacency, labels, loops, gens, _index=index)


def default_radius(m) -> int:
    """Sum of absolute entries of the largest-magnitude column (at least 1)."""
    m = as_matrix(m)
    if m.ncols == 0:
        return 1
    return max(1, max(sum(abs(x) for x in col) for col in m.columns()))


# ---------------------------------------------------------------------------
# coloring


@dataclass
class ChromaticResult:
    status: str  # "exact", "bounds", "loops"
    lower: int | None
    upper: int | None
    coloring: list[int] | None = None
    clique: list[int] | None = None
    nodes: int = 0
    lexicographic: bool = False

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None


def greedy_clique(g: ConcreteGraph, starts: int = 64) -> list[int]:
    n = g.vertex_count
    if n == 0:
        return []
    adj = [set(nb) for nb in g.adjacency]
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    best: list[int] = [order[0]]
    for v in order[:starts]:
        clique = [v]
        cand = set(adj[v])
        while cand:
            w = min(cand, key=lambda x: (-len(adj[x] & cand), x))
            clique.append(w)
            cand &= adj[w]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def lex_least_coloring(g: ConcreteGraph, k: int, budget: int = 20_000) -> list[int] | None:
    """Lexicographically least proper ``k``-coloring (in vertex order), or None.

    None means either that no ``k``-coloring exists or that ``budget``
    assignments were not enough to find it.
    """
    n = g.vertex_count
    if g.has_loops or k <= 0:
        return None if n else []
    adj = g.adjacency
    blocked = [[0] * k for _ in range(n)]
    free = [k] * n
    color = [-1] * n
    nextc = [0] * n
    v = 0
    spent = 0

    def place(v, c, delta):
        ok = True
        for w in adj[v]:
            if w > v:
                row = blocked[w]
                if delta > 0:
                    if row[c] == 0:
                        free[w] -= 1
                        if free[w] == 0:
                            ok = False
                    row[c] += 1
                else:
                    row[c] -= 1
                    if row[c] == 0:
                        free[w] += 1
        return ok

    while 0 <= v < n:
        if color[v] >= 0:
            place(v, color[v], -1)
            color[v] = -1
        c = nextc[v]
        row = blocked[v]
        while c < k and row[c]:
            c += 1
        if c == k:
            nextc[v] = 0
            v -= 1
            continue
        spent += 1
        if spent > budget:
            return None
        color[v] = c
        nextc[v] = c + 1
        if place(v, c, 1):
            v += 1
    return color if v == n else None


def chromatic_number(g: ConcreteGraph, budget: int | None = None, search=None, lexicographic: bool = True) -> ChromaticResult:
    """Exact chromatic number by DSATUR branch and bound.

    ``budget`` caps node expansions; when it runs out the result carries
    bracketing bounds instead of an exact value.  With ``lexicographic``
    the reported optimal coloring is the least one in vertex order when a
    bounded search finds it (``result.lexicographic`` says whether it did).
    """
    if g.has_loops:
        return ChromaticResult("loops", None, None)
    n = g.vertex_count
    if n == 0:
        return ChromaticResult("exact", 0, 0, [], [])
    clique = greedy_clique(g)
    indptr, indices = g.csr()
    search = search or kernels.dsatur_search
    ub, coloring, nodes, complete = search(indptr, indices, n, clique, budget or 0)
    coloring = list(coloring)
    lb = len(clique)
    if complete or ub == lb:
        lex = lex_least_coloring(g, ub) if lexicographic else None
        if lex is not None:
            return ChromaticResult("exact", ub, ub, lex, clique, nodes, True)
        return ChromaticResult("exact", ub, ub, coloring, clique, nodes)
    return ChromaticResult("bounds", lb, ub, coloring, clique, nodes)


def is_bipartite_concrete(g: ConcreteGraph) -> bool:
    if g.has_loops:
        return False
    side = [-1] * g.vertex_count
    for s in range(g.vertex_count):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if side[w] < 0:
                    side[w] = 1 - side[v]
                    queue.append(w)
                elif side[w] == side[v]:
                    return False
    return True


@dataclass
class Coloring:
    colors: list[int]
    palette: int = 0

    def __post_init__(self):
        if not self.palette:
            self.palette = len(set(self.colors))


def check_coloring(g: ConcreteGraph, c) -> bool:
    colors = c.colors if isinstance(c, Coloring) else list(c)
    if len(colors) != g.vertex_count:
        raise ValueError(f"{len(colors)} colors for {g.vertex_count} vertices")
    if g.has_loops:
        return False
    return all(colors[u] != colors[v] for u, nb in enumerate(g.adjacency) for v in nb)


def oracle_chi(g, cap: int = DEFAULT_CAP, budget: int | None = None) -> ChromaticResult:
    """Exact chi of a finite standardized graph (materialized)."""
    return chromatic_number(materialize_finite(g, cap), budget)


def diameter_from_zero(g: ConcreteGraph) -> int:
    dist = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return max(dist.values())


def write_edge_list(g: ConcreteGraph, fh) -> None:
    """Plain ``u v`` lines, 0-based; loops as ``v v``."""
    for v in g.loops:
        fh.write(f"{v} {v}\n")
    for u, v in g.edges():
        fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# homomorphism simulation


def _apply_images(v: Sequence[int], images: Sequence[int], dim: int) -> list[int]:
    out = [0] * dim
    for x, t in zip(v, images):
        out[abs(t) - 1] += x if t > 0 else -x
    return out


def sample_homomorphism(src, dst, images: Sequence[int], samples: int = 200, seed: int = 0, spread: int = 6) -> bool:
    """Check by simulation that ``e_i -> images[i]`` maps adjacent vertices to adjacent vertices.

    Adjacent pairs are taken as canonical representatives ``(u, w)`` with
    ``w = u ± e_i`` modulo the source lattice, so an ill-defined map shows
    up as a non-adjacent image pair.
    """
    src, dst = as_matrix(src), as_matrix(dst)
    rng = random.Random(seed)
    red_s, red_t = CosetReducer(src), CosetReducer(dst)
    m, l = src.nrows, dst.nrows
    zero_t = red_t([0] * l)
    gen_classes = set()
    for k in range(l):
        for s in (1, -1):
            e = [0] * l
            e[k] = s
            gen_classes.add(red_t(e))
    cols = src.columns()
    for _ in range(samples):
        v = [rng.randint(-spread, spread) for _ in range(m)]
        i = rng.randrange(m)
        sign = rng.choice((1, -1))
        u = red_s(v)
        w = list(v)
        w[i] += sign
        w = red_s(w)
        tu = _apply_images(u, images, l)
        tw = _apply_images(w, images, l)
        diff = red_t([b - a for a, b in zip(tu, tw)])
        if diff not in gen_classes:
            return False
        if cols:
            h = [0] * m
            for col in cols:
                c = rng.randint(-3, 3)
                h = [a + c * b for a, b in zip(h, col)]
            shifted = _apply_images([a + b for a, b in zip(u, h)], images, l)
            if red_t([a - b for a, b in zip(shifted, tu)]) != zero_t:
                return False
    return True


def verify_hom_chain(chain: HomChain | Sequence[Step], samples: int = 200, seed: int = 0) -> bool:
    """Simulate every step of a chain; False means a certified bug."""
    steps = chain.steps if isinstance(chain, HomChain) else list(chain)
    for a, b in zip(steps, steps[1:]):
        if a.target != b.source:
            return False
    for k, st in enumerate(steps):
        if st.kind == "delete_zero_row":
            row = st.param["row"]
            back = tuple(i + 1 if i < row else i + 2 for i in range(st.target.nrows))
            ok = sample_homomorphism(st.target, st.source, back, samples, seed + k)
            ok = ok and not any(st.source.row(row))
        elif st.images is None:
            return False
        else:
            ok = sample_homomorphism(st.source, st.target, st.images, samples, seed + k)
        if not ok:
            return False
    return True
