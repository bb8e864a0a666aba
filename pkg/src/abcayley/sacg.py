"""Standardized abelian Cayley graphs and their Heuberger matrices.

A connected finite-degree abelian Cayley graph ``Cay(G, {±g_1..±g_m})`` is
isomorphic to ``Cay(Z^m / H, {H ± e_i})`` where ``H`` is the kernel of
``e_i -> g_i``.  An ``m x r`` integer matrix whose columns span ``H`` is a
Heuberger matrix of the graph; ``m`` is its dimension and ``r`` its rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence, Union

from .intlat import (
    CosetReducer,
    DimensionError,
    IntMatrix,
    as_matrix,
    cross_product,
    det,
    gcd_vec,
    kernel_mod_lattice,
    lattice_equal,
    lattice_membership,
    subgroup_index,
)

HeubergerMatrix = IntMatrix


class SpecError(ValueError):
    """Invalid group specification (including non-generating sets)."""


class NotGeneratingError(SpecError):
    def __init__(self, index):
        self.index = index
        shown = "infinite" if index is None else str(index)
        super().__init__(f"generators do not generate the group (subgroup index {shown})")


class StepError(ValueError):
    """A matrix operation was applied where its precondition fails."""


# ---------------------------------------------------------------------------
# group specifications


@dataclass(frozen=True)
class Circulant:
    n: int
    connections: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "connections", tuple(int(a) for a in self.connections))
        if self.n <= 0:
            raise SpecError(f"modulus must be positive, got {self.n}")
        if not self.connections:
            raise SpecError("empty connection list")
        if any(a % self.n == 0 for a in self.connections):
            raise SpecError("a connection is congruent to 0")


@dataclass(frozen=True)
class DistanceSet:
    distances: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(int(a) for a in self.distances))
        if not self.distances:
            raise SpecError("empty distance set")
        if any(a <= 0 for a in self.distances):
            raise SpecError("distances must be positive")
        if len(set(self.distances)) != len(self.distances):
            raise SpecError("distances must be distinct")


@dataclass(frozen=True)
class CubeLike:
    n: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(b) & 1 for b in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.n < 1:
            raise SpecError("cube-like dimension must be >= 1")
        if not gens:
            raise SpecError("empty generator list")
        if any(len(g) != self.n for g in gens):
            raise SpecError(f"generators must be bit tuples of length {self.n}")
        if any(not any(g) for g in gens):
            raise SpecError("the zero vector is not allowed as a generator")
        if len(set(gens)) != len(gens):
            raise SpecError("generators must be distinct")


@dataclass(frozen=True)
class Quotient:
    """``Z^k / span(relations)`` with generators given by the columns of ``generator_images``."""

    relations: IntMatrix
    generator_images: IntMatrix

    def __post_init__(self):
        rel = as_matrix(self.relations)
        gen = as_matrix(self.generator_images)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "generator_images", gen)
        if rel.nrows != gen.nrows:
            raise SpecError("relations and generator images live in different Z^k")
        if gen.ncols == 0:
            raise SpecError("empty generator list")


GroupSpec = Union[Circulant, DistanceSet, CubeLike, Quotient]


def spec_to_json(spec: GroupSpec) -> dict[str, Any]:
    if isinstance(spec, Circulant):
        return {"type": "circulant", "n": spec.n, "connections": list(spec.connections)}
    if isinstance(spec, DistanceSet):
        return {"type": "distance_set", "distances": list(spec.distances)}
    if isinstance(spec, CubeLike):
        return {"type": "cube_like", "n": spec.n, "generators": ["".join(map(str, g)) for g in spec.generators]}
    return {
        "type": "quotient",
        "relations": spec.relations.tolist(),
        "generator_images": spec.generator_images.tolist(),
    }


@dataclass(frozen=True)
class SACGraph:
    matrix: IntMatrix
    provenance: GroupSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.matrix.nrows < 1:
            raise DimensionError("a Heuberger matrix needs dimension >= 1")

    @property
    def dimension(self) -> int:
        return self.matrix.nrows

    @property
    def rank(self) -> int:
        return self.matrix.ncols


def _generator_data(spec: GroupSpec) -> tuple[IntMatrix, IntMatrix]:
    """(generator images k x m, relations k x s) with ± duplicates removed."""
    if isinstance(spec, Circulant):
        n = spec.n
        kept: list[int] = []
        seen: set[int] = set()
        for a in spec.connections:
            a %= n
            if a in seen or (n - a) % n in seen:
                continue
            seen.add(a)
            kept.append(a)
        return IntMatrix.row_vector(kept), IntMatrix([[n]])
    if isinstance(spec, DistanceSet):
        return IntMatrix.row_vector(spec.distances), IntMatrix.zeros(1, 0)
    if isinstance(spec, CubeLike):
        gens = IntMatrix.from_columns(spec.generators, spec.n)
        two = IntMatrix(((2 if i == j else 0 for j in range(spec.n)) for i in range(spec.n)), ncols=spec.n)
        return gens, two
    rel = spec.relations
    kept_cols: list[tuple[int, ...]] = []
    for col in spec.generator_images.columns():
        dup = False
        for prev in kept_cols:
            plus = tuple(a - b for a, b in zip(col, prev))
            minus = tuple(a + b for a, b in zip(col, prev))
            if lattice_membership(rel, plus) is not None or lattice_membership(rel, minus) is not None:
                dup = True
                break
        if not dup:
            kept_cols.append(col)
    return IntMatrix.from_columns(kept_cols, rel.nrows), rel


def from_group_spec(spec: GroupSpec) -> SACGraph:
    """Heuberger matrix (Hermite basis of the kernel of ``e_i -> g_i``) for a group spec."""
    gens, rel = _generator_data(spec)
    index = subgroup_index(gens, rel)
    if index != 1:
        raise NotGeneratingError(index)
    return SACGraph(kernel_mod_lattice(gens, rel), provenance=spec)


# ---------------------------------------------------------------------------
# distance graphs and circulants


def _leading_bezout(a: Sequence[int], target: int) -> list[int]:
    """Solve ``a . u == target``, choosing each leading coefficient smallest nonnegative."""
    if len(a) == 1:
        q, r = divmod(target, a[0])
        if r:
            raise ValueError("no integer solution")
        return [q]
    rest = gcd_vec(a[1:])
    # a0 * u0 == target (mod rest)
    g = math.gcd(a[0], rest)
    if target % g:
        raise ValueError("no integer solution")
    mod = rest // g
    u0 = ((target // g) * pow(a[0] // g, -1, mod)) % mod if mod > 1 else 0
    return [u0] + _leading_bezout(a[1:], target - a[0] * u0)


def _distance_formula(a: Sequence[int]) -> IntMatrix:
    """The ``(r+1) x r`` kernel matrix built column by column from partial gcds."""
    r = len(a) - 1
    g = [0] + [gcd_vec(a[: k + 1]) for k in range(len(a))]  # g[k] = gcd(a_1..a_k), 1-based
    cols = []
    first = [0] * (r + 1)
    first[0] = a[1] // g[2]
    first[1] = -a[0] // g[2]
    cols.append(first)
    for k in range(2, r + 1):
        u = _leading_bezout(a[:k], a[k] * g[k] // g[k + 1])
        col = [0] * (r + 1)
        for i in range(k):
            col[i] = -u[i]
        col[k] = g[k] // g[k + 1]
        cols.append(col)
    return IntMatrix.from_columns(cols, r + 1)


def distance_to_matrix(a: Sequence[int]) -> IntMatrix:
    """Heuberger matrix of ``Cay(Z, {±a_1, ..., ±a_{r+1}})``."""
    a = [int(x) for x in a]
    if len(a) < 2:
        raise SpecError("need at least two distances")
    if any(x <= 0 for x in a):
        raise SpecError("distances must be positive")
    if gcd_vec(a) != 1:
        raise SpecError(f"distances have gcd {gcd_vec(a)}, graph is disconnected")
    if len(a) == 2:
        return IntMatrix.column_vector([-a[1], a[0]])
    return _distance_formula(a)


def circulant_to_matrix(n: int, a: Sequence[int]) -> IntMatrix:
    """Heuberger matrix (``r x r``) of the circulant ``C_n(a_1, ..., a_r)``."""
    a = [int(x) % n for x in a]
    if not a or any(x == 0 for x in a):
        raise SpecError("connections must be nonzero mod n")
    if gcd_vec(a + [n]) != 1:
        raise SpecError(f"gcd(connections, n) = {gcd_vec(a + [n])}, graph is disconnected")
    full = _distance_formula(a + [n])
    return full.delete_row(full.nrows - 1)


def matrix_to_distance(m) -> tuple[int, ...] | None:
    """Distances ``|v_j|`` of an isomorphic integer distance graph, or None."""
    m = as_matrix(m)
    v = cross_product(m)
    if not any(v) or gcd_vec(v) != 1:
        return None
    return tuple(abs(x) for x in v)


@dataclass(frozen=True)
class CirculantCheck:
    n: int
    v: tuple[int, ...]
    ok: bool
    reason: str

    @property
    def connections(self) -> tuple[int, ...]:
        return tuple(abs(x) for x in self.v)


def check_circulant(m, delete: str = "first") -> CirculantCheck:
    """Evaluate the determinant / cross-product conditions for a circulant description."""
    m = as_matrix(m)
    if m.nrows != m.ncols:
        raise DimensionError(f"circulant conversion needs a square matrix, got {m.shape}")
    if delete not in ("first", "last"):
        raise ValueError("delete must be 'first' or 'last'")
    n = abs(det(m))
    j = 0 if delete == "first" else m.ncols - 1
    v = cross_product(m.delete_column(j)) if m.ncols else ()
    if n == 0:
        return CirculantCheck(n, v, False, "det = 0")
    if not any(v):
        return CirculantCheck(n, v, False, "v = 0")
    gv = gcd_vec(v)
    if math.gcd(n, gv) == 1:
        return CirculantCheck(n, v, True, "gcd(n, gcd(v)) = 1")
    if gv == 1:
        return CirculantCheck(n, v, True, "gcd(v) = 1")
    return CirculantCheck(n, v, False, f"gcd(v) = {gv}")


def matrix_to_circulant(m, delete: str = "first") -> tuple[int, tuple[int, ...]] | None:
    """``(n, connections)`` of an isomorphic circulant, or None if the test fails."""
    res = check_circulant(m, delete)
    if not res.ok:
        return None
    return res.n, res.connections


# ---------------------------------------------------------------------------
# structural operations


@dataclass(frozen=True)
class Step:
    """One certified move between Heuberger matrices.

    ``images`` encodes the generator map: entry ``i`` is ``±k`` (1-based)
    meaning ``e_{i+1} -> ±e_k``.  It is None only for equality steps that
    are not realized by a generator map (zero-row deletion).
    """

    kind: str
    params: tuple[tuple[str, Any], ...]
    source: IntMatrix
    target: IntMatrix
    images: tuple[int, ...] | None

    @property
    def param(self) -> dict[str, Any]:
        return dict(self.params)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "params": {k: _jsonable(v) for k, v in self.params},
            "source": _matrix_json(self.source),
            "target": _matrix_json(self.target),
            "images": None if self.images is None else list(self.images),
        }


def _jsonable(v):
    if isinstance(v, IntMatrix):
        return _matrix_json(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _matrix_json(m: IntMatrix) -> dict[str, Any]:
    return {"rows": m.nrows, "cols": m.ncols, "entries": m.tolist()}


def matrix_from_json(d: dict[str, Any]) -> IntMatrix:
    return IntMatrix(d["entries"], ncols=d["cols"])


def _identity_images(m: int) -> tuple[int, ...]:
    return tuple(range(1, m + 1))


def _step(kind, source, target, images, **params) -> Step:
    return Step(kind, tuple(sorted(params.items())), source, target, images)


def _graph(g) -> SACGraph:
    return g if isinstance(g, SACGraph) else SACGraph(as_matrix(g))


def permute_columns(g, perm: Sequence[int]) -> tuple[SACGraph, Step]:
    """New column ``j`` is old column ``perm[j]``."""
    g = _graph(g)
    m = g.matrix
    perm = tuple(perm)
    if sorted(perm) != list(range(m.ncols)):
        raise StepError(f"{perm} is not a permutation of the columns")
    out = m.select_columns(perm)
    return SACGraph(out), _step("permute_columns", m, out, _identity_images(m.nrows), perm=perm)


def negate_column(g, j: int) -> tuple[SACGraph, Step]:
    g = _graph(g)
    m = g.matrix
    if not 0 <= j < m.ncols:
        raise StepError(f"no column {j}")
    cols = m.columns()
    cols[j] = tuple(-x for x in cols[j])
    out = IntMatrix.from_columns(cols, m.nrows)
    return SACGraph(out), _step("negate_column", m, out, _identity_images(m.nrows), col=j)


def add_column_multiple(g, j: int, i: int, a: int) -> tuple[SACGraph, Step]:
    """Replace column ``j`` by ``y_j + a * y_i`` (``i != j``)."""
    g = _graph(g)
    m = g.matrix
    if i == j or not (0 <= i < m.ncols and 0 <= j < m.ncols):
        raise StepError(f"bad column pair ({j}, {i})")
    cols = m.columns()
    cols[j] = tuple(x + a * y for x, y in zip(cols[j], cols[i]))
    out = IntMatrix.from_columns(cols, m.nrows)
    return SACGraph(out), _step("add_column_multiple", m, out, _identity_images(m.nrows), col=j, src=i, factor=a)


def delete_redundant_column(g, j: int) -> tuple[SACGraph, Step]:
    """Delete column ``j``, which must lie in the integer span of the others."""
    g = _graph(g)
    m = g.matrix
    if not 0 <= j < m.ncols:
        raise StepError(f"no column {j}")
    rest = m.delete_column(j)
    witness = lattice_membership(rest, m.column(j))
    if witness is None:
        raise StepError(f"column {j} is not in the span of the other columns")
    return SACGraph(rest), _step("delete_redundant_column", m, rest, _identity_images(m.nrows), col=j, witness=witness)


def permute_rows(g, perm: Sequence[int]) -> tuple[SACGraph, Step]:
    """New row ``perm[i]`` is old row ``i``, i.e. ``e_i -> e_{perm[i]}``."""
    g = _graph(g)
    m = g.matrix
    perm = tuple(perm)
    if sorted(perm) != list(range(m.nrows)):
        raise StepError(f"{perm} is not a permutation of the rows")
    rows = [None] * m.nrows
    for i, p in enumerate(perm):
        rows[p] = m.row(i)
    out = IntMatrix(rows, ncols=m.ncols)
    return SACGraph(out), _step("permute_rows", m, out, tuple(p + 1 for p in perm), perm=perm)


def negate_rows(g, rows: Sequence[int]) -> tuple[SACGraph, Step]:
    g = _graph(g)
    m = g.matrix
    rows = tuple(sorted(set(rows)))
    if any(not 0 <= i < m.nrows for i in rows):
        raise StepError("row index out of range")
    flip = set(rows)
    out = IntMatrix(((-x for x in r) if i in flip else r for i, r in enumerate(m.entries)), ncols=m.ncols)
    images = tuple(-(i + 1) if i in flip else i + 1 for i in range(m.nrows))
    return SACGraph(out), _step("negate_rows", m, out, images, rows=rows)


def delete_zero_row(g, k: int) -> tuple[SACGraph, Step]:
    """Delete an all-zero row; the chromatic number is unchanged."""
    g = _graph(g)
    m = g.matrix
    if m.nrows < 2:
        raise StepError("cannot delete the only row")
    if not 0 <= k < m.nrows or any(m.row(k)):
        raise StepError(f"row {k} is not an all-zero row")
    out = m.delete_row(k)
    return SACGraph(out), _step("delete_zero_row", m, out, None, row=k)


def block_split(g) -> list[tuple[SACGraph, tuple[int, ...], tuple[int, ...]]]:
    """Split into visible direct summands.

    Returns ``(block, rows, cols)`` triples: connected components of the
    bipartite row/column graph of nonzero entries.  Zero columns are dropped
    (they never change the graph); each zero row becomes a ``1 x 0`` block.
    """
    g = _graph(g)
    m = g.matrix
    parent = list(range(m.nrows))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    col_rows: list[list[int]] = []
    for j in range(m.ncols):
        rows = [i for i in range(m.nrows) if m[i, j]]
        col_rows.append(rows)
        for i in rows[1:]:
            parent[find(i)] = find(rows[0])
    groups: dict[int, list[int]] = {}
    for i in range(m.nrows):
        groups.setdefault(find(i), []).append(i)
    blocks = []
    for root in sorted(groups, key=lambda r: groups[r][0]):
        rows = tuple(groups[root])
        cols = tuple(j for j in range(m.ncols) if col_rows[j] and find(col_rows[j][0]) == root)
        sub = m.select_rows(rows).select_columns(cols)
        blocks.append((SACGraph(sub), rows, cols))
    return blocks


# ---------------------------------------------------------------------------
# vertices


def has_loops(g) -> bool:
    """True iff some ``e_i`` lies in the column lattice."""
    m = _graph(g).matrix
    for i in range(m.nrows):
        e = [0] * m.nrows
        e[i] = 1
        if lattice_membership(m, e) is not None:
            return True
    return False


def loop_generators(g) -> list[int]:
    m = _graph(g).matrix
    reducer = CosetReducer(m)
    zero = (0,) * m.nrows
    out = []
    for i in range(m.nrows):
        e = [0] * m.nrows
        e[i] = 1
        if reducer(e) == zero:
            out.append(i)
    return out


def canonicalize_vertex(v: Sequence[int], g) -> tuple[int, ...]:
    """Unique representative of ``v`` modulo the column lattice."""
    return CosetReducer(_graph(g).matrix)(tuple(v))


def same_graph(a, b) -> bool:
    """Equal column lattices (identical standardized graphs)."""
    return lattice_equal(_graph(a).matrix, _graph(b).matrix)


# ---------------------------------------------------------------------------
# matrix text format


class MatrixParseError(ValueError):
    pass


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``m r`` followed by ``m`` rows of ``r`` integers.

    Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise MatrixParseError("empty input")
    try:
        head = [int(x) for x in lines[0].split()]
    except ValueError:
        raise MatrixParseError(f"bad header {lines[0]!r}") from None
    if len(head) != 2 or head[0] < 1 or head[1] < 0:
        raise MatrixParseError(f"header must be 'm r' with m >= 1, r >= 0, got {lines[0]!r}")
    m, r = head
    body = lines[1:]
    if r == 0:
        if body:
            raise MatrixParseError("rank 0 matrix must have no rows of entries")
        return IntMatrix.zeros(m, 0)
    if len(body) != m:
        raise MatrixParseError(f"expected {m} rows, found {len(body)}")
    rows = []
    for n, line in enumerate(body, 1):
        try:
            row = [int(x) for x in line.split()]
        except ValueError:
            raise MatrixParseError(f"row {n}: non-integer entry in {line!r}") from None
        if len(row) != r:
            raise MatrixParseError(f"row {n}: expected {r} entries, found {len(row)}")
        rows.append(row)
    return IntMatrix(rows, ncols=r)


def format_matrix(m: IntMatrix) -> str:
    m = as_matrix(m)
    lines = [f"{m.nrows} {m.ncols}"]
    if m.ncols:
        lines.extend(" ".join(str(x) for x in row) for row in m.entries)
    return "\n".join(lines) + "\n"
