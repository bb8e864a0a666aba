"""Exact integer lattice algebra.

Everything here works on Python ints, so there is no overflow and no
floating point.  Matrices are immutable; every operation returns a new one.

Conventions
-----------
Lattices are spanned by the *columns* of a matrix.  The Hermite normal
form is the column-style lower echelon form: the pivot of column ``k``
sits in row ``pivots[k]``, the rows strictly above it are zero, the pivot
is positive, and entries to the left of a pivot in its row are reduced
into ``[0, pivot)``.  That form is unique for a given lattice, so two
bases span the same lattice iff their Hermite forms agree entry for entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class IntMatrix:
    """Immutable integer matrix stored row-major.

    Shapes with zero rows or zero columns are allowed (an ``m x 0`` matrix
    spans the zero lattice in ``Z^m``).
    """

    __slots__ = ("nrows", "ncols", "entries", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise DimensionError("cannot infer column count of an empty matrix")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise DimensionError(f"ragged row: expected {ncols} entries, got {len(row)}")
        self.nrows = len(data)
        self.ncols = ncols
        self.entries = data
        self._hash = None

    # construction helpers

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> "IntMatrix":
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise DimensionError(f"column of length {len(c)} in a {nrows}-row matrix")
        return cls((tuple(c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def row_vector(cls, values: Sequence[int]) -> "IntMatrix":
        return cls([tuple(values)], ncols=len(values))

    @classmethod
    def column_vector(cls, values: Sequence[int]) -> "IntMatrix":
        return cls(((v,) for v in values), ncols=1)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.entries) for j in range(self.ncols))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    # algebra

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.entries, self.ncols)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return IntMatrix(
                (tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in self.entries),
                ncols=other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise DimensionError(f"cannot multiply {self.shape} by a vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(((-x for x in row) for row in self.entries), ncols=self.ncols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        return IntMatrix((a + b for a, b in zip(self.entries, other.entries)), ncols=self.ncols + other.ncols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise DimensionError("vstack needs equal column counts")
        return IntMatrix(self.entries + other.entries, ncols=self.ncols)

    def direct_sum(self, other: "IntMatrix") -> "IntMatrix":
        top = [row + (0,) * other.ncols for row in self.entries]
        bottom = [(0,) * self.ncols + row for row in other.entries]
        return IntMatrix(top + bottom, ncols=self.ncols + other.ncols)

    def delete_row(self, i: int) -> "IntMatrix":
        return IntMatrix(self.entries[:i] + self.entries[i + 1:], ncols=self.ncols)

    def delete_column(self, j: int) -> "IntMatrix":
        return IntMatrix((row[:j] + row[j + 1:] for row in self.entries), ncols=self.ncols - 1)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix((tuple(row[j] for j in idx) for row in self.entries), ncols=len(idx))

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix((self.entries[i] for i in idx), ncols=self.ncols)

    # dunder plumbing

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self.entries))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"

    def __str__(self) -> str:
        if not self.nrows or not self.ncols:
            return f"<{self.nrows}x{self.ncols} matrix>"
        width = max(len(str(x)) for row in self.entries for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.entries)


def as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    return IntMatrix(m)


@dataclass(frozen=True)
class HermiteForm:
    h: IntMatrix
    u: IntMatrix
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> IntMatrix:
        """The nonzero columns of ``h``: a basis of the lattice."""
        return self.h.select_columns(range(self.rank))


@dataclass(frozen=True)
class SmithForm:
    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    diag: tuple[int, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf(m) -> HermiteForm:
    """Column Hermite normal form ``h = m @ u`` with ``u`` unimodular."""
    m = as_matrix(m)
    nrows, ncols = m.shape
    # work on columns of h and of u
    hc = [list(c) for c in m.columns()]
    uc = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    pivots: list[int] = []
    k = 0
    for i in range(nrows):
        if k == ncols:
            break
        # gcd-combine row i over columns k.. into column k
        for j in range(k + 1, ncols):
            b = hc[j][i]
            if b == 0:
                continue
            a = hc[k][i]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            ck, cj = hc[k], hc[j]
            hc[k] = [x * s + y * t for s, t in zip(ck, cj)]
            hc[j] = [p * t - q * s for s, t in zip(ck, cj)]
            uk, uj = uc[k], uc[j]
            uc[k] = [x * s + y * t for s, t in zip(uk, uj)]
            uc[j] = [p * t - q * s for s, t in zip(uk, uj)]
        piv = hc[k][i]
        if piv == 0:
            continue
        if piv < 0:
            hc[k] = [-x for x in hc[k]]
            uc[k] = [-x for x in uc[k]]
            piv = -piv
        for j in range(k):
            q = hc[j][i] // piv
            if q:
                hc[j] = [s - q * t for s, t in zip(hc[j], hc[k])]
                uc[j] = [s - q * t for s, t in zip(uc[j], uc[k])]
        pivots.append(i)
        k += 1
    h = IntMatrix.from_columns(hc, nrows)
    u = IntMatrix.from_columns(uc, ncols)
    return HermiteForm(h=h, u=u, pivots=tuple(pivots))


def snf(m) -> SmithForm:
    """Smith normal form ``u @ m @ v == d`` with a divisibility chain on the diagonal."""
    m = as_matrix(m)
    nrows, ncols = m.shape
    a = [list(r) for r in m.entries]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(nrows, ncols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # every remaining entry must be a multiple of the pivot
                bad = next(
                    ((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, nrows) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t + 1, ncols) if a[t][j]]
            _, pi, pj = min(cands)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    diag = tuple(a[i][i] for i in range(min(nrows, ncols)))
    return SmithForm(
        d=IntMatrix(a, ncols=ncols),
        u=IntMatrix(u, ncols=nrows),
        v=IntMatrix(v, ncols=ncols),
        diag=diag,
    )


def det(m) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    m = as_matrix(m)
    n = m.nrows
    if m.ncols != n:
        raise DimensionError(f"determinant of a non-square {m.shape} matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gcd_vec(values: Iterable[int]) -> int:
    """gcd of a list of integers; 0 for the empty or all-zero list."""
    return math.gcd(*values)


def cross_product(m) -> tuple[int, ...]:
    """Generalized cross product of the columns of an ``(r+1) x r`` matrix.

    Component ``j`` (1-based) is ``(-1)**j`` times the minor obtained by
    deleting row ``j``.  The result is orthogonal to every column.
    """
    m = as_matrix(m)
    if m.ncols != m.nrows - 1:
        raise DimensionError(f"cross product needs an (r+1) x r matrix, got {m.shape}")
    return tuple((-1) ** (j + 1) * det(m.delete_row(j)) for j in range(m.nrows))


def _check_vector(basis: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(x) for x in v)
    if len(v) != basis.nrows:
        raise DimensionError(f"vector of length {len(v)} against a lattice in Z^{basis.nrows}")
    return v


def _reduce_exact(form: HermiteForm, v: tuple[int, ...]) -> list[int] | None:
    """Coefficients of ``v`` against the nonzero columns of ``form.h``, or None."""
    h = form.h
    r = list(v)
    coeffs = []
    k = 0
    for i in range(h.nrows):
        if k < form.rank and form.pivots[k] == i:
            p = h[i, k]
            q, rem = divmod(r[i], p)
            if rem:
                return None
            if q:
                for t in range(i, h.nrows):
                    r[t] -= q * h[t, k]
            coeffs.append(q)
            k += 1
        elif r[i]:
            return None
    return coeffs


def lattice_membership(basis, v) -> tuple[int, ...] | None:
    """Integer coefficients ``c`` with ``basis @ c == v``, or None if ``v`` is not in the span."""
    basis = as_matrix(basis)
    v = _check_vector(basis, v)
    form = hnf(basis)
    coeffs = _reduce_exact(form, v)
    if coeffs is None:
        return None
    u = form.u
    return tuple(sum(u[i, k] * coeffs[k] for k in range(len(coeffs))) for i in range(u.nrows))


def lattice_equal(b1, b2) -> bool:
    b1, b2 = as_matrix(b1), as_matrix(b2)
    if b1.nrows != b2.nrows:
        raise DimensionError(f"lattices in Z^{b1.nrows} and Z^{b2.nrows}")
    return hnf(b1).basis() == hnf(b2).basis()


def lattice_basis(m) -> IntMatrix:
    """Canonical (Hermite) basis of the column lattice of ``m``."""
    return hnf(m).basis()


class CosetReducer:
    """Canonical representatives of ``Z^m / L`` for a fixed lattice ``L``.

    Pivot rows are reduced into ``[0, pivot)``; the other coordinates are
    free.  Two vectors reduce to the same tuple iff they differ by a lattice
    vector.
    """

    def __init__(self, basis):
        form = hnf(as_matrix(basis))
        self.dimension = form.h.nrows
        self._steps = [(form.pivots[k], form.h[form.pivots[k], k], form.h.column(k)) for k in range(form.rank)]

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        r = list(v)
        if len(r) != self.dimension:
            raise DimensionError(f"vector of length {len(r)} in Z^{self.dimension}")
        for i, p, col in self._steps:
            q = r[i] // p
            if q:
                for t in range(i, len(r)):
                    r[t] -= q * col[t]
        return tuple(r)


def kernel(m) -> IntMatrix:
    """Basis of the integer kernel ``{x : m @ x == 0}`` (Hermite-reduced)."""
    m = as_matrix(m)
    form = hnf(m)
    cols = [form.u.column(j) for j in range(form.rank, m.ncols)]
    return lattice_basis(IntMatrix.from_columns(cols, m.ncols))


def kernel_mod_lattice(gen_images, relations=None) -> IntMatrix:
    """Basis of ``{x in Z^m : gen_images @ x in span(relations)}``.

    ``gen_images`` is ``k x m``; ``relations`` is ``k x s`` (``None`` or
    ``s == 0`` for a free ambient group).
    """
    g = as_matrix(gen_images)
    if relations is None:
        relations = IntMatrix.zeros(g.nrows, 0)
    rel = as_matrix(relations)
    if rel.nrows != g.nrows:
        raise DimensionError(f"generator images live in Z^{g.nrows}, relations in Z^{rel.nrows}")
    stacked = g.hstack(-rel)
    k = kernel(stacked)
    proj = IntMatrix(k.entries[: g.ncols], ncols=k.ncols)
    return lattice_basis(proj)


def subgroup_index(gen_images, relations=None) -> int | None:
    """Index of the subgroup generated by ``gen_images`` in ``Z^k / span(relations)``.

    Returns None when the index is infinite.
    """
    g = as_matrix(gen_images)
    if relations is None:
        relations = IntMatrix.zeros(g.nrows, 0)
    full = g.hstack(as_matrix(relations))
    diag = snf(full).diag
    if len(diag) < g.nrows or any(d == 0 for d in diag):
        return None
    return math.prod(diag)


def inverse_unimodular(m) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    m = as_matrix(m)
    n = m.nrows
    if m.ncols != n:
        raise DimensionError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.entries)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = []
    for row in a:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return IntMatrix(out, ncols=n)
