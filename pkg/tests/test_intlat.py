import itertools

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from abcayley.intlat import (
    CosetReducer,
    DimensionError,
    IntMatrix,
    cross_product,
    det,
    gcd_vec,
    hnf,
    kernel,
    kernel_mod_lattice,
    lattice_equal,
    lattice_membership,
    snf,
    subgroup_index,
)
from strategies import box, int_matrices, square_matrices

M35 = IntMatrix([[5, 0], [4, 7]])
ZHU = IntMatrix([[5, 0], [12, -5], [-6, 2]])


def is_column_hermite(h: IntMatrix, pivots) -> bool:
    prev = -1
    for j, p in enumerate(pivots):
        if p <= prev or h[p, j] <= 0:
            return False
        if any(h[i, j] for i in range(p)):
            return False
        if any(not 0 <= h[p, k] < h[p, j] for k in range(j)):
            return False
        prev = p
    return all(not any(h.column(j)) for j in range(len(pivots), h.ncols))


# --- examples ---------------------------------------------------------------


def test_hnf_examples():
    assert hnf(M35).h == M35
    eye = IntMatrix.identity(2)
    f = hnf(eye)
    assert f.h == eye and f.u == eye
    z = IntMatrix.zeros(2, 2)
    f = hnf(z)
    assert f.h == z and f.u == eye


def test_snf_examples():
    assert snf(M35).diag == (1, 35)
    assert snf(IntMatrix.identity(3)).diag == (1, 1, 1)
    assert snf(IntMatrix([[2, 0], [0, 2]])).diag == (2, 2)


def test_membership_examples():
    assert lattice_membership(ZHU, (5, -3, 0)) == (1, 3)
    assert lattice_membership(IntMatrix.identity(3), (4, -2, 9)) == (4, -2, 9)
    assert lattice_membership(IntMatrix.column_vector([2, 0]), (1, 0)) is None
    with pytest.raises(DimensionError):
        lattice_membership(M35, (1, 2, 3))


def test_lattice_equal_examples():
    other = IntMatrix([[5, 0], [-3, -5], [0, 2]])
    assert lattice_equal(ZHU, other)
    assert lattice_equal(ZHU, ZHU)
    assert not lattice_equal(IntMatrix([[2, 0], [0, 2]]), IntMatrix.identity(2))
    with pytest.raises(DimensionError):
        lattice_equal(M35, ZHU)


def test_kernel_examples():
    assert lattice_equal(kernel_mod_lattice(IntMatrix([[6, 10, 25]])), ZHU)
    assert lattice_equal(kernel_mod_lattice(IntMatrix([[6, 10]]), IntMatrix([[35]])), M35)
    assert kernel_mod_lattice(IntMatrix([[1]]), IntMatrix([[1]])) == IntMatrix([[1]])


def test_cross_product_examples():
    assert cross_product(IntMatrix([[5, 0], [-12, 5], [6, -2]])) == (6, -10, -25)
    assert cross_product(IntMatrix([[1, 0], [0, 1], [0, 0]])) == (0, 0, -1)
    assert cross_product(IntMatrix.column_vector([1, 1])) == (-1, 1)
    with pytest.raises(DimensionError):
        cross_product(M35)


def test_det_examples():
    assert det(M35) == 35
    assert det(IntMatrix.identity(4)) == 1
    assert det(IntMatrix([[2, 4], [1, 2]])) == 0
    with pytest.raises(DimensionError):
        det(ZHU)


def test_gcd_vec_examples():
    assert gcd_vec((9, 7)) == 1
    assert gcd_vec((3, 3)) == 3
    assert gcd_vec((0, 0)) == 0
    assert gcd_vec(()) == 0


def test_big_entries_stay_exact():
    big = 10**40 + 7
    m = IntMatrix([[big, 3], [2, big]])
    assert det(m) == big * big - 6
    f = snf(m)
    assert f.diag[0] * f.diag[1] == abs(det(m))


def test_subgroup_index():
    assert subgroup_index(IntMatrix([[6, 10]]), IntMatrix([[35]])) == 1
    assert subgroup_index(IntMatrix([[2, 4]]), IntMatrix([[6]])) == 2
    assert subgroup_index(IntMatrix([[2]])) == 2
    assert subgroup_index(IntMatrix([[2, 3]])) == 1
    assert subgroup_index(IntMatrix([[1], [0]])) is None


# --- properties -------------------------------------------------------------


@given(int_matrices())
def test_hnf_transform_and_shape(m):
    f = hnf(m)
    assert m @ f.u == f.h
    assert abs(det(f.u)) == 1
    assert is_column_hermite(f.h, f.pivots)
    assert hnf(f.h).h == f.h


@given(int_matrices(max_rows=3, max_cols=4))
def test_snf_against_sympy(m):
    f = snf(m)
    assert f.u @ m @ f.v == f.d
    assert abs(det(f.u)) == 1 and abs(det(f.v)) == 1
    nz = [d for d in f.diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(d == 0 for d in f.diag[len(nz):])
    if m.ncols:
        ref = smith_normal_form(sympy.Matrix(m.tolist()), domain=sympy.ZZ)
        ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)))
        assert sorted(f.diag) == ref_diag


@given(square_matrices())
def test_det_against_sympy(m):
    assert det(m) == int(sympy.Matrix(m.tolist()).det())
    f = snf(m)
    if det(m):
        prod = 1
        for d in f.diag:
            prod *= d
        assert prod == abs(det(m))


@given(st.integers(1, 4).flatmap(lambda r: int_matrices(min_rows=r + 1, max_rows=r + 1, min_cols=r, max_cols=r)))
def test_cross_product_orthogonal(m):
    v = cross_product(m)
    assert m.T @ v == (0,) * m.ncols


@given(int_matrices(max_rows=3, max_cols=3, min_cols=1), st.data())
def test_lattice_equal_invariant_under_column_ops(m, data):
    cols = m.columns()
    perm = data.draw(st.permutations(range(len(cols))))
    cols = [cols[p] for p in perm]
    j = data.draw(st.integers(0, len(cols) - 1))
    cols[j] = tuple(-x for x in cols[j])
    if len(cols) > 1:
        i = data.draw(st.integers(0, len(cols) - 1).filter(lambda x: x != j))
        a = data.draw(st.integers(-4, 4))
        cols[j] = tuple(x + a * y for x, y in zip(cols[j], cols[i]))
    assert lattice_equal(m, IntMatrix.from_columns(cols, m.nrows))


@given(int_matrices(max_rows=3, max_cols=3))
def test_membership_witness_is_exact(m):
    for v in box(m.nrows, 2):
        c = lattice_membership(m, v)
        if c is not None:
            assert m @ c == tuple(v)


@given(int_matrices(max_rows=2, max_cols=3, lo=-4, hi=4, min_cols=1),
       st.one_of(st.none(), int_matrices(max_rows=2, max_cols=2, lo=-5, hi=5)))
def test_kernel_mod_lattice_by_enumeration(g, rel):
    if rel is not None and rel.nrows != g.nrows:
        rel = None
    h = kernel_mod_lattice(g, rel)
    assert h.nrows == g.ncols
    for x in box(g.ncols, 3):
        image = g @ x
        in_kernel = (lattice_membership(rel, image) is not None) if rel is not None and rel.ncols else not any(image)
        assert (lattice_membership(h, x) is not None) == in_kernel


@given(int_matrices(max_rows=3, max_cols=3))
def test_plain_kernel(m):
    k = kernel(m)
    for col in k.columns():
        assert m @ col == (0,) * m.nrows


@given(int_matrices(max_rows=3, max_cols=3, lo=-5, hi=5))
def test_coset_reducer_is_canonical(m):
    red = CosetReducer(m)
    pts = list(box(m.nrows, 2))
    for u, v in itertools.islice(itertools.combinations(pts, 2), 300):
        diff = tuple(a - b for a, b in zip(u, v))
        same = lattice_membership(m, diff) is not None
        assert (red(u) == red(v)) == same
