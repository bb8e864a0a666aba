import itertools
import math

import pytest
from hypothesis import given, strategies as st

from abcayley.intlat import IntMatrix, cross_product, kernel_mod_lattice, lattice_equal
from abcayley.sacg import (
    Circulant,
    CubeLike,
    DistanceSet,
    MatrixParseError,
    NotGeneratingError,
    Quotient,
    SACGraph,
    SpecError,
    StepError,
    add_column_multiple,
    block_split,
    canonicalize_vertex,
    check_circulant,
    circulant_to_matrix,
    delete_redundant_column,
    delete_zero_row,
    distance_to_matrix,
    format_matrix,
    from_group_spec,
    has_loops,
    loop_generators,
    matrix_to_circulant,
    matrix_to_distance,
    negate_column,
    negate_rows,
    parse_matrix,
    permute_columns,
    permute_rows,
    same_graph,
    spec_to_json,
)
from strategies import int_matrices

M35 = IntMatrix([[5, 0], [4, 7]])
ZHU_NEG = IntMatrix([[5, 0], [12, -5], [-6, 2]])
ZHU_PRINTED = IntMatrix([[5, 0], [-12, 5], [6, -2]])


def w(n):
    return IntMatrix.column_vector([1] * n)


def two_eye(n):
    return IntMatrix([[2 * (i == j) for j in range(n)] for i in range(n)])


# --- group specs ------------------------------------------------------------


def test_from_group_spec_examples():
    g = from_group_spec(Circulant(35, (6, 10)))
    assert lattice_equal(g.matrix, M35)
    assert g.provenance == Circulant(35, (6, 10))
    assert lattice_equal(from_group_spec(DistanceSet((6, 10, 25))).matrix, ZHU_NEG)
    q3 = CubeLike(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
    assert lattice_equal(from_group_spec(q3).matrix, w(4).hstack(two_eye(4)))


def test_generic_quotient_matches_circulant():
    q = Quotient(IntMatrix([[35]]), IntMatrix([[6, 10]]))
    assert lattice_equal(from_group_spec(q).matrix, M35)


def test_non_generating_reports_index():
    with pytest.raises(NotGeneratingError, match="2"):
        from_group_spec(Circulant(12, (2, 4)))
    with pytest.raises(NotGeneratingError):
        from_group_spec(DistanceSet((4, 6)))
    with pytest.raises(NotGeneratingError):
        from_group_spec(CubeLike(3, ((1, 0, 0), (0, 1, 0))))


@pytest.mark.parametrize("make", [
    lambda: Circulant(5, ()),
    lambda: Circulant(5, (5,)),
    lambda: Circulant(0, (1,)),
    lambda: DistanceSet(()),
    lambda: DistanceSet((3, 3)),
    lambda: DistanceSet((0, 1)),
    lambda: CubeLike(2, ((0, 0),)),
    lambda: CubeLike(2, ((1, 0), (1, 0))),
    lambda: CubeLike(2, ((1, 0, 1),)),
])
def test_invalid_specs(make):
    with pytest.raises(SpecError):
        make()


def test_plus_minus_generators_collapse():
    a = from_group_spec(Circulant(7, (1, 6, 2)))
    b = from_group_spec(Circulant(7, (1, 2)))
    assert a.matrix.nrows == 2 and lattice_equal(a.matrix, b.matrix)


def test_spec_json():
    assert spec_to_json(Circulant(35, (6, 10))) == {"type": "circulant", "n": 35, "connections": [6, 10]}
    assert spec_to_json(CubeLike(2, ((1, 0), (0, 1))))["generators"] == ["10", "01"]


# --- conversions ------------------------------------------------------------


def test_distance_to_matrix_examples():
    assert distance_to_matrix((6, 10, 25)) == IntMatrix([[5, 0], [-3, -5], [0, 2]])
    assert distance_to_matrix((1, 2)) == IntMatrix.column_vector([-2, 1])
    assert distance_to_matrix((3, 5)) == IntMatrix.column_vector([-5, 3])
    for bad in [(2, 4), (0, 3), (-1, 2), (5,)]:
        with pytest.raises(SpecError):
            distance_to_matrix(bad)


def test_circulant_to_matrix_examples():
    m = circulant_to_matrix(35, (6, 10))
    assert m == IntMatrix([[5, 0], [-3, -7]])
    assert lattice_equal(m, M35)
    assert circulant_to_matrix(5, (1,)) == IntMatrix([[5]])
    assert circulant_to_matrix(2, (1,)) == IntMatrix([[2]])
    with pytest.raises(SpecError):
        circulant_to_matrix(12, (2, 4))


def test_matrix_to_distance_examples():
    assert matrix_to_distance(ZHU_PRINTED) == (6, 10, 25)
    assert matrix_to_distance(IntMatrix([[2, 0], [0, 2], [0, 0]])) is None
    assert matrix_to_distance(IntMatrix([[0, 0], [0, 0], [0, 0]])) is None
    assert matrix_to_distance(IntMatrix.column_vector([-5, 3])) == (3, 5)


def test_matrix_to_circulant_examples():
    assert matrix_to_circulant(M35, "last") == (35, (4, 5))
    assert matrix_to_circulant(M35, "first") is None
    assert check_circulant(M35, "first").reason == "gcd(v) = 7"
    assert matrix_to_circulant(IntMatrix([[9]])) == (9, (1,))
    assert check_circulant(IntMatrix([[2, 4], [1, 2]])).reason == "det = 0"


def test_zhu_sign_discrepancy():
    # the printed generators are not in the kernel of (6, 10, 25) ...
    assert IntMatrix([[6, 10, 25]]) @ ZHU_PRINTED != IntMatrix([[0, 0]])
    # ... but they are after negating the last two rows
    assert IntMatrix([[6, -10, -25]]) @ ZHU_PRINTED == IntMatrix([[0, 0]])
    assert lattice_equal(negate_rows(ZHU_PRINTED, [1, 2])[0].matrix, from_group_spec(DistanceSet((6, 10, 25))).matrix)


coprime_sets = st.lists(st.integers(1, 60), min_size=2, max_size=4, unique=True).filter(
    lambda a: math.gcd(*a) == 1)


@given(coprime_sets)
def test_distance_formula_matches_kernel(a):
    # two independent routes to the same lattice
    m = distance_to_matrix(a)
    assert m.shape == (len(a), len(a) - 1)
    assert lattice_equal(m, kernel_mod_lattice(IntMatrix([a])))
    assert tuple(abs(x) for x in cross_product(m)) == tuple(a)


def test_distance_round_trip_small_sets():
    for size in (1, 2, 3):
        for a in itertools.combinations(range(1, 13), size):
            if math.gcd(*a) != 1:
                continue
            g = from_group_spec(DistanceSet(a))
            assert set(matrix_to_distance(g.matrix)) == set(a)


def _unit_maps(n, a, b):
    sa = {x % n for x in a} | {-x % n for x in a}
    sb = {x % n for x in b} | {-x % n for x in b}
    return any(math.gcd(u, n) == 1 and {u * x % n for x in sa} == sb for u in range(1, n))


def test_circulant_round_trip_up_to_units():
    for n in range(3, 31):
        for a, b in itertools.combinations(range(1, n), 2):
            if math.gcd(a, b, n) != 1 or (a + b) % n == 0:
                continue
            m = circulant_to_matrix(n, (a, b))
            assert lattice_equal(m, from_group_spec(Circulant(n, (a, b))).matrix)
            res = matrix_to_circulant(m, "first") or matrix_to_circulant(m, "last")
            assert res is not None, (n, a, b)
            assert res[0] == n
            assert _unit_maps(n, (a, b), res[1]), (n, a, b, res)


# --- structural ops ---------------------------------------------------------


def test_column_ops_reach_the_circulant_matrix():
    g, s1 = negate_column(IntMatrix([[5, 0], [-3, -7]]), 1)
    g, s2 = add_column_multiple(g, 0, 1, 1)
    assert g.matrix == M35
    assert s1.target == s2.source


def test_delete_zero_row_example():
    g, st_ = delete_zero_row(IntMatrix([[3], [0]]), 1)
    assert g.matrix == IntMatrix([[3]])
    assert st_.images is None
    with pytest.raises(StepError):
        delete_zero_row(IntMatrix([[3], [1]]), 1)
    with pytest.raises(StepError):
        delete_zero_row(IntMatrix([[0]]), 0)


def test_delete_redundant_column():
    m = IntMatrix([[5, 0, 5], [4, 7, 11]])
    g, st_ = delete_redundant_column(m, 2)
    assert g.matrix == M35 and st_.param["witness"] == (1, 1)
    with pytest.raises(StepError):
        delete_redundant_column(M35, 0)


def test_block_split_example():
    blocks = block_split(IntMatrix([[2, 0], [0, 3]]))
    assert [b.matrix for b, _, _ in blocks] == [IntMatrix([[2]]), IntMatrix([[3]])]


def test_block_split_zero_rows_and_mixed_order():
    m = IntMatrix([[1, 0, 2], [0, 0, 0], [0, 5, 0], [3, 0, 1]])
    blocks = block_split(m)
    shapes = sorted((rows, cols) for _, rows, cols in blocks)
    assert shapes == [((0, 3), (0, 2)), ((1,), ()), ((2,), (1,))]


def test_row_perm_and_negation_images():
    g, st_ = permute_rows(ZHU_NEG, (2, 0, 1))
    assert st_.images == (3, 1, 2)
    assert g.matrix.row(2) == ZHU_NEG.row(0)
    g, st_ = negate_rows(ZHU_NEG, (1,))
    assert st_.images == (1, -2, 3)


@given(int_matrices(max_rows=3, max_cols=3, min_cols=1), st.data())
def test_column_ops_preserve_lattice(m, data):
    perm = data.draw(st.permutations(range(m.ncols)))
    assert lattice_equal(permute_columns(m, perm)[0].matrix, m)
    j = data.draw(st.integers(0, m.ncols - 1))
    assert lattice_equal(negate_column(m, j)[0].matrix, m)
    if m.ncols > 1:
        i = data.draw(st.integers(0, m.ncols - 1).filter(lambda x: x != j))
        assert lattice_equal(add_column_multiple(m, j, i, data.draw(st.integers(-3, 3)))[0].matrix, m)


@given(int_matrices(max_rows=4, max_cols=3), st.data())
def test_row_ops_track_signed_permutation(m, data):
    perm = data.draw(st.permutations(range(m.nrows)))
    g, st_ = permute_rows(m, perm)
    moved = IntMatrix([m.row(perm.index(i)) for i in range(m.nrows)], ncols=m.ncols)
    assert lattice_equal(g.matrix, moved)
    rows = data.draw(st.sets(st.integers(0, m.nrows - 1)))
    g, st_ = negate_rows(m, rows)
    flipped = IntMatrix([[-x for x in m.row(i)] if i in rows else m.row(i) for i in range(m.nrows)], ncols=m.ncols)
    assert lattice_equal(g.matrix, flipped)


# --- vertices and loops -----------------------------------------------------


def test_has_loops_examples():
    assert has_loops(IntMatrix([[1]]))
    assert not has_loops(M35)
    assert has_loops(IntMatrix.column_vector([1, 0]))
    assert loop_generators(IntMatrix.column_vector([0, 1])) == [1]


def test_canonicalize_examples():
    assert canonicalize_vertex((6, 0), M35) == canonicalize_vertex((1, 3), M35)
    assert canonicalize_vertex((0, 0), M35) == (0, 0)
    assert canonicalize_vertex((5, 4), M35) == (0, 0)
    assert same_graph(SACGraph(M35), SACGraph(IntMatrix([[5, 0], [-3, -7]])))


# --- text format ------------------------------------------------------------


def test_parse_and_format_round_trip():
    text = "# Heuberger circulant\n2 2\n5 0\n\n4 7  # second row\n"
    m = parse_matrix(text)
    assert m == M35
    assert parse_matrix(format_matrix(m)) == m
    assert parse_matrix("2 0\n") == IntMatrix.zeros(2, 0)


@pytest.mark.parametrize("text", ["", "2\n1\n", "2 2\n5 0\n", "1 2\n1 x\n", "1 2\n1 2 3\n", "0 1\n", "1 0\n3\n"])
def test_parse_errors(text):
    with pytest.raises(MatrixParseError):
        parse_matrix(text)
