import json

import pytest
from hypothesis import assume, given, settings, strategies as st

from abcayley import oracle
from abcayley.homo import (
    HomChain,
    apply_step,
    bipartite_test,
    chain_from_json,
    check_chain,
    check_step,
    chi_upper_pipeline,
    compose_images,
    gcd3_bound,
    make_step,
    minpoly_band_matrix,
    minpoly_three_colorable,
    poly_at,
    sign_search_bound,
    tomato_cage,
    validate_generator_map,
)
from abcayley.intlat import IntMatrix
from abcayley.sacg import Step, StepError
from strategies import full_rank_matrices, int_matrices

M35 = IntMatrix([[5, 0], [4, 7]])
UNIT = IntMatrix([[4, 0], [-5, 4], [4, -5], [0, 4]])


def qnd(n):
    m = n + 1
    return IntMatrix.column_vector([1] * m).hstack(IntMatrix([[2 * (i == j) for j in range(m)] for i in range(m)]))


# --- steps ------------------------------------------------------------------


def test_apply_step_examples():
    st_ = make_step(M35, "collapse_top_rows")
    assert st_.target == IntMatrix([[9, 7]])
    assert st_.images == (1, 1)
    assert apply_step(M35, st_) == IntMatrix([[9, 7]])
    assert make_step(IntMatrix.column_vector([4, 2]), "column_reduce", col=0, factor=2).target == IntMatrix.column_vector([2, 1])
    assert make_step(IntMatrix([[3]]), "append_zero_row").target == IntMatrix([[3], [0]])
    assert make_step(IntMatrix([[3]]), "append_column", column=(5,)).target == IntMatrix([[3, 5]])


@pytest.mark.parametrize("kind,params", [
    ("column_reduce", {"col": 0, "factor": 3}),
    ("column_reduce", {"col": 5, "factor": 1}),
    ("collapse_top_rows", {}),
    ("append_column", {"column": (1, 2)}),
    ("no_such_step", {}),
])
def test_inapplicable_steps(kind, params):
    with pytest.raises(StepError):
        make_step(IntMatrix([[4]]), kind, **params)


def test_validate_generator_map_examples():
    assert validate_generator_map(qnd(3), qnd(3), (1, 2, 3, 4))
    assert validate_generator_map(M35, IntMatrix([[9, 7]]), (1, 1))
    assert not validate_generator_map(IntMatrix([[2]]), IntMatrix([[3]]), (1,))
    with pytest.raises(ValueError):
        validate_generator_map(M35, IntMatrix([[9, 7]]), (1,))
    with pytest.raises(IndexError):
        validate_generator_map(M35, IntMatrix([[9, 7]]), (1, 2))


def test_compose_images():
    assert compose_images((1, -2), (-3, 1)) == (-3, -1)


def test_chain_must_compose():
    a = make_step(M35, "collapse_top_rows")
    b = make_step(IntMatrix([[3]]), "append_zero_row")
    with pytest.raises(StepError):
        HomChain([a, b])
    chain = HomChain([a])
    with pytest.raises(StepError):
        chain.append(b)


def test_corrupted_step_is_rejected():
    good = make_step(M35, "collapse_top_rows")
    assert check_step(good)
    wrong_target = Step(good.kind, good.params, good.source, IntMatrix([[9, 8]]), good.images)
    assert not check_step(wrong_target)
    bad_map = Step("generator_map", (("images", (1, 1)), ("target", IntMatrix([[3, 6]]))), M35, IntMatrix([[3, 6]]), (1, 1))
    assert not check_step(bad_map)


def test_chain_json_round_trip():
    report = chi_upper_pipeline(UNIT)
    chain = report.upper.chain
    doc = json.dumps(chain.to_json(), sort_keys=True)
    again = chain_from_json(doc)
    assert [s.target for s in again.steps] == [s.target for s in chain.steps]
    assert check_chain(again)
    assert json.dumps(again.to_json(), sort_keys=True) == doc


# --- lemma certificates -----------------------------------------------------


def test_bipartite_examples():
    v = bipartite_test(M35)
    assert not v.bipartite and v.column_sums == (9, 7) and v.odd_column == 0
    v = bipartite_test(IntMatrix([[2]]))
    assert v.bipartite and v.chain.steps == []  # already the 2-cycle
    v = bipartite_test(IntMatrix([[1, 2], [-1, -2]]))
    assert v.bipartite and v.chain.target == IntMatrix([[0]])
    assert check_chain(v.chain)


def test_gcd3_examples():
    b = gcd3_bound(UNIT)
    assert b.value == 3 and b.chain.target == IntMatrix([[3]])
    assert check_chain(b.chain)
    assert gcd3_bound(M35) is None
    assert gcd3_bound(IntMatrix([[1, 2], [-1, -2]])) is None


def test_sign_search_examples():
    b = sign_search_bound(UNIT)
    assert b.value == 3 and b.witness["signs"] == [1, 1, 1, 1] and b.witness["gcd"] == 3
    assert check_chain(b.chain)
    alt = sign_search_bound(UNIT, budget=None)
    assert alt.chain.target in (IntMatrix([[3]]), IntMatrix([[13]]))
    assert sign_search_bound(IntMatrix([[9, 7]])) is None


def test_alternating_signs_reach_p_minus_one():
    from abcayley.homo import row_collapse_chain

    chain, row = row_collapse_chain(UNIT, (1, -1, 1, -1))
    assert set(abs(x) for x in row.row(0)) == {13}
    assert check_chain(chain)


def test_tomato_examples():
    t = tomato_cage(IntMatrix.column_vector([2, 3]))
    assert t.verdict == "3" and t.chi == 3 and t.chain.target == IntMatrix([[5]])
    assert tomato_cage(IntMatrix.column_vector([3, 5])).verdict == "2"
    assert tomato_cage(IntMatrix.column_vector([0, 1])).verdict == "loops"
    assert tomato_cage(IntMatrix.column_vector([0, -1, 0])).chi is None
    with pytest.raises(ValueError):
        tomato_cage(M35)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5))
def test_tomato_agrees_with_bipartite_test(y):
    m = IntMatrix.column_vector(y)
    t = tomato_cage(m)
    if t.verdict != "loops":
        assert (t.verdict == "2") == bipartite_test(m).bipartite
        if t.chain is not None:
            assert check_chain(t.chain)


# --- pipeline ---------------------------------------------------------------


def test_pipeline_examples():
    r = chi_upper_pipeline(UNIT)
    assert r.exact and r.value == 3 and r.lower.value == 3
    assert check_chain(r.upper.chain)
    r = chi_upper_pipeline(IntMatrix([[5]]))
    assert r.exact and r.value == 3
    r = chi_upper_pipeline(IntMatrix.zeros(3, 0))
    assert r.exact and r.value == 2
    r = chi_upper_pipeline(IntMatrix([[1]]))
    assert r.loops and r.lower is None
    r = chi_upper_pipeline(M35)
    assert r.lower.value == 3 and r.upper is None and not r.exact


def test_pipeline_blocks_take_maximum():
    m = IntMatrix([[2, 0], [0, 5]])  # 2-cycle (+) 5-cycle
    r = chi_upper_pipeline(m)
    assert r.exact and r.value == 3


def test_pipeline_strips_zero_rows():
    r = chi_upper_pipeline(IntMatrix([[5], [0], [0]]))
    assert r.exact and r.value == 3
    assert check_chain(r.upper.chain)
    assert r.upper.chain.steps[0].kind == "delete_zero_row"


def test_lower_exceeding_upper_is_refused():
    from abcayley.homo import Bound, ChiReport

    with pytest.raises(ValueError):
        ChiReport(Bound(4, "x"), Bound(3, "y"))


@settings(max_examples=60)
@given(full_rank_matrices(max_dim=3, max_order=300))
def test_pipeline_sound_against_oracle(m):
    r = chi_upper_pipeline(m)
    g = oracle.materialize_finite(m)
    if r.loops:
        assert g.has_loops
        return
    chi = oracle.chromatic_number(g).value
    assert r.lower.value <= chi
    if r.upper is not None:
        assert chi <= r.upper.value
        assert check_chain(r.upper.chain)
    assert bipartite_test(m).bipartite == oracle.is_bipartite_concrete(g)


@given(int_matrices(max_rows=4, max_cols=3, lo=-4, hi=4))
def test_every_certificate_chain_checks(m):
    r = chi_upper_pipeline(m)
    for b in (r.lower, r.upper):
        if b is not None and b.chain is not None:
            assert check_chain(b.chain)
            if b.chain.steps:
                assert b.chain.source == m


# --- minimal polynomial -----------------------------------------------------


def test_minpoly_examples():
    assert minpoly_band_matrix((4, -5, 4), 2) == UNIT
    band = minpoly_band_matrix((1, 0, 1), 3)
    assert band.shape == (5, 3) and band.column_sums() == (2, 2, 2)
    assert minpoly_band_matrix((1, 1), 1) == IntMatrix.column_vector([1, 1])
    assert (poly_at((4, -5, 4), 1), poly_at((4, -5, 4), -1)) == (3, 13)
    assert minpoly_three_colorable((4, -5, 4))
    assert not minpoly_three_colorable((-1, -1, 1))
    assert minpoly_three_colorable((1, 0, 1))
    for bad in [(), (3,), (1, 0)]:
        with pytest.raises(ValueError):
            minpoly_band_matrix(bad, 2)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4).filter(lambda c: c[-1] != 0 and abs(sum(c)) > 1),
       st.integers(1, 6))
def test_band_matrices_get_three(coeffs, cols):
    m = minpoly_band_matrix(coeffs, cols)
    r = chi_upper_pipeline(m)
    assume(not r.loops)
    assert r.upper is not None and r.upper.value <= 3
