import pytest

from hilbzeta.errors import BudgetError
from hilbzeta.fields import make_field
from hilbzeta.ideal_enum import (
    children,
    count_colength_ideals,
    full_algebra_rows,
    local_series,
    naive_count,
)
from hilbzeta.local_algebra import build_truncated

SMOOTH = {(0, 1): 1, (2, 0): -1}
CUSP = {(0, 2): 1, (3, 0): -1}
NODE = {(1, 1): 1}
NODE_NONSPLIT = {(0, 2): 1, (2, 0): 1, (3, 0): -1}  # y^2 + x^2 - x^3 over F_3
TACNODE = {(0, 2): 1, (4, 0): -1}
A4 = {(0, 2): 1, (5, 0): -1}  # y^2 - x^5


def alg(d, p, N, k=1):
    field = make_field(p, k)
    return build_truncated({key: field.element(c) for key, c in d.items()}, field, N)


def test_children_of_unit_ideal_is_maximal_ideal():
    A = alg(CUSP, 3, 4)
    kids = children(A, full_algebra_rows(A))
    assert len(kids) == 1
    assert kids[0] == A.maximal_ideal_rows()


def test_children_of_maximal_ideal_cusp():
    # lines of m/m^2: q + 1 of them
    A = alg(CUSP, 3, 4)
    m = A.maximal_ideal_rows()
    assert len(children(A, m)) == 4


def test_children_chain_smooth():
    A = alg(SMOOTH, 3, 6)
    level = [full_algebra_rows(A)]
    for _ in range(5):
        kids = children(A, level[-1])
        assert len(kids) == 1
        level.append(kids[0])


def test_smooth_counts_all_one():
    A = alg(SMOOTH, 3, 6)
    assert count_colength_ideals(A, 6).counts == [1] * 7


@pytest.mark.parametrize("p,expected_c2,expected_c3", [(2, 3, 5), (3, 4, 7)])
def test_node_counts(p, expected_c2, expected_c3):
    A = alg(NODE, p, 5)
    res = count_colength_ideals(A, 3)
    assert res.counts[2] == expected_c2  # q + 1
    assert res.counts[3] == expected_c3  # 2q + 1


@pytest.mark.parametrize("p", [2, 3])
def test_cusp_counts(p):
    A = alg(CUSP, p, 5)
    res = count_colength_ideals(A, 3)
    assert res.counts[2] == p + 1
    assert res.counts[3] == p + 1


def test_c0_c1_always_one():
    for d in (SMOOTH, CUSP, NODE, TACNODE, A4):
        A = alg(d, 3, 5)
        counts = count_colength_ideals(A, 2).counts
        assert counts[0] == 1 and counts[1] == 1


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("d", [CUSP, NODE, TACNODE, A4])
@pytest.mark.parametrize("n", [2, 3])
def test_oracle_equivalence(p, d, n):
    A = alg(d, p, 6)
    frontier = count_colength_ideals(A, n).counts[n]
    A_n = alg(d, p, n)
    assert naive_count(A_n, n) == frontier


def test_oracle_equivalence_nonsplit_node():
    for n in (2, 3):
        frontier = count_colength_ideals(alg(NODE_NONSPLIT, 3, 6), n).counts[n]
        assert naive_count(alg(NODE_NONSPLIT, 3, n), n) == frontier


def test_oracle_trivial_cases():
    A = alg(NODE, 3, 3)
    assert naive_count(A, 0) == 1
    assert naive_count(alg(NODE, 3, 1), 1) == 1


def test_nonsplit_node_counts():
    # fixed points of the branch-swapping Frobenius: series (1+t+3t^2)/(1-t^2)
    A = alg(NODE_NONSPLIT, 3, 6)
    assert count_colength_ideals(A, 6).counts == [1, 1, 4, 1, 4, 1, 4]


def test_truncation_independence():
    for d in (CUSP, NODE, TACNODE):
        base = count_colength_ideals(alg(d, 3, 5), 5).counts
        deeper = count_colength_ideals(alg(d, 3, 7), 5).counts
        assert base == deeper


def test_worker_count_invariance():
    A = alg(TACNODE, 3, 6)
    serial = count_colength_ideals(A, 6, workers=1).counts
    parallel = count_colength_ideals(A, 6, workers=3).counts
    assert serial == parallel


def test_local_series_cusp_f3():
    A = alg(CUSP, 3, 4)
    series = local_series(A, 4)
    assert series.integer_coeffs() == [1, 1, 4, 4, 4]


def test_local_series_node_f3():
    from hilbzeta.series import TruncatedSeries

    A = alg(NODE, 3, 6)
    series = local_series(A, 6)
    # (1-t)^2 * series = 1 - t + 3t^2
    num = series * TruncatedSeries([1, -2, 1], 7)
    assert num.integer_coeffs() == [1, -1, 3, 0, 0, 0, 0]


def test_frontier_budget():
    A = alg(TACNODE, 3, 6)
    res = count_colength_ideals(A, 6, frontier_budget=2)
    assert not res.complete
    with pytest.raises(BudgetError):
        local_series(A, 6, frontier_budget=2)


def test_naive_budget():
    A = alg(TACNODE, 3, 6)
    with pytest.raises(BudgetError):
        naive_count(A, 6)


def test_enumeration_over_extension_field():
    # node split over F_9: c_2 = 10, c_3 = 19
    A = alg(NODE, 3, 4, k=2)
    counts = count_colength_ideals(A, 3).counts
    assert counts == [1, 1, 10, 19]
