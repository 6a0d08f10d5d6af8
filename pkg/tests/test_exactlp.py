from fractions import Fraction

import pytest

from gbdiv.exactlp import (
    LpError,
    LpProblem,
    determinant,
    smith_normal_form,
    solve_lp,
    solve_square,
)

F = Fraction


def test_solve_square_known():
    sol = solve_square([[2, 1], [1, 3]], [5, 10])
    assert sol == [F(1), F(3)]


def test_solve_square_fractional_result():
    sol = solve_square([[2, 0], [0, 4]], [1, 1])
    assert sol == [F(1, 2), F(1, 4)]


def test_solve_square_singular():
    assert solve_square([[1, 2], [2, 4]], [1, 2]) is None
    assert solve_square([[0, 0], [0, 0]], [0, 1]) is None


def test_solve_square_permuted_pivots():
    # zero pivot in the top corner forces a row swap
    sol = solve_square([[0, 1], [1, 0]], [7, -3])
    assert sol == [F(-3), F(7)]


def test_determinant_small():
    assert determinant([[1, 0], [0, 1]]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[2, 1], [1, 2]]) == 3
    assert determinant([[1, 2], [2, 4]]) == 0


def test_determinant_matches_cofactor_expansion():
    m = [[3, -1, 2], [0, 4, 1], [5, 2, -2]]
    expected = (
        3 * (4 * -2 - 1 * 2) - (-1) * (0 * -2 - 1 * 5) + 2 * (0 * 2 - 4 * 5)
    )
    assert determinant(m) == expected


def test_determinant_fractions():
    assert determinant([[F(1, 2), 0], [0, F(2, 3)]]) == F(1, 3)


def test_smith_triangle_reduced_laplacian():
    # invariant factors multiply to the spanning tree count, 3
    assert smith_normal_form([[2, -1], [-1, 2]]) == [1, 3]


def test_smith_diagonal_divisibility():
    factors = smith_normal_form([[2, 0], [0, 3]])
    assert factors == [1, 6]
    factors = smith_normal_form([[4, 0, 0], [0, 6, 0], [0, 0, 10]])
    assert factors == [2, 2, 60]
    for a, b in zip(factors, factors[1:]):
        assert a == 0 or b % a == 0


def test_smith_zero_and_rectangular():
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]
    assert smith_normal_form([[1, 2, 3]]) == [1]
    assert smith_normal_form([[2], [4]]) == [2]


def test_lp_optimal_with_dual():
    # max x + y, x + 2y <= 4, 3x + y <= 6, x,y >= 0
    prob = LpProblem(objective=[1, 1], lower=[0, 0], upper=[None, None])
    prob.add([1, 2], "<=", 4)
    prob.add([3, 1], "<=", 6)
    res = solve_lp(prob)
    assert res.status == "optimal"
    assert res.value == F(14, 5)
    assert res.point == [F(8, 5), F(6, 5)]
    assert res.dual_verified


def test_lp_equality_and_free_variables():
    # max t with x + t = 1 and x - t = 0 (both free): t = 1/2
    prob = LpProblem(objective=[0, 1])
    prob.add([1, 1], "=", 1)
    prob.add([1, -1], "=", 0)
    res = solve_lp(prob)
    assert res.status == "optimal"
    assert res.value == F(1, 2)
    assert res.point == [F(1, 2), F(1, 2)]


def test_lp_infeasible():
    prob = LpProblem(objective=[1], lower=[0], upper=[None])
    prob.add([1], "<=", -1)
    res = solve_lp(prob)
    assert res.status == "infeasible"
    assert res.value is None


def test_lp_unbounded():
    prob = LpProblem(objective=[1], lower=[0], upper=[None])
    prob.add([-1], "<=", 1)
    res = solve_lp(prob)
    assert res.status == "unbounded"


def test_lp_two_sided_bounds():
    prob = LpProblem(objective=[1, -1], lower=[-2, 1], upper=[3, 5])
    prob.add([1, 1], "<=", 100)
    res = solve_lp(prob)
    assert res.status == "optimal"
    assert res.point == [F(3), F(1)]
    assert res.value == F(2)


def test_lp_upper_bound_only():
    prob = LpProblem(objective=[1], lower=[None], upper=[7])
    prob.add([1], ">=", -100)
    res = solve_lp(prob)
    assert res.status == "optimal"
    assert res.value == F(7)


def test_lp_degenerate_rows_no_cycling():
    # Bland's rule must terminate with redundant and degenerate rows
    prob = LpProblem(objective=[1, 1, 1], lower=[0, 0, 0], upper=[None] * 3)
    prob.add([1, 1, 1], "<=", 1)
    prob.add([1, 1, 1], "<=", 1)
    prob.add([1, 0, 0], "<=", 0)
    res = solve_lp(prob)
    assert res.status == "optimal"
    assert res.value == 1


def test_lp_rejects_bad_relation():
    prob = LpProblem(objective=[1])
    with pytest.raises(LpError):
        prob.add([1], "<", 0)
    with pytest.raises(LpError):
        prob.add([1, 2], "<=", 0)


def test_lp_exactness_with_awkward_fractions():
    prob = LpProblem(objective=[F(1, 3), F(1, 7)], lower=[0, 0], upper=[None, None])
    prob.add([F(2, 5), F(3, 11)], "<=", F(1, 13))
    res = solve_lp(prob)
    assert res.status == "optimal"
    # single binding row: optimum at x = (1/13)/(2/5), value (1/3)(5/26)
    assert res.value == F(1, 3) * F(5, 26)
    assert res.dual_verified
