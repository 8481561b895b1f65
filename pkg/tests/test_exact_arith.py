from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tautangle.exact_arith import (
    LPStatus,
    RatMatrix,
    check_lp_certificate,
    format_rational,
    integer_normalize,
    lp_max_min_slack,
    nullspace,
    rank,
    row_echelon,
    solve_square,
    to_rational,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_to_rational_and_format():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(-2) == Fraction(-2)
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises(ValueError):
        to_rational("x/2")


def test_integer_normalize():
    assert integer_normalize([Fraction(1, 2), Fraction(-1, 3)]) == [3, -2]
    assert integer_normalize([Fraction(-1, 2), Fraction(1, 3)]) == [3, -2]
    assert integer_normalize([Fraction(-1, 2), Fraction(1, 3)], sign="keep") == [-3, 2]
    assert integer_normalize([0, 0]) == [0, 0]


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_plus_nullity(rows):
    M = RatMatrix.from_rows(rows)
    N = nullspace(M)
    assert rank(M) + len(N) == M.cols
    for v in N:
        assert all(x == 0 for x in M.matvec(v))


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_rank_matches_sympy(rows):
    assert rank(RatMatrix.from_rows(rows)) == sympy.Matrix(rows).rank()


def test_rref_shape():
    R, piv = row_echelon(RatMatrix.from_rows([[2, 4, 6], [1, 2, 4]]))
    assert piv == [0, 2]
    assert R[0] == [1, 2, 0] and R[1] == [0, 0, 1]


def test_solve_square_and_singular():
    M = RatMatrix.from_rows([[2, 1], [1, 3]])
    x = solve_square(M, [Fraction(3), Fraction(5)])
    assert M.matvec(x) == [3, 5]
    with pytest.raises(ValueError):
        solve_square(RatMatrix.from_rows([[1, 2], [2, 4]]), [Fraction(1), Fraction(2)])


def test_matrix_ops():
    A = RatMatrix.from_rows([[1, 2], [3, 4]])
    assert (A @ RatMatrix.identity(2)) == A
    assert A.transpose().row(0) == (1, 3)
    assert A.rmatvec([1, 1]) == [4, 6]


def test_lp_simplex_example():
    # x1 + x2 = 1: the smallest coordinate is maximized at x = (1/2, 1/2).
    A = RatMatrix.from_rows([[1, 1]])
    res = lp_max_min_slack(A, [1])
    assert res.status is LPStatus.OPTIMAL
    assert res.objective == Fraction(1, 2)
    assert check_lp_certificate(A, [1], res)


def test_lp_zero_optimum():
    # x1 + x2 = 1 and x2 = 1 force x1 = 0.
    A = RatMatrix.from_rows([[1, 1], [0, 1]])
    res = lp_max_min_slack(A, [1, 1])
    assert res.status is LPStatus.OPTIMAL and res.objective == 0
    assert check_lp_certificate(A, [1, 1], res)


def test_lp_infeasible_ray():
    A = RatMatrix.from_rows([[1, 1]])
    res = lp_max_min_slack(A, [-1])
    assert res.status is LPStatus.INFEASIBLE
    assert check_lp_certificate(A, [-1], res)


def test_lp_redundant_rows():
    A = RatMatrix.from_rows([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    res = lp_max_min_slack(A, [2, 2, 2])
    assert res.status is LPStatus.OPTIMAL and res.objective == 1
    assert check_lp_certificate(A, [2, 2, 2], res)


def test_lp_length_mismatch():
    with pytest.raises(ValueError):
        lp_max_min_slack(RatMatrix.from_rows([[1, 1]]), [1, 2])


def test_lp_random_certificates():
    rng = random.Random(7)
    seen = set()
    for _ in range(150):
        r, c = rng.randint(1, 4), rng.randint(2, 6)
        rows = [[rng.randint(-2, 3) for _ in range(c)] for _ in range(r)]
        b = [rng.randint(-2, 4) for _ in range(r)]
        A = RatMatrix.from_rows(rows)
        res = lp_max_min_slack(A, b)
        seen.add(res.status)
        assert check_lp_certificate(A, b, res), (rows, b, res)
    assert {LPStatus.OPTIMAL, LPStatus.INFEASIBLE} <= seen


def test_lp_matches_scipy_objective():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 3), rng.randint(2, 5)
        rows = [[rng.randint(0, 3) for _ in range(c)] for _ in range(r)]
        b = [rng.randint(1, 4) for _ in range(r)]
        res = lp_max_min_slack(RatMatrix.from_rows(rows), b)
        # Variables x, eps: maximize eps with x_j >= eps, eps >= 0.
        cost = [0.0] * c + [-1.0]
        A_eq = [row + [0] for row in rows]
        A_ub = [[-1.0 if j == i else 0.0 for j in range(c)] + [1.0] for i in range(c)]
        ref = scipy_opt.linprog(cost, A_ub=A_ub, b_ub=[0] * c, A_eq=A_eq, b_eq=b,
                                bounds=[(0, None)] * (c + 1), method="highs")
        if ref.status == 2:
            assert res.status is LPStatus.INFEASIBLE
        else:
            assert res.status is LPStatus.OPTIMAL
            assert abs(float(res.objective) + ref.fun) < 1e-7
