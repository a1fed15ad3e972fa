import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from tensorbarrier.simplex import lp_maximize

F = Fraction


def test_simple_maximum():
    # max x + y st x + y + s = 1 -> 1
    res = lp_maximize([F(1), F(1), F(0)], [[F(1), F(1), F(1)]], [F(1)])
    assert res.status == "optimal"
    assert res.value == 1


def test_exact_fractional_optimum():
    # max 3x + 2y st 2x + y <= 4, x + 3y <= 6 (slacks appended)
    res = lp_maximize(
        [F(3), F(2), F(0), F(0)],
        [[F(2), F(1), F(1), F(0)], [F(1), F(3), F(0), F(1)]],
        [F(4), F(6)],
    )
    assert res.status == "optimal"
    assert res.value == F(34, 5)
    assert (res.x[0], res.x[1]) == (F(6, 5), F(8, 5))


def test_infeasible():
    # x = -1 with x >= 0
    res = lp_maximize([F(1)], [[F(1)]], [F(-1)])
    assert res.status == "infeasible"


def test_unbounded():
    # max x st x - y = 0
    res = lp_maximize([F(1), F(0)], [[F(1), F(-1)]], [F(0)])
    assert res.status == "unbounded"


def test_degenerate_beale_terminates():
    # classic cycling example for naive pivoting; Bland's rule must finish.
    # max 0.75x1 - 150x2 + 0.02x3 - 6x4 with three <= 0 rows and x3 <= 1.
    c = [F(3, 4), F(-150), F(1, 50), F(-6), F(0), F(0), F(0)]
    a = [
        [F(1, 4), F(-60), F(-1, 25), F(9), F(1), F(0), F(0)],
        [F(1, 2), F(-90), F(-1, 50), F(3), F(0), F(1), F(0)],
        [F(0), F(0), F(1), F(0), F(0), F(0), F(1)],
    ]
    b = [F(0), F(0), F(1)]
    res = lp_maximize(c, a, b)
    assert res.status == "optimal"
    assert res.value == F(1, 20)


def test_redundant_rows_are_handled():
    res = lp_maximize(
        [F(1), F(0)],
        [[F(1), F(1)], [F(2), F(2)]],
        [F(1), F(2)],
    )
    assert res.status == "optimal"
    assert res.value == 1


@pytest.mark.parametrize("trial", range(12))
def test_matches_scipy_on_random_problems(trial):
    rng = random.Random(100 + trial)
    n = rng.randint(2, 5)
    m = rng.randint(1, 3)
    # random bounded problem: A x + s = b with b >= 0, max c x
    a_rows = [[F(rng.randint(0, 4)) for _ in range(n)] for _ in range(m)]
    b = [F(rng.randint(1, 8)) for _ in range(m)]
    c = [F(rng.randint(-3, 3)) for _ in range(n)]
    full = [row + [F(1) if j == i else F(0) for j in range(m)] for i, row in enumerate(a_rows)]
    cost = c + [F(0)] * m
    res = lp_maximize(cost, full, b)
    sci = linprog(
        c=[-float(v) for v in c],
        A_ub=np.array([[float(v) for v in row] for row in a_rows]),
        b_ub=[float(v) for v in b],
        bounds=[(0, None)] * n,
        method="highs",
    )
    if res.status == "optimal":
        assert sci.status == 0
        assert abs(float(res.value) + sci.fun) < 1e-8
        for row, rhs in zip(a_rows, b):
            assert sum(v * x for v, x in zip(row, res.x[:n])) <= rhs
    elif res.status == "unbounded":
        assert sci.status == 3
