import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from lqdepth.lp import LpProblem, LpStatus, solve


def test_simple_optimum():
    sol = solve(LpProblem([1.0, 0.0], [[1.0, 1.0]], [1.0]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.value == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(sol.x, [0.0, 1.0], atol=1e-12)


def test_infeasible():
    sol = solve(LpProblem([0.0], [[1.0]], [-1.0]))
    assert sol.status is LpStatus.INFEASIBLE
    assert not sol.optimal


def test_unbounded():
    sol = solve(LpProblem([-1.0, 0.0], [[1.0, -1.0]], [0.0]))
    assert sol.status is LpStatus.UNBOUNDED


def test_box_bounds():
    # min -x1 - x2 with x1 + 2 x2 + s = 4 (s >= 0), 0 <= x <= (2, 1)
    sol = solve(LpProblem([-1.0, -1.0, 0.0], [[1.0, 2.0, 1.0]], [4.0],
                          upper=[2.0, 1.0, np.inf]))
    assert sol.optimal
    assert sol.value == pytest.approx(-3.0)


def test_free_variable():
    # min x1 - x2, x1 free, x1 + x2 = 1, x2 <= 3
    sol = solve(LpProblem([1.0, -1.0], [[1.0, 1.0]], [1.0], lower=[-np.inf, 0.0],
                          upper=[np.inf, 3.0]))
    assert sol.optimal
    assert sol.value == pytest.approx(-5.0)
    np.testing.assert_allclose(sol.x, [-2.0, 3.0])


def test_bad_shapes():
    with pytest.raises(ValueError):
        LpProblem([1.0, 2.0], [[1.0, 2.0, 3.0]], [1.0])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[1.0]], [np.nan])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[1.0]], [1.0], lower=[2.0], upper=[1.0])


def test_degenerate_problem_terminates():
    # classic cycling example (Beale) in equality form with slacks
    c = [-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0]
    a = [
        [0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
        [0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
    ]
    sol = solve(LpProblem(c, a, [0.0, 0.0, 1.0]))
    assert sol.optimal
    assert sol.value == pytest.approx(-0.05)


def _random_feasible(seed, rows=4, cols=9):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((rows, cols))
    x0 = rng.uniform(0.1, 2.0, cols)
    b = a @ x0
    c = rng.uniform(0.1, 1.0, cols) + np.abs(rng.standard_normal(cols))
    return c, a, b


@pytest.mark.parametrize("seed", range(20))
def test_matches_reference_and_is_feasible(seed):
    c, a, b = _random_feasible(seed)
    sol = solve(LpProblem(c, a, b))
    ref = linprog(c, A_eq=a, b_eq=b, bounds=(0, None), method="highs")
    assert sol.optimal and ref.status == 0
    assert sol.value == pytest.approx(ref.fun, rel=1e-8, abs=1e-8)
    assert np.abs(a @ sol.x - b).max() <= 1e-8 * (1 + np.abs(b).max())
    assert sol.x.min() >= -1e-8
    assert sol.value == pytest.approx(c @ sol.x, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), perm_seed=st.integers(0, 2**32 - 1))
def test_permutation_invariance(seed, perm_seed):
    c, a, b = _random_feasible(seed)
    base = solve(LpProblem(c, a, b))
    rng = np.random.default_rng(perm_seed)
    rp = rng.permutation(a.shape[0])
    cp = rng.permutation(a.shape[1])
    perm = solve(LpProblem(c[cp], a[rp][:, cp], b[rp]))
    assert base.optimal and perm.optimal
    assert perm.value == pytest.approx(base.value, abs=1e-8 * (1 + abs(base.value)))


def test_deterministic():
    c, a, b = _random_feasible(3)
    first = solve(LpProblem(c, a, b))
    second = solve(LpProblem(c, a, b))
    assert first.status is second.status
    assert first.value == second.value
    np.testing.assert_array_equal(first.x, second.x)
