import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from lqdepth import (
    DataCloud,
    DepthOrder,
    SolverConfig,
    batch_depth,
    in_convex_hull,
    lq_depth,
    mahalanobis_depth,
    zonoid_depth,
)
from lqdepth.exceptions import DimensionMismatch, SingularCovariance

ORDERS = [1, 2, 4, 8, math.inf]


def test_cloud_requires_d_plus_one_points():
    with pytest.raises(SingularCovariance):
        DataCloud([[0.0, 1.0], [1.0, 0.0]])


def test_cloud_rejects_collinear():
    with pytest.raises(SingularCovariance):
        DataCloud([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


def test_cloud_rejects_nan():
    with pytest.raises(ValueError):
        DataCloud([[0.0], [np.nan], [1.0]])


def test_cloud_is_read_only(line3):
    with pytest.raises(ValueError):
        line3.points[0, 0] = 5.0
    assert line3.constraint_matrix.shape == (2, 3)


def test_depth_order():
    assert DepthOrder("inf").is_infinite
    assert DepthOrder(" Infinity ").is_infinite
    assert DepthOrder("2.5").q == 2.5
    assert str(DepthOrder(4)) == "4"
    assert DepthOrder(DepthOrder(3)) == DepthOrder(3)
    for bad in (0.5, "nan", -1):
        with pytest.raises(ValueError):
            DepthOrder(bad)


def test_dimension_mismatch(line3):
    with pytest.raises(DimensionMismatch):
        lq_depth(line3, [1.0, 2.0], 2)


# --- worked examples -------------------------------------------------------

def test_mahalanobis_examples(line2, line3):
    assert mahalanobis_depth(line3, [1.0]).depth == 1.0
    assert mahalanobis_depth(line2, [2.0]).depth == pytest.approx(0.25, abs=1e-12)
    assert mahalanobis_depth(line3, [1.5]).depth == pytest.approx(1 / (1 + math.sqrt(0.375)), abs=1e-12)


def test_zonoid_examples(line2, line3):
    assert zonoid_depth(line3, [1.0]).depth == pytest.approx(1.0)
    assert zonoid_depth(line3, [1.5]).depth == pytest.approx(2 / 3, abs=1e-9)
    out = zonoid_depth(line2, [2.0])
    assert out.depth == 0.0 and out.discrepancy is None


@pytest.mark.parametrize("q", [1, 2, 4, 8, 1.5, math.inf])
def test_singleton_hyperplane(line2, q):
    res = lq_depth(line2, [2.0], q)
    assert res.depth == pytest.approx(0.25, abs=1e-9)
    np.testing.assert_allclose(res.weights, [-1.0, 2.0], atol=1e-9)


def test_three_point_examples(line3):
    assert lq_depth(line3, [1.5], 1).depth == pytest.approx(2 / 3, abs=1e-9)
    assert lq_depth(line3, [1.5], "inf").depth == pytest.approx(4 / 7, abs=1e-9)
    assert lq_depth(line3, [1.5], 2).depth == pytest.approx(1 / (1 + math.sqrt(0.375)), abs=1e-9)


def test_three_point_brute_force(line3):
    # feasible weights form the line p = (t - 0.5, 1.5 - 2 t, t); convex in t
    def s_of(t, q):
        w = 3 * np.array([t - 0.5, 1.5 - 2 * t, t]) - 1
        return np.abs(w).max() if q == math.inf else np.mean(np.abs(w) ** q) ** (1 / q)

    grid = np.linspace(-1.0, 2.0, 3001)
    for q in (1.0, 1.5, 3.0, 4.0, 8.0, math.inf):
        t0 = grid[np.argmin([s_of(t, q) for t in grid])]
        best = minimize_scalar(s_of, bounds=(t0 - 1e-3, t0 + 1e-3), args=(q,), method="bounded",
                               options={"xatol": 1e-12})
        assert lq_depth(line3, [1.5], q).discrepancy == pytest.approx(best.fun, abs=1e-6)


@pytest.mark.parametrize("q", ORDERS)
def test_weights_are_feasible(make_cloud, q):
    cloud = make_cloud(5, n=40)
    x = cloud.mean + np.array([0.7, 1.9])
    res = lq_depth(cloud, x, q)
    np.testing.assert_allclose(cloud.constraint_matrix @ res.weights, np.append(x, 1.0), atol=1e-8)
    w = cloud.n * res.weights - 1
    got = np.abs(w).max() if q == math.inf else np.mean(np.abs(w) ** q) ** (1 / q)
    assert got == pytest.approx(res.discrepancy, rel=1e-7)
    assert res.depth == pytest.approx(1 / (1 + res.discrepancy))


# --- dispatch and routes ---------------------------------------------------

def test_q2_engine_route_matches_closed_form(make_cloud):
    cloud = make_cloud(8, n=60)
    x = cloud.mean + np.array([-1.0, 0.5])
    fast = lq_depth(cloud, x, 2)
    slow = lq_depth(cloud, x, 2, config=SolverConfig(q2_closed_form=False))
    assert slow.depth == pytest.approx(fast.depth, abs=1e-9)


@pytest.mark.parametrize("route", ["projected", "basis"])
def test_convex_routes(make_cloud, route):
    cloud = make_cloud(9, n=60)
    x = cloud.mean + np.array([2.0, -0.5])
    ref = lq_depth(cloud, x, 3)
    got = lq_depth(cloud, x, 3, config=SolverConfig(convex_route=route))
    assert got.discrepancy == pytest.approx(ref.discrepancy, rel=1e-9)


def test_linf_formulations_agree(make_cloud):
    cloud = make_cloud(10, n=40)
    for x in (cloud.mean + [0.3, 0.2], cloud.mean + [5.0, -4.0]):
        a = lq_depth(cloud, x, "inf", config=SolverConfig(linf_formulation="gauge"))
        b = lq_depth(cloud, x, "inf", config=SolverConfig(linf_formulation="epigraph"))
        assert a.discrepancy == pytest.approx(b.discrepancy, rel=1e-9)


def test_zonoid_formulations_agree(make_cloud):
    cloud = make_cloud(12, n=40)
    for x in (cloud.mean, cloud.mean + [0.3, 0.2], cloud.points[0] * 0.9 + cloud.mean * 0.1):
        a = zonoid_depth(cloud, x).depth
        b = zonoid_depth(cloud, x, formulation="epigraph").depth
        assert a == pytest.approx(b, abs=1e-9)


def test_near_one_uses_linear_program(make_cloud):
    cloud = make_cloud(4, n=30)
    x = cloud.mean + np.array([1.0, 1.0])
    assert lq_depth(cloud, x, 1 + 1e-7).depth == lq_depth(cloud, x, 1).depth


# --- properties ------------------------------------------------------------

@pytest.mark.parametrize("q", ORDERS)
def test_maximal_at_mean(make_cloud, q):
    cloud = make_cloud(0, n=50)
    res = lq_depth(cloud, cloud.mean, q)
    assert res.depth == 1.0 and res.discrepancy == 0.0


@pytest.mark.parametrize("q", ORDERS)
def test_affine_invariance(make_cloud, q):
    cloud = make_cloud(1, n=40)
    rng = np.random.default_rng(1)
    a = rng.standard_normal((2, 2)) + 2 * np.eye(2)
    b = rng.standard_normal(2) * 10
    moved = DataCloud(cloud.points @ a.T + b)
    for x in cloud.mean + rng.standard_normal((4, 2)) * 2:
        assert lq_depth(moved, a @ x + b, q).depth == pytest.approx(lq_depth(cloud, x, q).depth, abs=1e-7)


@pytest.mark.parametrize("q", ORDERS)
def test_ray_monotone_and_vanishing(make_cloud, q):
    cloud = make_cloud(2, n=40)
    u = np.array([0.6, -0.8])
    depths = [lq_depth(cloud, cloud.mean + r * u, q).depth for r in np.linspace(0, 20, 15)]
    assert all(b <= a + 1e-7 for a, b in zip(depths, depths[1:]))
    assert lq_depth(cloud, cloud.mean + 1e4 * u, q).depth < 0.01


def test_q_monotone_and_sandwich(make_cloud):
    cloud = make_cloud(3, n=50)
    x = cloud.mean + np.array([1.5, -2.0])
    s = {q: lq_depth(cloud, x, q).discrepancy for q in ORDERS}
    assert s[1] <= s[2] + 1e-9 <= s[4] + 2e-9 <= s[8] + 3e-9 <= s[math.inf] + 4e-9
    for q in (1, 2, 4, 8):
        assert s[q] <= s[math.inf] + 1e-7
        assert s[math.inf] <= cloud.n ** (1 / q) * s[q] + 1e-7


def test_outside_hull(make_cloud):
    cloud = make_cloud(6, n=30)
    x = cloud.points.max(axis=0) + 1.0
    assert not in_convex_hull(cloud, x)
    assert zonoid_depth(cloud, x).depth == 0.0
    for q in ORDERS:
        assert lq_depth(cloud, x, q).depth > 0


def test_zonoid_interior_below_one(make_cloud):
    cloud = make_cloud(7, n=30)
    for t in (0.1, 0.5, 0.9):
        x = cloud.mean + t * (cloud.points[0] - cloud.mean)
        d = zonoid_depth(cloud, x).depth
        assert 0 < d < 1


def test_in_convex_hull_examples(line2):
    square = DataCloud([[0, 0], [1, 0], [0, 1], [1, 1]])
    assert in_convex_hull(square, [0.5, 0.5])
    assert in_convex_hull(square, square.mean)
    assert in_convex_hull(square, [1.0, 1.0])
    assert not in_convex_hull(square, [1.01, 0.5])
    assert not in_convex_hull(line2, [2.0])


# --- batch -----------------------------------------------------------------

def test_batch(make_cloud):
    cloud = make_cloud(0, n=20)
    assert batch_depth(cloud, [], 2) == []
    assert batch_depth(cloud, [cloud.mean], 2)[0].depth == 1.0
    x = cloud.mean + 1.0
    a, b = batch_depth(cloud, [x, x], 3)
    assert a.depth == b.depth == lq_depth(cloud, x, 3).depth


def test_batch_reports_index(make_cloud):
    cloud = make_cloud(0, n=20)
    with pytest.raises(Exception) as info:
        batch_depth(cloud, [cloud.mean, cloud.mean + 2.0], 4, config=SolverConfig(max_iter=1))
    assert info.value.index == 1
