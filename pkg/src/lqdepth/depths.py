"""Zonoid, Mahalanobis and L_q-norm zonoid depths of points w.r.t. a data cloud.

Every depth here has the form ``1 / (1 + s)`` where ``s`` measures how far
the most even admissible weighting of the observations is from the uniform
weights ``(1/n, ..., 1/n)``. Writing ``w_i = n p_i - 1``, the admissible
residuals for a query ``x`` are::

    sum_i w_i = 0,    sum_i w_i (X_i - mean) = n (x - mean)

and ``s_q`` is the power mean ``((1/n) sum |w_i|^q)^(1/q)`` minimized over
them (the max for ``q = inf``). The classical zonoid depth additionally
requires ``p >= 0`` and therefore vanishes outside the convex hull.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import convex, lp
from .exceptions import DepthError, DimensionMismatch, SingularCovariance, SolverFailure
from .linalg import AffineConstraints, covariance, mean, nullspace_basis, spd_factorize

# below this the q-th power objective is too flat for descent; use the q = 1 LP
Q_LINEAR_CUTOFF = 1e-6


class DataCloud:
    """An immutable cloud of ``n`` observations in ``R^d``.

    Construction computes the mean and the 1/n covariance and fails with
    :class:`SingularCovariance` unless the covariance is positive definite
    (which needs ``n >= d + 1``). Factorizations needed by the engines are
    computed lazily and cached.
    """

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValueError(f"expected a non-empty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("data cloud has non-finite coordinates")
        n, d = pts.shape
        if n < d + 1:
            raise SingularCovariance(f"need at least d + 1 = {d + 1} observations, got {n}")
        pts.setflags(write=False)
        self.points = pts
        self.mean = mean(pts)
        self.mean.setflags(write=False)
        self.covariance = covariance(pts)
        self.covariance.setflags(write=False)
        self.cov_factor = spd_factorize(self.covariance)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def __repr__(self):
        return f"DataCloud(n={self.n}, d={self.d})"

    @cached_property
    def constraint_matrix(self):
        """``[A_X; 1_n']``, the ``(d + 1, n)`` matrix defining the weight hyperplane."""
        return np.vstack([self.points.T, np.ones(self.n)])

    @cached_property
    def centered(self):
        return self.points - self.mean

    @cached_property
    def constraints(self):
        # centered rows span the same null space and are better conditioned
        return AffineConstraints(np.vstack([self.centered.T, np.ones(self.n)]))

    @cached_property
    def null_basis(self):
        """Orthonormal ``(n, n - d - 1)`` basis of the null space of the constraints."""
        return nullspace_basis(np.vstack([self.centered.T, np.ones(self.n)]))

    def check_point(self, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.d:
            raise DimensionMismatch(f"query has dimension {x.shape[0]}, cloud has {self.d}")
        if not np.all(np.isfinite(x)):
            raise ValueError("query point has non-finite coordinates")
        return x

    def particular_weights(self, x):
        """Minimum-norm ``p`` with ``sum p = 1`` and ``sum p_i X_i = x``."""
        x = self.check_point(x)
        return self.constraints.particular(np.append(x - self.mean, 1.0))


@dataclass(frozen=True)
class DepthOrder:
    """The exponent ``q`` in ``[1, inf]``; ``DepthOrder("inf")`` is the max-norm."""

    q: float

    def __init__(self, q):
        if isinstance(q, DepthOrder):
            q = q.q
        if isinstance(q, str):
            text = q.strip().lower()
            q = math.inf if text in ("inf", "infinity", "+inf") else float(text)
        q = float(q)
        if math.isnan(q) or q < 1:
            raise ValueError(f"depth order must lie in [1, inf], got {q}")
        object.__setattr__(self, "q", q)

    @property
    def is_infinite(self):
        return math.isinf(self.q)

    def __str__(self):
        return "inf" if self.is_infinite else f"{self.q:g}"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the numerical engines. Defaults are the documented ones."""

    grad_rtol: float = convex.GRAD_RTOL
    max_iter: int = convex.MAX_ITER
    step_floor: float = convex.STEP_FLOOR
    memory: int = convex.MEMORY
    # q = 2 via the Mahalanobis closed form; False routes it through L-BFGS
    q2_closed_form: bool = True
    # "gauge": box-bounded LP with d + 1 rows; "epigraph": one row per observation
    linf_formulation: str = "gauge"
    # "projected": L-BFGS on R^n with a projector; "basis": explicit null-space basis
    convex_route: str = "projected"

    def lbfgs_options(self):
        return dict(grad_rtol=self.grad_rtol, max_iter=self.max_iter,
                    step_floor=self.step_floor, memory=self.memory)


DEFAULT_CONFIG = SolverConfig()


@dataclass
class DepthResult:
    depth: float
    discrepancy: float = None
    weights: np.ndarray = field(default=None, repr=False)


def _result(s, weights=None):
    s = float(s)
    return DepthResult(1.0 / (1.0 + s), s, weights)


def mahalanobis_depth(cloud, x):
    """``1 / (1 + sqrt((x - mean)' S^{-1} (x - mean)))`` with the 1/n covariance ``S``."""
    x = cloud.check_point(x)
    return _result(cloud.cov_factor.mahalanobis(x - cloud.mean))


def in_convex_hull(cloud, x):
    """Whether ``x`` is a convex combination of the observations (LP feasibility)."""
    x = cloud.check_point(x)
    problem = lp.LpProblem(
        np.zeros(cloud.n),
        np.vstack([np.ones(cloud.n), cloud.centered.T]),
        np.append(1.0, x - cloud.mean),
    )
    return lp.solve(problem).optimal


def _solve_or_raise(problem, what):
    sol = lp.solve(problem)
    if not sol.optimal:
        raise SolverFailure(f"{what} LP ended with status {sol.status.value}")
    return sol


def zonoid_depth(cloud, x, *, formulation="gauge"):
    """Classical zonoid depth: ``1 / min max_i n p_i`` over convex weights, 0 off the hull.

    The default ``"gauge"`` formulation substitutes ``a_i = n p_i / t`` and
    maximizes ``sum a_i`` subject to ``sum a_i (X_i - x) = 0``,
    ``0 <= a_i <= 1``, which needs only ``d + 1`` rows. ``"epigraph"``
    solves ``min t`` with ``t >= n p_i`` directly.
    """
    x = cloud.check_point(x)
    if not in_convex_hull(cloud, x):
        return DepthResult(0.0)
    n, d = cloud.n, cloud.d
    if formulation == "gauge":
        a_eq = np.zeros((d + 1, n + 1))
        a_eq[:d, :n] = (cloud.points - x).T
        a_eq[d, :n] = 1.0
        a_eq[d, n] = -1.0
        c = np.zeros(n + 1)
        c[n] = -1.0
        upper = np.append(np.ones(n), np.inf)
        sol = _solve_or_raise(lp.LpProblem(c, a_eq, np.zeros(d + 1), upper=upper), "zonoid")
        mu = sol.x[n]
        if mu <= 0:
            return DepthResult(0.0)
        t = n / mu
        weights = sol.x[:n] / mu
    elif formulation == "epigraph":
        # columns: t, p (n), slack (n); rows: n p_i + s_i - t = 0, sum p = 1, sum p_i X_i = x
        a_eq = np.zeros((n + d + 1, 2 * n + 1))
        a_eq[:n, 0] = -1.0
        a_eq[:n, 1:n + 1] = n * np.eye(n)
        a_eq[:n, n + 1:] = np.eye(n)
        a_eq[n, 1:n + 1] = 1.0
        a_eq[n + 1:, 1:n + 1] = cloud.centered.T
        b = np.concatenate([np.zeros(n), [1.0], x - cloud.mean])
        c = np.zeros(2 * n + 1)
        c[0] = 1.0
        sol = lp.solve(lp.LpProblem(c, a_eq, b))
        if not sol.optimal:
            return DepthResult(0.0)
        t = sol.x[0]
        weights = sol.x[1:n + 1]
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    t = float(t)
    return DepthResult(1.0 / t, t - 1.0, weights)


def _moment_rows(cloud):
    # sum w_i = 0 and sum w_i (X_i - mean); equivalent to the (X_i - x) form given the first row
    return np.vstack([np.ones(cloud.n), cloud.centered.T])


def _l1(cloud, delta):
    n = cloud.n
    rows = _moment_rows(cloud)
    problem = lp.LpProblem(np.ones(2 * n), np.hstack([rows, -rows]), np.append(0.0, n * delta))
    sol = _solve_or_raise(problem, "L1")
    w = sol.x[:n] - sol.x[n:]
    return sol.value / n, w


def _linf(cloud, delta, formulation):
    n = cloud.n
    rows = _moment_rows(cloud)
    b = np.append(0.0, n * delta)
    if formulation == "gauge":
        # largest lam with lam * b = C u, |u_i| <= 1; shift u = a - 1, a in [0, 2]
        a_eq = np.hstack([rows, -b[:, None]])
        c = np.zeros(n + 1)
        c[n] = -1.0
        upper = np.append(np.full(n, 2.0), np.inf)
        sol = lp.solve(lp.LpProblem(c, a_eq, rows.sum(axis=1), upper=upper))
        if sol.status is lp.LpStatus.UNBOUNDED:
            return 0.0, np.zeros(n)
        if not sol.optimal or sol.x[n] <= 0:
            raise SolverFailure(f"L-inf LP ended with status {sol.status.value}")
        lam = sol.x[n]
        return 1.0 / lam, (sol.x[:n] - 1.0) / lam
    if formulation == "epigraph":
        # columns: t, v+ (n), v- (n), slack (n); rows: v+_i + v-_i + s_i - t = 0, then moments
        a_eq = np.zeros((n + rows.shape[0], 3 * n + 1))
        eye = np.eye(n)
        a_eq[:n, 0] = -1.0
        a_eq[:n, 1:n + 1] = eye
        a_eq[:n, n + 1:2 * n + 1] = eye
        a_eq[:n, 2 * n + 1:] = eye
        a_eq[n:, 1:n + 1] = rows
        a_eq[n:, n + 1:2 * n + 1] = -rows
        c = np.zeros(3 * n + 1)
        c[0] = 1.0
        sol = _solve_or_raise(lp.LpProblem(c, a_eq, np.append(np.zeros(n), b)), "L-inf")
        return sol.value, sol.x[1:n + 1] - sol.x[n + 1:2 * n + 1]
    raise ValueError(f"unknown L-inf formulation {formulation!r}")


def _lq_convex(cloud, x, q, config):
    opts = config.lbfgs_options()
    if config.convex_route == "projected":
        p, s, _ = convex.minimize_projected(cloud.particular_weights(x), cloud.constraints.project,
                                            q, **opts)
    elif config.convex_route == "basis":
        prog = convex.NullspaceProgram(cloud.particular_weights(x), cloud.null_basis, q)
        p, s = convex.minimize(prog, **opts)
    else:
        raise ValueError(f"unknown convex route {config.convex_route!r}")
    return s, p


def lq_depth(cloud, x, q, *, config=DEFAULT_CONFIG):
    """L_q-norm zonoid depth ``1 / (1 + S_q)`` for ``q`` in ``[1, inf]``.

    Dispatch: ``q = 1`` and ``q = inf`` solve linear programs, ``q = 2`` uses
    the Mahalanobis closed form (unless disabled in ``config``) and any other
    finite ``q`` runs the null-space L-BFGS engine. The result carries the
    minimizing weights ``p*`` whenever an engine produced them.
    """
    order = DepthOrder(q)
    x = cloud.check_point(x)
    delta = x - cloud.mean
    n = cloud.n
    if not np.any(delta):
        return _result(0.0, np.full(n, 1.0 / n))
    qv = order.q
    if order.is_infinite:
        s, w = _linf(cloud, delta, config.linf_formulation)
        return _result(s, (w + 1.0) / n)
    if qv < 1.0 + Q_LINEAR_CUTOFF:
        s, w = _l1(cloud, delta)
        return _result(s, (w + 1.0) / n)
    if qv == 2.0 and config.q2_closed_form:
        return _result(cloud.cov_factor.mahalanobis(delta), cloud.particular_weights(x))
    s, p = _lq_convex(cloud, x, qv, config)
    return _result(s, p)


def batch_depth(cloud, xs, q, *, config=DEFAULT_CONFIG):
    """:func:`lq_depth` for each row of ``xs``, in order.

    The first failure is re-raised with an ``index`` attribute naming the
    offending row.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return []
    xs = xs.reshape(-1, cloud.d) if xs.ndim < 2 else xs
    results = []
    for i, x in enumerate(xs):
        try:
            results.append(lq_depth(cloud, x, q, config=config))
        except DepthError as exc:
            exc.index = i
            raise
    return results
