"""Null-space L-BFGS minimization of ``sum_i |n p_i - 1|^q`` over an affine set.

Feasible weights are written ``p(z) = p_part + B z`` where the columns of
``B`` span the null space of the constraint matrix, so the problem becomes
unconstrained in ``z``. For ``q > 1`` the objective is C^1 everywhere
(but not C^2 when ``q < 2``), which is why a limited-memory quasi-Newton
direction with Armijo backtracking is used rather than Newton steps.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import dtrtrs

from .exceptions import ConvergenceFailure

GRAD_RTOL = 1e-8
STEP_FLOOR = 1e-14
MAX_ITER = 10_000
MEMORY = 10
ARMIJO_C = 1e-4


@dataclass
class NullspaceProgram:
    """``min_z sum |n (p_part + B z)_i - 1|^q`` for a fixed exponent ``q > 1``."""

    p_part: np.ndarray
    basis: np.ndarray
    q: float

    def __post_init__(self):
        self.p_part = np.asarray(self.p_part, dtype=float).reshape(-1)
        n = self.p_part.shape[0]
        self.basis = np.asarray(self.basis, dtype=float).reshape(n, -1)
        if not (np.isfinite(self.q) and self.q > 1):
            raise ValueError(f"exponent must be finite and > 1, got {self.q}")

    @property
    def n(self):
        return self.p_part.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]

    def weights(self, z):
        return self.p_part + self.basis @ np.asarray(z, dtype=float).reshape(-1)


def power_objective(p, q):
    """``sum |n p_i - 1|^q`` and its gradient with respect to ``p``."""
    n = p.shape[0]
    w = n * p - 1.0
    a = np.abs(w)
    aq1 = a ** (q - 1.0)
    f = float(np.dot(aq1, a))
    grad = (q * n) * np.sign(w) * aq1
    return f, grad


def objective_and_gradient(prog, z):
    """Objective value and gradient in ``z`` coordinates."""
    z = np.asarray(z, dtype=float).reshape(-1)
    f, gp = power_objective(prog.weights(z), prog.q)
    return f, prog.basis.T @ gp


def discrepancy(f, n, q):
    """Turn the raw sum into the power-mean distance ``((1/n) f)^(1/q)``."""
    return (max(f, 0.0) / n) ** (1.0 / q)


def lbfgs(fun, x0, *, grad_rtol=GRAD_RTOL, step_floor=STEP_FLOOR, max_iter=MAX_ITER,
          memory=MEMORY):
    """Minimize a smooth convex ``fun(x) -> (f, g)`` from ``x0``.

    Returns ``(x, f, iterations)``. Stops when ``|g| <= grad_rtol * (1 + |f|)``
    or when the Armijo step shrinks below ``step_floor``. Raises
    :class:`ConvergenceFailure` (carrying the best iterate) after
    ``max_iter`` iterations.
    """
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    memo = _Memory(x.shape[0], memory)
    it = 0
    for it in range(1, max_iter + 1):
        gnorm = np.linalg.norm(g)
        if gnorm <= grad_rtol * (1.0 + abs(f)):
            return x, f, it - 1
        d = memo.direction(g)
        slope = float(g @ d) if d is not None else 0.0
        if d is None or slope >= 0:
            # steepest descent, first step of length 1 + |x|
            d = -g * ((1.0 + np.linalg.norm(x)) / gnorm)
            slope = float(g @ d)
            memo.clear()
        step = 1.0
        dnorm = np.linalg.norm(d)
        while True:
            x_new = x + step * d
            f_new, g_new = fun(x_new)
            if f_new <= f + ARMIJO_C * step * slope:
                break
            step *= 0.5
            if step * dnorm < step_floor * (1.0 + np.linalg.norm(x)):
                return x, f, it
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-16 * np.linalg.norm(s) * np.linalg.norm(y):
            memo.push(s, y)
        else:
            memo.clear()
        x, f, g = x_new, f_new, g_new
    exc = ConvergenceFailure(
        f"L-BFGS did not converge in {max_iter} iterations", best_value=f, iterations=it
    )
    exc.best_x = x
    raise exc


class _Memory:
    """Last ``m`` curvature pairs, applied through the compact BFGS form.

    ``H g = gamma g + [S, gamma Y] M [S'g; gamma Y'g]`` with ``M`` built from
    ``R = triu(S'Y)``, ``D = diag(S'Y)`` and ``Y'Y`` (Byrd, Nocedal and
    Schnabel, 1994). It equals the two-loop recursion but costs a few
    ``m x n`` products instead of ``4m`` vector operations.
    """

    def __init__(self, n, m):
        self.s = np.empty((m, n))
        self.y = np.empty((m, n))
        self.m = m
        self.size = 0

    def clear(self):
        self.size = 0

    def push(self, s, y):
        if self.size == self.m:
            self.s[:-1] = self.s[1:]
            self.y[:-1] = self.y[1:]
            self.size -= 1
        self.s[self.size] = s
        self.y[self.size] = y
        self.size += 1

    def direction(self, g):
        k = self.size
        if k == 0:
            return None
        S, Y = self.s[:k], self.y[:k]
        sy = S @ Y.T
        yy = Y @ Y.T
        gamma = sy[-1, -1] / yy[-1, -1]
        r = np.triu(sy) if k > 1 else sy
        a = S @ g
        b = Y @ g
        u = dtrtrs(r, a)[0]
        top = dtrtrs(r, np.diag(sy) * u + gamma * (yy @ u) - gamma * b, trans=1)[0]
        return -(gamma * g + S.T @ top - gamma * (Y.T @ u))


def minimize(prog, **options):
    """Minimize ``prog`` starting from ``z = 0``.

    Returns ``(p_star, s_q)`` with ``s_q = ((1/n) f*)^(1/q)``.
    """
    if prog.k == 0:
        p = prog.p_part.copy()
        f, _ = power_objective(p, prog.q)
        return p, discrepancy(f, prog.n, prog.q)
    try:
        z, f, _ = lbfgs(lambda z: objective_and_gradient(prog, z), np.zeros(prog.k), **options)
    except ConvergenceFailure as exc:
        exc.best_p = prog.weights(exc.best_x)
        raise
    return prog.weights(z), discrepancy(f, prog.n, prog.q)


def minimize_projected(p_part, project, q, **options):
    """Same iteration as :func:`minimize`, run in ``R^n`` with an orthogonal projector.

    ``project(v)`` must be the orthogonal projection onto the null space.
    Because an orthonormal basis is an isometry, iterates coincide with
    those of :func:`minimize` while each step costs ``O(n d)`` instead of
    ``O(n k)``. Returns ``(p_star, s_q, iterations)``.
    """
    p_part = np.asarray(p_part, dtype=float)
    n = p_part.shape[0]

    def fun(u):
        f, gp = power_objective(p_part + u, q)
        return f, project(gp)

    try:
        u, f, it = lbfgs(fun, np.zeros(n), **options)
    except ConvergenceFailure as exc:
        exc.best_p = p_part + exc.best_x
        raise
    return p_part + u, discrepancy(f, n, q), it
