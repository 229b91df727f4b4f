"""Dense two-phase simplex for small linear programs.

Problems are stated as::

    minimize    c @ x
    subject to  a_eq @ x == b_eq
                lower <= x <= upper

where each lower bound is finite or ``-inf`` and each upper bound finite or
``+inf``. Internally every variable is mapped to a shifted copy ``y >= 0``
(free variables are split) and the tableau is kept dense. Bounded
variables are handled by the textbook bound-flipping ratio test, so a box
``0 <= x <= u`` costs no extra rows.

Pricing is Dantzig's rule until ``5 * ncols`` degenerate pivots have been
seen, after which Bland's smallest-index rule takes over for good.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import SolverFailure

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-8


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpProblem:
    """A linear program in equality form with simple bounds.

    ``lower`` defaults to zeros and ``upper`` to ``+inf``.
    """

    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        m = self.c.shape[0]
        self.a_eq = np.asarray(self.a_eq, dtype=float)
        if self.a_eq.size == 0:
            self.a_eq = self.a_eq.reshape(0, m)
        self.a_eq = np.atleast_2d(self.a_eq)
        self.b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        self.lower = np.zeros(m) if self.lower is None else np.asarray(self.lower, dtype=float).reshape(-1)
        self.upper = np.full(m, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).reshape(-1)
        r = self.b_eq.shape[0]
        if self.a_eq.shape != (r, m):
            raise ValueError(f"a_eq has shape {self.a_eq.shape}, expected {(r, m)}")
        if self.lower.shape != (m,) or self.upper.shape != (m,):
            raise ValueError("bound vectors must match the number of variables")
        for name, arr in (("c", self.c), ("a_eq", self.a_eq), ("b_eq", self.b_eq)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf) or np.any(np.isnan(self.lower)):
            raise ValueError("invalid variable bounds")
        if np.any(self.lower > self.upper):
            raise ValueError("a lower bound exceeds its upper bound")

    @property
    def n_vars(self):
        return self.c.shape[0]

    @property
    def n_rows(self):
        return self.b_eq.shape[0]


@dataclass
class LpSolution:
    status: LpStatus
    value: float = np.nan
    x: np.ndarray = field(default=None, repr=False)
    iterations: int = 0

    @property
    def optimal(self):
        return self.status is LpStatus.OPTIMAL


class _Unbounded(Exception):
    pass


class _Tableau:
    """Working state of one simplex run; never shared between calls."""

    def __init__(self, t, x, basis, upper, cost, pivot_tol):
        self.t = t  # B^{-1} A, rows x cols
        self.x = x  # current value of every column
        self.basis = basis  # column index basic in each row
        self.upper = upper
        self.at_upper = np.zeros(t.shape[1], dtype=bool)
        self.pivot_tol = pivot_tol
        self.iterations = 0
        self.degenerate = 0
        self.bland = False
        self.set_cost(cost)

    def set_cost(self, cost):
        self.cost = cost
        self.d = cost - cost[self.basis] @ self.t

    def pivot(self, r, j):
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        self.d -= self.d[j] * t[r]
        self.d[j] = 0.0
        self.basis[r] = j

    def _entering(self, allowed):
        d = self.d
        tol = self.pivot_tol
        cand = allowed & (((~self.at_upper) & (d < -tol)) | (self.at_upper & (d > tol)))
        cand[self.basis] = False
        idx = np.flatnonzero(cand)
        if idx.size == 0:
            return None
        if self.bland:
            return int(idx[0])
        return int(idx[np.argmax(np.abs(d[idx]))])

    def step(self, allowed):
        """One pricing + ratio test. Returns False at optimality."""
        j = self._entering(allowed)
        if j is None:
            return False
        sgn = -1.0 if self.at_upper[j] else 1.0
        alpha = sgn * self.t[:, j]
        xb = self.x[self.basis]
        ub = self.upper[self.basis]
        ratios = np.full(alpha.shape, np.inf)
        dec = alpha > self.pivot_tol
        ratios[dec] = np.maximum(xb[dec], 0.0) / alpha[dec]
        inc = (alpha < -self.pivot_tol) & np.isfinite(ub)
        ratios[inc] = np.maximum(ub[inc] - xb[inc], 0.0) / -alpha[inc]
        theta_row = ratios.min() if ratios.size else np.inf
        theta_flip = self.upper[j]
        if not np.isfinite(theta_row) and not np.isfinite(theta_flip):
            raise _Unbounded()
        self.iterations += 1
        if theta_flip <= theta_row:
            self.x[self.basis] = xb - theta_flip * alpha
            self.x[j] = self.upper[j] if sgn > 0 else 0.0
            self.at_upper[j] = sgn > 0
            return True
        theta = theta_row
        ties = np.flatnonzero(ratios <= theta + 1e-12 * (1.0 + theta))
        if self.bland:
            r = int(ties[np.argmin(self.basis[ties])])
        else:
            r = int(ties[np.argmax(np.abs(alpha[ties]))])
        if theta <= 1e-12:
            self.degenerate += 1
            if self.degenerate > 5 * self.t.shape[1]:
                self.bland = True
        leaving = self.basis[r]
        to_upper = alpha[r] < 0
        self.x[self.basis] = xb - theta * alpha
        self.x[j] += sgn * theta
        self.x[leaving] = self.upper[leaving] if to_upper else 0.0
        self.at_upper[leaving] = to_upper
        self.at_upper[j] = False
        self.pivot(r, j)
        return True

    def run(self, allowed, max_iter):
        while self.step(allowed):
            if self.iterations > max_iter:
                raise SolverFailure(f"simplex exceeded {max_iter} iterations")


def _standardize(problem):
    """Map ``lower <= x <= upper`` onto ``y >= 0`` columns.

    Returns ``(a, b, c, ub, back)`` where ``back(y)`` rebuilds ``x``.
    """
    cols, costs, ubs = [], [], []
    recipe = []  # per original variable: (kind, first internal column, offset)
    b = problem.b_eq.copy()
    k = 0
    for j in range(problem.n_vars):
        lo, hi, aj, cj = problem.lower[j], problem.upper[j], problem.a_eq[:, j], problem.c[j]
        if np.isfinite(lo):
            # x = lo + y, 0 <= y <= hi - lo
            b -= aj * lo
            cols.append(aj)
            costs.append(cj)
            ubs.append(hi - lo)
            recipe.append(("shift", k, lo))
            k += 1
        elif np.isfinite(hi):
            # x = hi - y, y >= 0
            b -= aj * hi
            cols.append(-aj)
            costs.append(-cj)
            ubs.append(np.inf)
            recipe.append(("mirror", k, hi))
            k += 1
        else:
            cols.extend([aj, -aj])
            costs.extend([cj, -cj])
            ubs.extend([np.inf, np.inf])
            recipe.append(("split", k, 0.0))
            k += 2
    a = np.column_stack(cols) if cols else np.zeros((problem.n_rows, 0))
    a = a.reshape(problem.n_rows, k)

    def back(y):
        x = np.empty(problem.n_vars)
        for j, (kind, col, off) in enumerate(recipe):
            if kind == "shift":
                x[j] = off + y[col]
            elif kind == "mirror":
                x[j] = off - y[col]
            else:
                x[j] = y[col] - y[col + 1]
        return x

    return a, b, np.asarray(costs, dtype=float), np.asarray(ubs, dtype=float), back


def _crash_basis(a, b, ub):
    """Pick, per row, an existing positive unit column that can be basic."""
    rows, cols = a.shape
    chosen = np.full(rows, -1)
    if cols == 0:
        return chosen
    nz = np.abs(a) > 0
    single = np.flatnonzero(nz.sum(axis=0) == 1)
    for j in single:
        i = int(np.flatnonzero(nz[:, j])[0])
        if chosen[i] >= 0 or a[i, j] <= 0:
            continue
        if b[i] / a[i, j] <= ub[j]:
            chosen[i] = j
    return chosen


def solve(problem, *, pivot_tol=PIVOT_TOL, feas_tol=FEAS_TOL, max_iter=None):
    """Solve ``problem`` and return an :class:`LpSolution`.

    Infeasibility is declared when the phase-one optimum exceeds
    ``feas_tol * (1 + |b|_inf)`` after row equilibration.
    """
    if not isinstance(problem, LpProblem):
        raise TypeError("problem must be an LpProblem")
    a, b, c, ub, back = _standardize(problem)
    rows, cols = a.shape

    # equilibrate rows; drop empty ones
    scale = np.abs(a).max(axis=1) if cols else np.zeros(rows)
    empty = scale == 0
    if np.any(np.abs(b[empty]) > feas_tol * (1.0 + np.abs(problem.b_eq).max(initial=0.0))):
        return LpSolution(LpStatus.INFEASIBLE)
    a = a[~empty] / scale[~empty, None]
    b = b[~empty] / scale[~empty]
    rows = a.shape[0]
    flip = b < 0
    a[flip] *= -1
    b[flip] *= -1
    b_norm = np.abs(b).max(initial=0.0)
    if max_iter is None:
        max_iter = 50 * (rows + cols) + 1000

    crash = _crash_basis(a, b, ub)
    need_art = np.flatnonzero(crash < 0)
    n_art = need_art.size
    art_cols = np.zeros((rows, n_art))
    art_cols[need_art, np.arange(n_art)] = 1.0
    full = np.hstack([a, art_cols])
    basis = crash.copy()
    basis[need_art] = cols + np.arange(n_art)
    diag = full[np.arange(rows), basis]
    t = full / diag[:, None]
    x = np.zeros(cols + n_art)
    x[basis] = b / diag
    upper = np.concatenate([ub, np.full(n_art, np.inf)])

    phase1_cost = np.concatenate([np.zeros(cols), np.ones(n_art)])
    tab = _Tableau(t, x, basis, upper, phase1_cost, pivot_tol)
    allowed = np.ones(cols + n_art, dtype=bool)

    if n_art:
        try:
            tab.run(allowed, max_iter)
        except _Unbounded:  # pragma: no cover - phase one is bounded below by 0
            raise SolverFailure("phase one reported an unbounded ray")
        infeas = tab.x[cols:].sum()
        if infeas > feas_tol * (1.0 + b_norm):
            return LpSolution(LpStatus.INFEASIBLE, iterations=tab.iterations)
        # drive remaining artificials out of the basis; drop redundant rows
        keep = np.ones(rows, dtype=bool)
        for r in range(rows):
            if tab.basis[r] < cols:
                continue
            row = np.abs(tab.t[r, :cols])
            row[tab.basis[tab.basis < cols]] = 0.0
            j = int(np.argmax(row)) if cols else -1
            if cols and row[j] > pivot_tol:
                tab.x[tab.basis[r]] = 0.0
                tab.at_upper[j] = False
                tab.pivot(r, j)
            else:
                keep[r] = False
        tab.t = tab.t[keep][:, :cols].copy()
        tab.basis = tab.basis[keep].copy()
        tab.x = tab.x[:cols].copy()
        tab.upper = tab.upper[:cols]
        tab.at_upper = tab.at_upper[:cols].copy()
        a, b = a[keep], b[keep]
        allowed = np.ones(cols, dtype=bool)

    tab.set_cost(c)
    tab.degenerate = 0
    try:
        tab.run(allowed, max_iter)
    except _Unbounded:
        return LpSolution(LpStatus.UNBOUNDED, value=-np.inf, iterations=tab.iterations)

    y = _polish(a, b, tab)
    xs = back(y)
    return LpSolution(LpStatus.OPTIMAL, float(problem.c @ xs), xs, tab.iterations)


def _polish(a, b, tab):
    """Recompute basic values from the original rows to shed pivot drift."""
    y = tab.x.copy()
    if tab.basis.size == 0:
        return y
    nonbasic = np.ones(y.shape[0], dtype=bool)
    nonbasic[tab.basis] = False
    rhs = b - a[:, nonbasic] @ y[nonbasic]
    try:
        yb = np.linalg.solve(a[:, tab.basis], rhs)
    except np.linalg.LinAlgError:
        return y
    if np.all(yb >= -FEAS_TOL) and np.all(yb <= tab.upper[tab.basis] + FEAS_TOL):
        y[tab.basis] = np.clip(yb, 0.0, tab.upper[tab.basis])
    return y
