"""Dense linear-algebra kernels used by the depth engines.

Everything here is a pure function of its inputs. Matrices are plain
``numpy.ndarray`` objects of dtype float64.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import Infeasible, RankDeficient, SingularCovariance

# singular values below RANK_RTOL * largest count as zero
RANK_RTOL = 1e-10


def _as_cloud(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError(f"expected a 2-D array of points, got shape {pts.shape}")
    return pts


def mean(points):
    """Component-wise arithmetic mean of an ``(n, d)`` point array."""
    pts = _as_cloud(points)
    if pts.shape[0] == 0:
        raise ValueError("cannot take the mean of an empty cloud")
    return pts.mean(axis=0)


def covariance(points):
    """Sample covariance with 1/n normalization (no Bessel correction)."""
    pts = _as_cloud(points)
    n = pts.shape[0]
    if n < 2:
        raise ValueError(f"covariance needs at least 2 points, got {n}")
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / n
    return 0.5 * (cov + cov.T)


@dataclass(frozen=True)
class SpdFactor:
    """Lower-triangular Cholesky factor ``L`` with ``L @ L.T == m``."""

    lower: np.ndarray

    @property
    def dimension(self):
        return self.lower.shape[0]

    def reconstruct(self):
        return self.lower @ self.lower.T

    def solve_lower(self, rhs):
        """Solve ``L y = rhs`` by forward substitution."""
        return solve_triangular(self.lower, rhs, lower=True)

    def mahalanobis(self, delta):
        """Return ``sqrt(delta' m^{-1} delta)``; ``delta`` may be ``(d,)`` or ``(k, d)``."""
        delta = np.asarray(delta, dtype=float)
        if delta.ndim == 1:
            return float(np.linalg.norm(self.solve_lower(delta)))
        return np.linalg.norm(self.solve_lower(delta.T), axis=0)


def spd_factorize(m):
    """Cholesky-factor a symmetric positive definite matrix.

    Raises :class:`SingularCovariance` when ``m`` is not positive definite,
    using the same scale-relative threshold as the rank tests.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if not np.allclose(m, m.T, rtol=1e-12, atol=1e-12 * (1 + np.abs(m).max())):
        raise ValueError("matrix is not symmetric")
    eig = np.linalg.eigvalsh(m)
    if eig[-1] <= 0 or eig[0] <= RANK_RTOL * eig[-1]:
        raise SingularCovariance(
            f"matrix is not positive definite (eigenvalues in [{eig[0]:.3g}, {eig[-1]:.3g}])"
        )
    try:
        lower = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(str(exc)) from exc
    return SpdFactor(lower)


def _row_space(c):
    """SVD of ``c`` with the rank check shared by the two solvers below."""
    c = np.atleast_2d(np.asarray(c, dtype=float))
    u, s, vt = np.linalg.svd(c, full_matrices=True)
    tol = RANK_RTOL * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol)) if s.size and s[0] > 0 else 0
    return c, u, s, vt, rank


def nullspace_basis(c):
    """Orthonormal basis of ``null(c)`` as the columns of an ``(n, k)`` array.

    ``c`` must have full row rank, so ``k = n - rows``. An empty ``(n, 0)``
    array is returned when the null space is trivial.
    """
    c, _, _, vt, rank = _row_space(c)
    rows, n = c.shape
    if rank < rows:
        raise RankDeficient(f"constraint matrix has rank {rank} < {rows} rows")
    return vt[rank:].T.copy()


def min_norm_solution(c, rhs):
    """Minimum Euclidean norm solution of ``c p = rhs``.

    Raises :class:`Infeasible` when ``rhs`` is not in the column space of
    ``c`` (residual above ``1e-9 * (1 + |rhs|)``).
    """
    c, u, s, vt, rank = _row_space(c)
    rhs = np.asarray(rhs, dtype=float).reshape(-1)
    if rhs.shape[0] != c.shape[0]:
        raise ValueError(f"rhs has length {rhs.shape[0]}, expected {c.shape[0]}")
    coef = (u[:, :rank].T @ rhs) / s[:rank]
    p = vt[:rank].T @ coef
    resid = np.linalg.norm(c @ p - rhs)
    if resid > 1e-9 * (1.0 + np.linalg.norm(rhs)):
        raise Infeasible(f"system is inconsistent (residual {resid:.3g})")
    return p


class AffineConstraints:
    """Cached factorization of a full-row-rank constraint matrix ``c``.

    Built once per data cloud, it answers the two questions every query
    asks: a particular (minimum-norm) solution of ``c p = rhs`` and the
    orthogonal projection of a vector onto ``null(c)``. Both cost
    ``O(n * rows)`` after the thin QR done here.
    """

    def __init__(self, c):
        c = np.atleast_2d(np.asarray(c, dtype=float))
        rows, n = c.shape
        if rows > n:
            raise RankDeficient(f"{rows} constraints on only {n} unknowns")
        q, r = np.linalg.qr(c.T)
        diag = np.abs(np.diag(r))
        if diag.size and diag.min() <= RANK_RTOL * np.abs(r).max():
            raise RankDeficient("constraint matrix is rank deficient")
        self.c = c
        self._q = q
        self._r = r

    @property
    def shape(self):
        return self.c.shape

    def particular(self, rhs):
        y = solve_triangular(self._r, np.asarray(rhs, dtype=float), trans="T")
        return self._q @ y

    def project(self, v):
        return v - self._q @ (self._q.T @ v)
