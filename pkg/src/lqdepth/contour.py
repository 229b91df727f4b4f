"""Boundaries of the trimmed regions ``{x : LD_q(x) >= alpha}`` in the plane.

Depth decreases monotonically along every ray leaving the mean, so each
contour vertex is a one-dimensional root-find along a ray. Two searches are
offered:

``"scaling"`` (default)
    The admissible residuals scale linearly with ``x - mean``, hence
    ``S_q(mean + r u) = r * S_q(mean + u)`` and the boundary radius is
    ``(1/alpha - 1) / S_q(mean + u)``. One engine call per ray, shared by
    every level.

``"bisection"``
    Double ``r`` until the depth drops below ``alpha``, then bisect keeping
    ``[inside, outside]`` as the bracket. Needs no structure beyond ray
    monotonicity.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .depths import DEFAULT_CONFIG, DepthOrder, lq_depth
from .exceptions import DepthError, SolverFailure

MAX_DOUBLINGS = 60
RADIUS_RTOL = 1e-8


@dataclass
class ContourPolyline:
    """Closed polyline (last vertex joins the first) ordered by ray angle."""

    level: float
    order: DepthOrder
    vertices: np.ndarray
    angles: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return self.vertices.shape[0]


def ray_directions(rays):
    angles = 2.0 * np.pi * np.arange(rays) / rays
    return angles, np.column_stack([np.cos(angles), np.sin(angles)])


def _check_level(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"contour level must lie in (0, 1], got {alpha}")
    return alpha


def _unit(u):
    u = np.asarray(u, dtype=float).reshape(-1)
    norm = np.linalg.norm(u)
    if not norm > 0:
        raise ValueError("ray direction must be non-zero")
    return u / norm


def unit_discrepancy(cloud, q, u, *, config=DEFAULT_CONFIG):
    """``S_q(mean + u)``; the ray search divides by this."""
    return lq_depth(cloud, cloud.mean + _unit(u), q, config=config).discrepancy


def ray_boundary_point(cloud, q, alpha, u, *, method="scaling", config=DEFAULT_CONFIG):
    """Point on the ray ``mean + r u`` where the depth equals ``alpha``.

    ``alpha = 1`` returns the mean itself.
    """
    alpha = _check_level(alpha)
    u = _unit(u)
    if u.shape[0] != cloud.d:
        raise ValueError(f"direction has dimension {u.shape[0]}, cloud has {cloud.d}")
    if alpha == 1.0:
        return cloud.mean.copy()
    target = 1.0 / alpha - 1.0
    if method == "scaling":
        s = unit_discrepancy(cloud, q, u, config=config)
        if not s > 0:
            raise SolverFailure("zero discrepancy along a non-zero ray")
        return cloud.mean + (target / s) * u
    if method == "bisection":
        return cloud.mean + _bisect_radius(cloud, q, alpha, u, config) * u
    raise ValueError(f"unknown ray search {method!r}")


def _bisect_radius(cloud, q, alpha, u, config):
    def depth(r):
        return lq_depth(cloud, cloud.mean + r * u, q, config=config).depth

    # start at one standard deviation along u
    hi = math.sqrt(float(u @ cloud.covariance @ u))
    lo = 0.0
    for _ in range(MAX_DOUBLINGS):
        if depth(hi) < alpha:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise SolverFailure(f"depth stayed above {alpha} after {MAX_DOUBLINGS} doublings")
    while hi - lo > RADIUS_RTOL * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if depth(mid) >= alpha:
            lo = mid
        else:
            hi = mid
    return lo


def contour_polyline(cloud, q, alpha, rays=72, *, method="scaling", config=DEFAULT_CONFIG):
    """The ``alpha`` contour sampled on ``rays`` equally spaced directions."""
    return contour_set(cloud, q, [alpha], rays, method=method, config=config)[0]


def contour_set(cloud, q, levels, rays=72, *, method="scaling", config=DEFAULT_CONFIG):
    """Contours for several levels; with ``"scaling"`` each ray is solved once."""
    if cloud.d != 2:
        raise ValueError(f"contours are only traced in the plane, cloud has d = {cloud.d}")
    if rays < 8:
        raise ValueError(f"need at least 8 rays, got {rays}")
    order = DepthOrder(q)
    levels = [_check_level(a) for a in levels]
    angles, dirs = ray_directions(rays)
    unit_s = None
    if method == "scaling" and any(a < 1.0 for a in levels):
        unit_s = np.empty(rays)
        for k, u in enumerate(dirs):
            try:
                unit_s[k] = unit_discrepancy(cloud, order, u, config=config)
            except DepthError as exc:
                exc.angle = angles[k]
                raise
        if np.any(unit_s <= 0):
            raise SolverFailure("zero discrepancy along a non-zero ray")
    out = []
    for alpha in levels:
        if alpha == 1.0:
            out.append(ContourPolyline(alpha, order, cloud.mean[None, :].copy(), np.zeros(1)))
            continue
        if unit_s is not None:
            radii = (1.0 / alpha - 1.0) / unit_s
            verts = cloud.mean + radii[:, None] * dirs
        else:
            verts = np.empty((rays, 2))
            for k, u in enumerate(dirs):
                try:
                    verts[k] = ray_boundary_point(cloud, order, alpha, u, method=method, config=config)
                except DepthError as exc:
                    exc.angle = angles[k]
                    raise
        out.append(ContourPolyline(alpha, order, verts, angles.copy()))
    return out


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def is_convex_polygon(vertices, rtol=1e-9):
    """All turns of the closed polyline share one orientation (collinear allowed)."""
    v = np.asarray(vertices, dtype=float)
    if v.shape[0] < 3:
        return True
    edges = np.roll(v, -1, axis=0) - v
    turns = _cross(edges, np.roll(edges, -1, axis=0))
    lengths = np.linalg.norm(edges, axis=1)
    tol = rtol * lengths * np.roll(lengths, -1)
    return bool(np.all(turns >= -tol) or np.all(turns <= tol))


def inside_convex_polygon(points, vertices, slack=1e-7):
    """Whether every point lies in the convex polygon, up to ``slack`` times its size."""
    v = np.asarray(vertices, dtype=float)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if v.shape[0] < 3:
        raise ValueError("need a polygon with at least 3 vertices")
    edges = np.roll(v, -1, axis=0) - v
    area2 = np.sum(_cross(v, np.roll(v, -1, axis=0)))
    orient = 1.0 if area2 >= 0 else -1.0
    lengths = np.linalg.norm(edges, axis=1)
    keep = lengths > 0
    edges, starts, lengths = edges[keep], v[keep], lengths[keep]
    scale = 1.0 + np.ptp(v, axis=0).max()
    # signed distance of each point to each edge line, positive inside
    rel = pts[:, None, :] - starts[None, :, :]
    dist = orient * _cross(edges[None, :, :], rel) / lengths[None, :]
    return bool(np.all(dist >= -slack * scale))


def check_nested_convex(polylines):
    """Each polyline convex and each higher level inside the previous one."""
    polylines = list(polylines)
    if len(polylines) < 2:
        raise ValueError("need at least two polylines")
    levels = [p.level for p in polylines]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("polylines must have strictly increasing levels")
    for poly in polylines:
        if not is_convex_polygon(poly.vertices):
            return False
    for outer, inner in zip(polylines, polylines[1:]):
        if len(outer) < 3:
            return False
        if not inside_convex_polygon(inner.vertices, outer.vertices):
            return False
    return True
