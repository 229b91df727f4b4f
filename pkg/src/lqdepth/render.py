"""Static SVG rendering of a data cloud with its depth contours.

Observations are small hollow circles, the sample mean a large filled
circle, the convex hull a dashed polygon and every contour level one
closed ``<path>``. Coordinates are written with a fixed number of
decimals so identical inputs give byte-identical files.
"""

from xml.sax.saxutils import escape

import numpy as np
from scipy.spatial import ConvexHull

MARGIN = 20


def hull_vertices(points):
    """Convex hull vertices in counter-clockwise order."""
    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    return pts[hull.vertices]


class _Frame:
    """Maps data coordinates onto the canvas with equal axis scaling."""

    def __init__(self, boxes, size):
        lo = np.min([b.min(axis=0) for b in boxes], axis=0)
        hi = np.max([b.max(axis=0) for b in boxes], axis=0)
        span = np.where(hi - lo > 0, hi - lo, 1.0)
        self.scale = (size - 2 * MARGIN) / span.max()
        self.lo = lo
        self.size = size
        self.offset = (size - 2 * MARGIN - span * self.scale) / 2 + MARGIN

    def __call__(self, pts):
        pts = np.atleast_2d(pts)
        xy = (pts - self.lo) * self.scale + self.offset
        xy[:, 1] = self.size - xy[:, 1]
        return xy


def _fmt(v):
    return f"{v:.3f}"


def render_svg(points, polylines, *, mean=None, size=600, show_hull=True, show_mean=True,
               title=None):
    """Return the SVG document as a string."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("only planar clouds can be rendered")
    boxes = [pts] + [np.asarray(p.vertices) for p in polylines]
    frame = _Frame(boxes, size)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>')

    if show_hull:
        hv = frame(hull_vertices(pts))
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in hv)
        out.append(f'<polygon class="hull" points="{coords}" fill="none" stroke="gray" '
                   'stroke-width="1" stroke-dasharray="6,4"/>')

    out.append('<g class="contours" fill="none" stroke="black" stroke-width="1">')
    for poly in polylines:
        xy = frame(poly.vertices)
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in xy) + " Z"
        out.append(f'<path class="contour" data-level="{poly.level:.6g}" '
                   f'data-q="{poly.order}" d="{d}"/>')
    out.append("</g>")

    out.append('<g class="observations" fill="none" stroke="black" stroke-width="0.8">')
    for x, y in frame(pts):
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5"/>')
    out.append("</g>")

    if show_mean:
        centre = pts.mean(axis=0) if mean is None else np.asarray(mean, dtype=float)
        (mx, my), = frame(centre)
        out.append(f'<circle class="mean" cx="{_fmt(mx)}" cy="{_fmt(my)}" r="6" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
