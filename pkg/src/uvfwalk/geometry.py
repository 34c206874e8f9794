"""Planar primitives: points, polylines, nearest-element queries and the
pad-then-resize coordinate map used when images are squared off.

Coordinates follow image convention throughout the package: ``x`` is the
column axis (rightward), ``y`` is the row axis (downward), and the cell at
row ``i``, column ``j`` has its center at ``(x=j, y=i)``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument

OSIJ_MIN_VERTICES = 2
OSIJ_MAX_VERTICES = 21


class Point2(NamedTuple):
    x: float
    y: float


class NearestVertex(NamedTuple):
    index: int
    distance: float


class NearestPoint(NamedTuple):
    foot: Point2
    segment: int
    distance: float


@dataclass(frozen=True, eq=False)
class Polyline:
    """Ordered 2D vertices, optionally closed (the closing segment is implicit).

    ``vertices`` is stored as a read-only ``(n, 2)`` float array of ``(x, y)``.
    """

    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidArgument(f"vertices must have shape (n, 2), got {v.shape}")
        if len(v) < 2:
            raise InvalidArgument("a polyline needs at least 2 vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidArgument("vertex coordinates must be finite")
        if np.any(np.all(v[1:] == v[:-1], axis=1)):
            raise InvalidArgument("consecutive vertices must be distinct")
        if self.closed and np.all(v[0] == v[-1]):
            raise InvalidArgument("closed polyline must not repeat its first vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "closed", bool(self.closed))

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polyline):
            return NotImplemented
        return self.closed == other.closed and np.array_equal(self.vertices, other.vertices)

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Polyline({len(self)} vertices, {kind})"

    @property
    def start(self):
        return Point2(*self.vertices[0])

    @property
    def end(self):
        return Point2(*self.vertices[-1])

    def segments(self):
        """Return ``(starts, ends)`` arrays, including the closing segment when closed."""
        v = self.vertices
        if self.closed:
            return v, np.roll(v, -1, axis=0)
        return v[:-1], v[1:]

    def segment_lengths(self):
        a, b = self.segments()
        return np.hypot(*(b - a).T)

    def length(self):
        return float(self.segment_lengths().sum())

    def translated(self, dx, dy):
        return Polyline(self.vertices + [dx, dy], self.closed)

    def check_annotation(self):
        """Raise unless the vertex count is in the range seen in real SIJ annotations."""
        if not OSIJ_MIN_VERTICES <= len(self) <= OSIJ_MAX_VERTICES:
            raise InvalidArgument(
                f"annotation has {len(self)} vertices, "
                f"expected {OSIJ_MIN_VERTICES}..{OSIJ_MAX_VERTICES}")


def as_polyline(obj, closed=False):
    """Accept a Polyline or an ``(n, 2)`` array-like."""
    if isinstance(obj, Polyline):
        return obj
    return Polyline(obj, closed)


def project_onto_segments(points, starts, ends):
    """Project every point onto every segment.

    Returns ``(feet, dist)`` with shapes ``(m, s, 2)`` and ``(m, s)``.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 1, 2)
    d = ends - starts
    w = points - starts
    t = (w * d).sum(-1) / (d * d).sum(-1)
    t = np.clip(t, 0.0, 1.0)
    feet = starts + t[..., None] * d
    diff = points - feet
    return feet, np.hypot(diff[..., 0], diff[..., 1])


def distances_to_polyline(poly, points):
    """Distance from each of ``points`` (``(m, 2)``) to the polyline."""
    a, b = poly.segments()
    _, dist = project_onto_segments(points, a, b)
    return dist.min(axis=1)


def nearest_vertex(poly, p):
    """Closest vertex to ``p``; ties go to the lowest index."""
    poly = as_polyline(poly)
    d = np.hypot(*(poly.vertices - np.asarray(p, dtype=float)).T)
    i = int(np.argmin(d))
    return NearestVertex(i, float(d[i]))


def nearest_point_on_polyline(poly, p):
    """Closest point on the union of segments; ties go to the lowest segment ordinal."""
    poly = as_polyline(poly)
    a, b = poly.segments()
    feet, dist = project_onto_segments(p, a, b)
    k = int(np.argmin(dist[0]))
    return NearestPoint(Point2(*feet[0, k]), k, float(dist[0, k]))


def cumulative_lengths(vertices):
    seg = np.hypot(*np.diff(vertices, axis=0).T)
    return np.concatenate([[0.0], np.cumsum(seg)])


def arc_position(poly, p):
    """Arc length from the first vertex to the point of ``poly`` closest to ``p``."""
    poly = as_polyline(poly)
    foot, k, _ = nearest_point_on_polyline(poly, p)
    before = poly.segment_lengths()[:k].sum()
    return float(before + np.hypot(foot.x - poly.vertices[k, 0], foot.y - poly.vertices[k, 1]))


def resample_uniform(poly, k):
    """Resample an open polyline to ``k`` points evenly spaced in arc length.

    The first and last output points are the original endpoints, bit for bit.
    """
    poly = as_polyline(poly)
    if k < 2:
        raise InvalidArgument(f"need at least 2 output points, got {k}")
    if poly.closed:
        raise InvalidArgument("resample_uniform expects an open polyline")
    v = poly.vertices
    s = cumulative_lengths(v)
    targets = np.linspace(0.0, s[-1], k)
    out = np.column_stack([np.interp(targets, s, v[:, 0]), np.interp(targets, s, v[:, 1])])
    out[0] = v[0]
    out[-1] = v[-1]
    return Polyline(out)


@dataclass(frozen=True)
class AffineMap2:
    """Axis-aligned scale followed by translation: ``p' = scale * p + translate``."""

    scale_x: float = 1.0
    scale_y: float = 1.0
    translate_x: float = 0.0
    translate_y: float = 0.0

    def __post_init__(self):
        if not (self.scale_x > 0 and self.scale_y > 0):
            raise InvalidArgument("scale factors must be strictly positive")

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        return p * [self.scale_x, self.scale_y] + [self.translate_x, self.translate_y]

    def apply_polyline(self, poly):
        return Polyline(self(poly.vertices), poly.closed)

    def inverse(self):
        return AffineMap2(1.0 / self.scale_x, 1.0 / self.scale_y,
                          -self.translate_x / self.scale_x, -self.translate_y / self.scale_y)

    def compose(self, first):
        """Return the map that applies ``first`` and then ``self``."""
        return AffineMap2(self.scale_x * first.scale_x, self.scale_y * first.scale_y,
                          self.scale_x * first.translate_x + self.translate_x,
                          self.scale_y * first.translate_y + self.translate_y)


def square_resize_map(width, height, target=224):
    """Map original pixel coordinates into a ``target`` x ``target`` image.

    The short axis is zero-padded on the right/bottom to make the image square,
    then the square is scaled uniformly, so the origin stays fixed.
    """
    if not (width > 0 and height > 0 and target > 0):
        raise InvalidArgument("width, height and target must be positive")
    s = target / max(width, height)
    return AffineMap2(s, s, 0.0, 0.0)
