"""Training targets built from annotated polylines.

A contour is encoded as a unit vector field plus two Gaussian heatmaps
marking where it starts and ends. The loss helpers score predicted grids
against these targets.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .geometry import Point2, Polyline, as_polyline

ON_CONTOUR_RADIUS = 1.0
VERTEX_EPS = 1e-9
DEFAULT_K_AREA = 0.0025
DEFAULT_K_LENGTH = 0.05
DEFAULT_HEATMAP_WEIGHT = 10.0


@dataclass(frozen=True, eq=False)
class UnitVectorField:
    """Two ``(height, width)`` component grids; every cell is a unit vector."""

    vx: np.ndarray
    vy: np.ndarray

    def __post_init__(self):
        vx = np.asarray(self.vx, dtype=float)
        vy = np.asarray(self.vy, dtype=float)
        if vx.ndim != 2 or vx.shape != vy.shape:
            raise InvalidArgument(f"component grids must be 2D and equal in shape, "
                                  f"got {vx.shape} and {vy.shape}")
        object.__setattr__(self, "vx", vx)
        object.__setattr__(self, "vy", vy)

    @property
    def shape(self):
        return self.vx.shape

    @property
    def height(self):
        return self.vx.shape[0]

    @property
    def width(self):
        return self.vx.shape[1]

    def norms(self):
        return np.hypot(self.vx, self.vy)

    def angles_deg(self):
        """Direction of every cell in degrees, in ``[0, 360)``, measured in image axes."""
        return np.degrees(np.arctan2(self.vy, self.vx)) % 360.0

    def stack(self):
        return np.stack([self.vx, self.vy])


@dataclass(frozen=True, eq=False)
class Heatmap:
    values: np.ndarray
    center: Point2
    sigma: float

    @property
    def shape(self):
        return self.values.shape

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def width(self):
        return self.values.shape[1]

    def at(self, points):
        """The underlying continuous Gaussian evaluated at ``(x, y)`` points."""
        d = np.asarray(points, dtype=float) - self.center
        return _gaussian((d * d).sum(-1), self.sigma)


@dataclass(frozen=True, eq=False)
class ContourTargets:
    uvf: UnitVectorField
    start_heatmap: Heatmap
    end_heatmap: Heatmap
    source: Polyline


def grid_of(obj):
    """Raw 2D array behind a Heatmap, or the array itself."""
    return np.asarray(obj.values if isinstance(obj, Heatmap) else obj, dtype=float)


def cell_centers(width, height):
    """``(height*width, 2)`` array of ``(x, y)`` cell centers in row-major order."""
    ys, xs = np.mgrid[0:height, 0:width]
    return np.column_stack([xs.ravel(), ys.ravel()]).astype(float)


def build_uvf(poly, width, height, mode="vertex", on_radius=ON_CONTOUR_RADIUS):
    """Unit vector field for one contour.

    Cells whose center lies within ``on_radius`` of the polyline carry the unit
    tangent of the nearest segment, oriented toward the next vertex. Every
    other cell points at the nearest vertex (``mode="vertex"``) or at the
    nearest point of the polyline (``mode="segment"``). A cell sitting exactly
    on a vertex takes the tangent of the segment leaving it (for the last
    vertex of an open polyline, the segment arriving at it).
    """
    poly = as_polyline(poly)
    if mode not in ("vertex", "segment"):
        raise InvalidArgument(f"unknown mode {mode!r}")
    if width < 2 or height < 2:
        raise InvalidArgument("field must be at least 2x2")

    verts = poly.vertices
    a, b = poly.segments()
    seg = b - a
    tangents = seg / np.hypot(seg[:, 0], seg[:, 1])[:, None]
    n_seg = len(a)
    # Segment leaving each vertex; the open polyline's last vertex reuses its incoming segment.
    outgoing = np.minimum(np.arange(len(verts)), n_seg - 1)

    ys, xs = np.mgrid[0:height, 0:width].astype(float)

    # Running minimum over segments; strict "<" keeps the lowest ordinal on ties.
    dmin = np.full(xs.shape, np.inf)
    k = np.zeros(xs.shape, dtype=int)
    foot_x = np.zeros(xs.shape)
    foot_y = np.zeros(xs.shape)
    for s, ((ax, ay), (ex, ey)) in enumerate(zip(a, seg)):
        t = np.clip(((xs - ax) * ex + (ys - ay) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
        fx = ax + t * ex
        fy = ay + t * ey
        d = np.hypot(fx - xs, fy - ys)
        better = d < dmin
        dmin[better] = d[better]
        k[better] = s
        foot_x[better] = fx[better]
        foot_y[better] = fy[better]

    vmin = np.full(xs.shape, np.inf)
    iv = np.zeros(xs.shape, dtype=int)
    for i, (vx_, vy_) in enumerate(verts):
        d = np.hypot(vx_ - xs, vy_ - ys)
        better = d < vmin
        vmin[better] = d[better]
        iv[better] = i

    if mode == "vertex":
        dx, dy, norm = verts[iv, 0] - xs, verts[iv, 1] - ys, vmin
    else:
        dx, dy, norm = foot_x - xs, foot_y - ys, dmin
    norm = np.where(norm > 0, norm, 1.0)
    vx, vy = dx / norm, dy / norm

    on = dmin < on_radius
    vx[on] = tangents[k[on], 0]
    vy[on] = tangents[k[on], 1]
    at_vertex = vmin < VERTEX_EPS
    vx[at_vertex] = tangents[outgoing[iv[at_vertex]], 0]
    vy[at_vertex] = tangents[outgoing[iv[at_vertex]], 1]
    return UnitVectorField(vx, vy)


def gaussian_heatmap(center, sigma, width, height):
    """Unnormalised Gaussian, peak 1 at the continuous ``center``."""
    if not sigma > 0:
        raise InvalidArgument("sigma must be positive")
    cx, cy = float(center[0]), float(center[1])
    xs = np.arange(width, dtype=float) - cx
    ys = np.arange(height, dtype=float) - cy
    d2 = ys[:, None] ** 2 + xs[None, :] ** 2
    return Heatmap(_gaussian(d2, sigma), Point2(cx, cy), float(sigma))


def _gaussian(d2, sigma):
    return np.exp(-d2 / (2.0 * sigma * sigma))


def heatmap_sigma(poly, area=None, length=None, k=None):
    """Gaussian width for the endpoint heatmaps.

    With ``area`` the variance is ``k * area``; otherwise the standard
    deviation is ``k * length``, where ``length`` defaults to the contour's
    own arc length.
    """
    if area is not None and length is not None:
        raise InvalidArgument("pass either area or length, not both")
    if area is not None:
        k = DEFAULT_K_AREA if k is None else k
        if not (area > 0 and k > 0):
            raise InvalidArgument("area and k must be positive")
        return float(np.sqrt(k * area))
    if length is None:
        length = poly.length()
    k = DEFAULT_K_LENGTH if k is None else k
    if not (length > 0 and k > 0):
        raise InvalidArgument("length and k must be positive")
    return float(k * length)


def build_endpoint_heatmaps(poly, width, height, area=None, length=None, k=None):
    """Start and end heatmaps centered on the first and last vertices."""
    poly = as_polyline(poly)
    if poly.closed:
        raise InvalidArgument("closed contours have no start/end heatmaps")
    sigma = heatmap_sigma(poly, area=area, length=length, k=k)
    return (gaussian_heatmap(poly.start, sigma, width, height),
            gaussian_heatmap(poly.end, sigma, width, height))


def build_targets(poly, width, height, mode="vertex", area=None, length=None, k=None):
    poly = as_polyline(poly)
    start, end = build_endpoint_heatmaps(poly, width, height, area=area, length=length, k=k)
    return ContourTargets(build_uvf(poly, width, height, mode), start, end, poly)


def field_l2_loss(pred, target):
    """Mean over cells of the squared difference between vectors."""
    if pred.shape != target.shape:
        raise InvalidArgument(f"shape mismatch: {pred.shape} vs {target.shape}")
    return float(np.mean((pred.vx - target.vx) ** 2 + (pred.vy - target.vy) ** 2))


def heatmap_weighted_l2_loss(pred, target, w=DEFAULT_HEATMAP_WEIGHT):
    """Squared error weighted by ``1 + w * target``, averaged over cells.

    The weight emphasises the small bright region around the peak, which an
    unweighted loss would let the background dominate. This particular
    weighting is a stand-in; earlier heatmap-regression work uses variants.
    """
    p, t = grid_of(pred), grid_of(target)
    if p.shape != t.shape:
        raise InvalidArgument(f"shape mismatch: {p.shape} vs {t.shape}")
    if w < 0:
        raise InvalidArgument("weight must be non-negative")
    return float(np.mean((1.0 + w * t) * (p - t) ** 2))
