"""Contour extraction by walking along a unit vector field.

Open contours start at the refined peak of the start heatmap and advance by
fixed-length explicit Euler steps until the end heatmap is reached. Closed
contours are found by walking from a seed until the path revisits itself.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import DegenerateField, InvalidArgument, NoPeak, OutOfBounds
from .geometry import Point2, Polyline
from .targets import grid_of

REACHED_END = "reached_end"
MAX_STEPS = "max_steps"
LEFT_GRID = "left_grid"
DEGENERATE_FIELD = "degenerate_field"
LOOP_CLOSED = "loop_closed"
TERMINATIONS = (REACHED_END, MAX_STEPS, LEFT_GRID, DEGENERATE_FIELD, LOOP_CLOSED)


@dataclass(frozen=True)
class WalkConfig:
    step: float = 1.0
    stop_threshold: float = 0.5
    max_steps: Optional[int] = None  # None: 4 * (width + height) of the field
    min_norm: float = 1e-3
    loop_radius: float = 1.0
    loop_min_steps: int = 10

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidArgument("step must be positive")
        if not 0 < self.stop_threshold < 1:
            raise InvalidArgument("stop_threshold must lie in (0, 1)")
        if self.max_steps is not None and self.max_steps < 1:
            raise InvalidArgument("max_steps must be at least 1")
        if self.loop_min_steps < 1:
            raise InvalidArgument("loop_min_steps must be at least 1")

    def step_budget(self, width, height):
        return self.max_steps if self.max_steps is not None else 4 * (width + height)


@dataclass(eq=False)
class WalkedContour:
    """Sub-pixel path produced by a walk.

    Consecutive ``points`` are exactly ``step`` apart and
    ``len(points) == steps + 1``. For open walks that reached the end
    heatmap, ``end_point`` holds the refined end-heatmap peak, which
    :meth:`to_polyline` appends to close the residual gap.
    """

    points: np.ndarray
    termination: str
    steps: int
    closed: bool = False
    end_point: Optional[Point2] = dc_field(default=None)

    def arc_length(self):
        seg = np.diff(self.points, axis=0)
        total = float(np.hypot(seg[:, 0], seg[:, 1]).sum())
        if self.closed and len(self.points) > 1:
            total += float(np.hypot(*(self.points[0] - self.points[-1])))
        return total

    def to_polyline(self, anchor_end=True):
        pts = self.points
        if anchor_end and self.end_point is not None and self.termination == REACHED_END:
            pts = np.vstack([pts, self.end_point])
        keep = np.ones(len(pts), dtype=bool)
        keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
        pts = pts[keep]
        if self.closed and len(pts) > 2 and np.all(pts[0] == pts[-1]):
            pts = pts[:-1]
        if len(pts) < 2:
            raise InvalidArgument("walk produced fewer than two distinct points")
        return Polyline(pts, closed=self.closed and len(pts) > 2)


def bilinear(grid, x, y):
    """Bilinearly interpolate a 2D grid at ``(x, y)``; raises OutOfBounds outside it."""
    h, w = grid.shape
    if not (0.0 <= x <= w - 1 and 0.0 <= y <= h - 1):
        raise OutOfBounds(f"point ({x:.3f}, {y:.3f}) outside {w}x{h} grid")
    j = min(int(x), w - 2)
    i = min(int(y), h - 2)
    fx, fy = x - j, y - i
    top = grid[i, j] * (1.0 - fx) + grid[i, j + 1] * fx
    bottom = grid[i + 1, j] * (1.0 - fx) + grid[i + 1, j + 1] * fx
    return top * (1.0 - fy) + bottom * fy


def sample_field(field, p, min_norm=1e-3):
    """Bilinearly interpolated field direction at ``p``, renormalised to unit length."""
    x, y = float(p[0]), float(p[1])
    vx = bilinear(field.vx, x, y)
    vy = bilinear(field.vy, x, y)
    n = math.hypot(vx, vy)
    if n < min_norm:
        raise DegenerateField(f"interpolated field norm {n:.2e} at ({x:.3f}, {y:.3f})")
    return vx / n, vy / n


def _parabola_offset(left, center, right):
    denom = left - 2.0 * center + right
    if denom >= 0:
        return 0.0
    return min(0.5, max(-0.5, 0.5 * (left - right) / denom))


def localize_peak(hm):
    """Sub-pixel peak of a heatmap.

    Integer argmax (first in row-major order) refined by an independent
    three-point parabola along each axis, clamped to half a pixel. An axis
    whose argmax sits on the border is not refined.
    """
    g = grid_of(hm)
    if g.size == 0 or g.max() == g.min():
        raise NoPeak("heatmap is constant")
    i, j = np.unravel_index(int(np.argmax(g)), g.shape)
    h, w = g.shape
    x, y = float(j), float(i)
    if 0 < j < w - 1:
        x += _parabola_offset(g[i, j - 1], g[i, j], g[i, j + 1])
    if 0 < i < h - 1:
        y += _parabola_offset(g[i - 1, j], g[i, j], g[i + 1, j])
    return Point2(x, y)


def walk_open(field, start_hm, end_hm, cfg=None):
    """Walk from the start-heatmap peak until the end heatmap activates."""
    cfg = cfg or WalkConfig()
    end = grid_of(end_hm)
    if grid_of(start_hm).shape != field.shape or end.shape != field.shape:
        raise InvalidArgument("field and heatmaps must share dimensions")
    budget = cfg.step_budget(field.width, field.height)
    end_point = localize_peak(end_hm)

    x, y = localize_peak(start_hm)
    points = [(x, y)]
    termination = MAX_STEPS
    for _ in range(budget):
        try:
            dx, dy = sample_field(field, (x, y), cfg.min_norm)
        except OutOfBounds:
            termination = LEFT_GRID
            break
        except DegenerateField:
            termination = DEGENERATE_FIELD
            break
        x, y = x + cfg.step * dx, y + cfg.step * dy
        points.append((x, y))
        try:
            if bilinear(end, x, y) >= cfg.stop_threshold:
                termination = REACHED_END
                break
        except OutOfBounds:
            termination = LEFT_GRID
            break
    pts = np.array(points, dtype=float)
    return WalkedContour(pts, termination, len(pts) - 1, closed=False,
                         end_point=end_point if termination == REACHED_END else None)


def walk_closed(field, seed, cfg=None):
    """Walk from ``seed`` until the path loops back on itself.

    The first ``loop_min_steps`` points (the approach from the seed) are never
    matched, and a point is only compared with points at least
    ``loop_min_steps`` steps older. On a revisit within ``loop_radius`` the
    returned contour is the loop portion, from the revisited point up to the
    step before the revisit.
    """
    cfg = cfg or WalkConfig()
    budget = cfg.step_budget(field.width, field.height)
    m = cfg.loop_min_steps
    x, y = float(seed[0]), float(seed[1])
    bilinear(field.vx, x, y)  # bounds check on the seed

    pts = np.empty((budget + 1, 2))
    pts[0] = x, y
    n = 1
    termination = MAX_STEPS
    loop_start = None
    while n <= budget:
        try:
            dx, dy = sample_field(field, (x, y), cfg.min_norm)
        except OutOfBounds:
            termination = LEFT_GRID
            break
        except DegenerateField:
            termination = DEGENERATE_FIELD
            break
        x, y = x + cfg.step * dx, y + cfg.step * dy
        pts[n] = x, y
        idx = n
        n += 1
        if not (0.0 <= x <= field.width - 1 and 0.0 <= y <= field.height - 1):
            termination = LEFT_GRID
            break
        hi = idx - m
        if hi >= m:
            cand = pts[m:hi + 1]
            d = np.hypot(cand[:, 0] - x, cand[:, 1] - y)
            k = int(np.argmin(d))
            if d[k] <= cfg.loop_radius:
                loop_start = m + k
                termination = LOOP_CLOSED
                break

    if termination == LOOP_CLOSED:
        loop = pts[loop_start:n - 1].copy()
        return WalkedContour(loop, LOOP_CLOSED, len(loop) - 1, closed=True)
    path = pts[:n].copy()
    return WalkedContour(path, termination, len(path) - 1, closed=False)
