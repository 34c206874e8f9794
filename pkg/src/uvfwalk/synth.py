"""Synthetic scenes and closed-form oracle fields.

Randomness comes from numpy's ``default_rng`` (PCG64). A scene seed is fed
straight to ``default_rng(seed)``; noise uses ``default_rng(noise.seed)`` for
field angles and ``default_rng([noise.seed, 1])`` for heatmap shifts. Draws
happen in a fixed order, so a seed regenerates a scene bit for bit.

Orientation follows image axes (y down): a ``ccw`` circle field at angle
``t`` from the center has tangent ``(-sin t, cos t)``, which on screen runs
clockwise.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import GenerationFailed, InvalidArgument
from .geometry import Point2, Polyline
from .targets import (ON_CONTOUR_RADIUS, ContourTargets, Heatmap, UnitVectorField,
                      build_targets, gaussian_heatmap)

MARGIN = 0.1
MAX_RETRIES = 1000
SCENE_K_LENGTH = 0.05


@dataclass(frozen=True)
class NoiseSpec:
    angular_sigma: float = 0.0  # degrees
    heatmap_shift_sigma: float = 0.0  # pixels
    seed: int = 0

    def __post_init__(self):
        if self.angular_sigma < 0 or self.heatmap_shift_sigma < 0:
            raise InvalidArgument("noise sigmas must be non-negative")


class Prediction(NamedTuple):
    """Field and heatmaps as a model would output them."""
    uvf: UnitVectorField
    start: Heatmap
    end: Heatmap


@dataclass(frozen=True, eq=False)
class SyntheticScene:
    kind: str
    width: int
    height: int
    seed: int
    gt: Polyline
    targets: Union[ContourTargets, UnitVectorField]
    noise: Optional[NoiseSpec] = None
    circle_center: Optional[Point2] = None
    circle_radius: Optional[float] = None

    @property
    def field(self):
        return self.targets.uvf if isinstance(self.targets, ContourTargets) else self.targets

    def prediction(self):
        """Targets with this scene's noise applied (open scenes only)."""
        if self.kind != "open":
            raise InvalidArgument("only open scenes carry heatmaps")
        if self.noise is None:
            t = self.targets
            return Prediction(t.uvf, t.start_heatmap, t.end_heatmap)
        return perturb_targets(self.targets, self.noise)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def margin_box(width, height, margin=MARGIN):
    """``(x0, y0, x1, y1)`` of the interior box leaving ``margin`` of each dimension on every side."""
    return (margin * (width - 1), margin * (height - 1),
            (1 - margin) * (width - 1), (1 - margin) * (height - 1))


def _segment_distance(p, q, r, s):
    """Minimum distance between segments pq and rs."""
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    d1, d2 = cross(p, q, r), cross(p, q, s)
    d3, d4 = cross(r, s, p), cross(r, s, q)
    if (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0) and d1 * d2 * d3 * d4 != 0:
        return 0.0

    def pt_seg(x, a, b):
        ab = b - a
        t = min(1.0, max(0.0, float(np.dot(x - a, ab) / np.dot(ab, ab))))
        return float(np.hypot(*(x - a - t * ab)))
    return min(pt_seg(p, r, s), pt_seg(q, r, s), pt_seg(r, p, q), pt_seg(s, p, q))


def _well_separated(v, clearance):
    n = len(v) - 1
    for i in range(n):
        for j in range(i + 2, n):
            if _segment_distance(v[i], v[i + 1], v[j], v[j + 1]) < clearance:
                return False
    return True


def turn_angles_deg(vertices):
    """Absolute heading change at each interior vertex, in degrees."""
    d = np.diff(np.asarray(vertices, dtype=float), axis=0)
    h = np.arctan2(d[:, 1], d[:, 0])
    turn = (np.diff(h) + np.pi) % (2 * np.pi) - np.pi
    return np.abs(np.degrees(turn))


def gen_open_contour(seed, width=224, height=224, n_vertices=8, max_turn=30.0,
                     clearance=3.0):
    """Random bounded-turning open polyline inside the margin box.

    Headings change by at most ``max_turn`` degrees per vertex and
    non-adjacent segments stay ``clearance`` pixels apart. Candidates that
    break either rule or leave the box are redrawn.
    """
    if not 2 <= n_vertices <= 21:
        raise InvalidArgument("n_vertices must be in [2, 21]")
    if not 0 < max_turn <= 90:
        raise InvalidArgument("max_turn must be in (0, 90]")
    rng = _rng(seed)
    x0, y0, x1, y1 = margin_box(width, height)
    span = min(x1 - x0, y1 - y0)
    n_seg = n_vertices - 1
    max_turn_rad = math.radians(max_turn)
    for _ in range(MAX_RETRIES):
        total = rng.uniform(0.3, 0.8) * span
        lengths = total / n_seg * rng.uniform(0.75, 1.25, n_seg)
        turns = rng.uniform(-max_turn_rad, max_turn_rad, n_seg)
        turns[0] = rng.uniform(0.0, 2 * np.pi)
        headings = np.cumsum(turns)
        start = rng.uniform([x0, y0], [x1, y1])
        steps = lengths[:, None] * np.column_stack([np.cos(headings), np.sin(headings)])
        v = np.vstack([start, start + np.cumsum(steps, axis=0)])
        if (v[:, 0].min() < x0 or v[:, 0].max() > x1
                or v[:, 1].min() < y0 or v[:, 1].max() > y1):
            continue
        if not _well_separated(v, clearance):
            continue
        return Polyline(v)
    raise GenerationFailed(f"no feasible contour after {MAX_RETRIES} attempts")


def analytic_line_field(a, b, width, height):
    """Closed-form field for a single segment ``ab``: point at the closest
    point of the segment, or along ``b - a`` inside the on-contour band."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    ex, ey = bx - ax, by - ay
    seg_len2 = ex * ex + ey * ey
    if seg_len2 == 0:
        raise InvalidArgument("segment endpoints coincide")
    ys, xs = np.mgrid[0:height, 0:width].astype(float)
    t = np.clip(((xs - ax) * ex + (ys - ay) * ey) / seg_len2, 0.0, 1.0)
    fx = ax + t * ex - xs
    fy = ay + t * ey - ys
    d = np.hypot(fx, fy)
    on = d < ON_CONTOUR_RADIUS
    safe = np.where(on, 1.0, d)
    seg_len = math.sqrt(seg_len2)
    vx = np.where(on, ex / seg_len, fx / safe)
    vy = np.where(on, ey / seg_len, fy / safe)
    return UnitVectorField(vx, vy)


def analytic_circle_field(center, r, width, height, orientation="ccw"):
    """Closed-form field attracting onto a circle and circulating along it."""
    if not r > 1:
        raise InvalidArgument("radius must exceed 1 pixel")
    if orientation not in ("cw", "ccw"):
        raise InvalidArgument(f"unknown orientation {orientation!r}")
    cx, cy = float(center[0]), float(center[1])
    ys, xs = np.mgrid[0:height, 0:width].astype(float)
    dx, dy = xs - cx, ys - cy
    d = np.hypot(dx, dy)
    at_center = d == 0
    safe = np.where(at_center, 1.0, d)
    ux, uy = dx / safe, dy / safe
    sign = np.where(d > r, -1.0, 1.0)  # inward outside, outward inside
    vx, vy = sign * ux, sign * uy
    on = np.abs(d - r) < ON_CONTOUR_RADIUS
    turn = 1.0 if orientation == "ccw" else -1.0
    vx = np.where(on, -turn * uy, vx)
    vy = np.where(on, turn * ux, vy)
    vx = np.where(at_center, 1.0, vx)
    vy = np.where(at_center, 0.0, vy)
    return UnitVectorField(vx, vy)


def circle_polyline(center, r, n=64):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return Polyline(np.column_stack([center[0] + r * np.cos(t), center[1] + r * np.sin(t)]),
                    closed=True)


def perturb_field(field, spec):
    """Rotate every vector by an independent Gaussian angle (degrees ``spec.angular_sigma``)."""
    if spec.angular_sigma == 0:
        return UnitVectorField(field.vx.copy(), field.vy.copy())
    rng = np.random.default_rng(spec.seed)
    theta = rng.normal(0.0, math.radians(spec.angular_sigma), field.shape)
    c, s = np.cos(theta), np.sin(theta)
    return UnitVectorField(c * field.vx - s * field.vy, s * field.vx + c * field.vy)


def shift_heatmap(hm, dx, dy):
    return gaussian_heatmap((hm.center[0] + dx, hm.center[1] + dy), hm.sigma, hm.width, hm.height)


def perturb_targets(targets, spec):
    """Noisy stand-in for a network prediction of ``targets``."""
    uvf = perturb_field(targets.uvf, spec)
    start, end = targets.start_heatmap, targets.end_heatmap
    if spec.heatmap_shift_sigma > 0:
        shifts = np.random.default_rng([spec.seed, 1]).normal(0.0, spec.heatmap_shift_sigma, 4)
        start = shift_heatmap(start, shifts[0], shifts[1])
        end = shift_heatmap(end, shifts[2], shifts[3])
    return Prediction(uvf, start, end)


def make_scene(seed, width=224, height=224, kind="open", mode="vertex", n_vertices=None,
               max_turn=30.0, k_length=SCENE_K_LENGTH, noise=None):
    """Reproducible scene: a random open contour with its targets, or a circle field.

    ``n_vertices`` defaults to a uniform draw from [2, 21]. Open-scene
    heatmaps use length scaling with ``k_length``.
    """
    if width < 2 or height < 2:
        raise InvalidArgument("scene must be at least 2x2")
    rng = np.random.default_rng(seed)
    if kind == "open":
        n = int(rng.integers(2, 22)) if n_vertices is None else n_vertices
        gt = gen_open_contour(rng, width, height, n, max_turn)
        targets = build_targets(gt, width, height, mode=mode, k=k_length)
        return SyntheticScene("open", width, height, seed, gt, targets, noise)
    if kind == "circle":
        x0, y0, x1, y1 = margin_box(width, height)
        r_max = min(x1 - x0, y1 - y0) / 2
        r = float(rng.uniform(0.3, 0.9) * r_max)
        c = Point2(float(rng.uniform(x0 + r, x1 - r)), float(rng.uniform(y0 + r, y1 - r)))
        field = analytic_circle_field(c, r, width, height)
        if noise is not None:
            field = perturb_field(field, noise)
        return SyntheticScene("circle", width, height, seed, circle_polyline(c, r), field,
                              noise, circle_center=c, circle_radius=r)
    raise InvalidArgument(f"unknown scene kind {kind!r}")
