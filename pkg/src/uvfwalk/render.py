"""PNG overlays: field direction as a hue map, heatmaps blended on top,
polylines stroked in label colours."""

import io as _io

import numpy as np
from PIL import Image, ImageDraw

from .errors import InvalidArgument
from .geometry import as_polyline
from .io import atomic_write
from .targets import grid_of

COLORS = {
    "left": (255, 0, 0),
    "right": (0, 255, 0),
    "gt": (255, 255, 0),
    "start": (0, 255, 0),
    "end": (0, 0, 255),
}
DEFAULT_COLOR = (0, 255, 255)


def angle_map_rgb(field):
    """``(h, w, 3)`` uint8 image; hue encodes the direction in degrees (0 = +x)."""
    hue = (np.floor(field.angles_deg() / 360.0 * 256.0).astype(int) % 256).astype(np.uint8)
    hsv = np.stack([hue, np.full_like(hue, 255), np.full_like(hue, 255)], axis=-1)
    h, w = hue.shape
    return np.asarray(Image.frombytes("HSV", (w, h), hsv.tobytes()).convert("RGB"))


def _gray_rgb(image):
    g = np.asarray(image, dtype=float)
    lo, hi = float(g.min()), float(g.max())
    g = (g - lo) / (hi - lo) if hi > lo else np.zeros_like(g)
    g = np.round(g * 255).astype(np.uint8)
    return np.repeat(g[..., None], 3, axis=-1)


def color_for(label):
    return COLORS.get(label, DEFAULT_COLOR)


def compose_overlay(shape, image=None, field=None, heatmaps=(), polylines=()):
    """Build the overlay as a PIL image.

    ``heatmaps`` is a sequence of ``(grid, label)``; ``polylines`` a sequence of
    ``(polyline, label)``. Labels pick colours from :data:`COLORS`.
    """
    h, w = shape
    for g in [image] + [hm for hm, _ in heatmaps]:
        if g is not None and grid_of(g).shape != (h, w):
            raise InvalidArgument(f"grid of shape {grid_of(g).shape} does not match {(h, w)}")
    if field is not None and field.shape != (h, w):
        raise InvalidArgument(f"field of shape {field.shape} does not match {(h, w)}")

    rgb = np.zeros((h, w, 3), dtype=float)
    if image is not None:
        rgb = _gray_rgb(image).astype(float)
    if field is not None:
        hue = angle_map_rgb(field).astype(float)
        rgb = hue if image is None else 0.5 * rgb + 0.5 * hue
    for hm, label in heatmaps:
        alpha = np.clip(grid_of(hm), 0.0, 1.0)[..., None] * 0.6
        rgb = (1 - alpha) * rgb + alpha * np.array(color_for(label), dtype=float)
    img = Image.fromarray(np.round(rgb).astype(np.uint8))

    draw = ImageDraw.Draw(img)
    for poly, label in polylines:
        poly = as_polyline(poly)
        pts = [tuple(p) for p in np.round(poly.vertices, 3)]
        if poly.closed:
            pts.append(pts[0])
        draw.line(pts, fill=color_for(label), width=1)
    return img


def png_bytes(img):
    buf = _io.BytesIO()
    img.save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def render_overlay(path, shape, image=None, field=None, heatmaps=(), polylines=()):
    atomic_write(path, png_bytes(compose_overlay(shape, image, field, heatmaps, polylines)))
