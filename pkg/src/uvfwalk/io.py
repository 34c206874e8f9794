"""File formats: the binary grid container and landmark/contour JSON.

Grid container (little-endian)::

    offset  size  field
    0       4     magic b"UVFG"
    4       2     version (u16) = 1
    6       1     dtype (u8) = 1, float32
    7       1     channels (u8)
    8       4     height (u32)
    12      4     width (u32)
    16      ...   payload: channels x height x width float32, channel-major, row-major

Field files carry two channels (vx, vy); heatmap files carry one.
"""

import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidArgument, UVFError
from .geometry import Polyline

MAGIC = b"UVFG"
VERSION = 1
DTYPE_FLOAT32 = 1
HEADER = struct.Struct("<4sHBBII")
SCHEMA_VERSION = 1


def atomic_write(path, data):
    """Write bytes (or text) via a temporary file in the same directory, then rename."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def encode_grid(grids):
    """Serialise a ``(channels, h, w)`` array (or a list of equal-shape 2D grids)."""
    arr = np.asarray(grids, dtype=np.float32)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise InvalidArgument(f"expected (channels, height, width), got shape {arr.shape}")
    c, h, w = arr.shape
    if not 1 <= c <= 255:
        raise InvalidArgument(f"channel count {c} outside 1..255")
    return HEADER.pack(MAGIC, VERSION, DTYPE_FLOAT32, c, h, w) + arr.astype("<f4").tobytes()


def decode_grid(data, path=None):
    if len(data) < HEADER.size:
        raise FormatError(f"truncated header ({len(data)} bytes)", path, len(data))
    magic, version, dtype, c, h, w = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", path, 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", path, 4)
    if dtype != DTYPE_FLOAT32:
        raise FormatError(f"unsupported dtype code {dtype}", path, 6)
    if c == 0:
        raise FormatError("zero channels", path, 7)
    expected = c * h * w * 4
    payload = len(data) - HEADER.size
    if payload < expected:
        raise FormatError(f"truncated payload: {payload} of {expected} bytes", path, len(data))
    if payload > expected:
        raise FormatError(f"{payload - expected} trailing bytes after payload", path,
                          HEADER.size + expected)
    arr = np.frombuffer(data, dtype="<f4", count=c * h * w, offset=HEADER.size)
    return arr.reshape(c, h, w).astype(np.float32)


def write_grid(path, grids):
    atomic_write(path, encode_grid(grids))


def read_grid(path):
    """Read a grid file as a ``(channels, height, width)`` float32 array."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read: {e.strerror}", path) from None
    return decode_grid(data, path)


def write_field(path, uvf):
    write_grid(path, uvf.stack())


def read_field(path):
    from .targets import UnitVectorField

    g = read_grid(path)
    if g.shape[0] != 2:
        raise FormatError(f"field file needs 2 channels, found {g.shape[0]}", path, 7)
    return UnitVectorField(g[0].astype(float), g[1].astype(float))


def write_heatmap(path, hm):
    from .targets import grid_of

    write_grid(path, grid_of(hm)[None])


def read_heatmap(path):
    g = read_grid(path)
    if g.shape[0] != 1:
        raise FormatError(f"heatmap file needs 1 channel, found {g.shape[0]}", path, 7)
    return g[0].astype(float)


# ---------------------------------------------------------------- landmarks

_CONTOUR_KEYS = ("label", "closed", "vertices")
_DOC_KEYS = ("schema_version", "image", "contours")


@dataclass
class Contour:
    label: str
    polyline: Polyline
    extra: dict = field(default_factory=dict)


@dataclass
class LandmarkDocument:
    """Landmark annotations for one image.

    Keys this package does not know about are kept in ``extra`` and written
    back unchanged.
    """

    width: int
    height: int
    contours: list
    schema_version: int = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)
    image_extra: dict = field(default_factory=dict)

    def get(self, label):
        for c in self.contours:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_dict(self):
        contours = []
        for c in self.contours:
            d = {"label": c.label, "closed": c.polyline.closed,
                 "vertices": [[float(x), float(y)] for x, y in c.polyline.vertices]}
            d.update(c.extra)
            contours.append(d)
        image = {"width": self.width, "height": self.height}
        image.update(self.image_extra)
        doc = {"schema_version": self.schema_version, "image": image, "contours": contours}
        doc.update(self.extra)
        return doc

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def parse_landmarks(obj, path=None):
    try:
        image = dict(obj["image"])
        width, height = int(image.pop("width")), int(image.pop("height"))
        contours = []
        for i, raw in enumerate(obj["contours"]):
            try:
                poly = Polyline(np.asarray(raw["vertices"], dtype=float), bool(raw.get("closed", False)))
            except UVFError as e:
                raise FormatError(f"contour {i}: {e}", path) from None
            extra = {k: v for k, v in raw.items() if k not in _CONTOUR_KEYS}
            contours.append(Contour(str(raw.get("label", f"contour{i}")), poly, extra))
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed landmark document: {e!r}", path) from None
    extra = {k: v for k, v in obj.items() if k not in _DOC_KEYS}
    return LandmarkDocument(width, height, contours, obj.get("schema_version", SCHEMA_VERSION),
                            extra, image)


def read_landmarks(path):
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as e:
        raise FormatError(f"cannot read: {e.strerror}", path) from None
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", path, e.pos) from None
    return parse_landmarks(obj, path)


def write_landmarks(path, doc):
    atomic_write(path, doc.dumps())


def write_json(path, obj):
    atomic_write(path, json.dumps(obj, indent=2) + "\n")


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    atomic_write(path, "\n".join(lines) + "\n")


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)
