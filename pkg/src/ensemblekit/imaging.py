"""RGB images: binary PPM (P6) I/O, nearest-neighbour resizing, right-angle augmentation."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

AUGMENT_OPS = ("hflip", "rot90", "rot180", "rot270")


@dataclass(frozen=True, eq=False)
class Image:
    """Pixels are a (height, width, 3) uint8 array, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] < 1 or px.shape[1] < 1:
            raise DataError(f"image pixels must have shape (h, w, 3), got {px.shape}")
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, Image) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def tobytes(self):
        return self.pixels.tobytes()


def _header_tokens(data, count, where):
    """Pull ``count`` whitespace-separated tokens from a PPM header, skipping comments."""
    tokens, pos = [], 2
    while len(tokens) < count:
        if pos >= len(data):
            raise DataError(f"{where}: malformed PPM header (unexpected end of file)")
        ch = data[pos:pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
                pos += 1
            tokens.append(data[start:pos])
    # exactly one whitespace byte separates maxval from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise DataError(f"{where}: malformed PPM header (no separator before pixel data)")
    return tokens, pos + 1


def decode_ppm(data, where="<bytes>"):
    if data[:2] != b"P6":
        raise DataError(f"{where}: malformed PPM header (magic number is not P6)")
    tokens, offset = _header_tokens(data, 3, where)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise DataError(f"{where}: malformed PPM header (non-integer field)") from None
    if width < 1 or height < 1:
        raise DataError(f"{where}: malformed PPM header (non-positive dimensions)")
    if maxval != 255:
        raise DataError(f"{where}: unsupported PPM maxval {maxval} (only 255)")
    need = width * height * 3
    raster = data[offset:]
    if len(raster) < need:
        raise DataError(
            f"{where}: truncated pixel data ({width}x{height} needs {need} bytes, found {len(raster)})"
        )
    pixels = np.frombuffer(raster[:need], dtype=np.uint8).reshape(height, width, 3)
    return Image(pixels)


def encode_ppm(img):
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.tobytes()


def read_ppm(path):
    path = Path(path)
    return decode_ppm(path.read_bytes(), str(path))


def write_ppm(img, path):
    Path(path).write_bytes(encode_ppm(img))


def load_image_dir(path):
    """Load ``<root>/<class>/*.ppm``; classes are the sorted subdirectory names.

    Returns ``(images, labels, classes)`` with labels as class indices.
    """
    root = Path(path)
    if not root.is_dir():
        raise DataError(f"{root}: not a directory")
    class_dirs = sorted((p for p in root.iterdir() if p.is_dir()), key=lambda p: p.name)
    if not class_dirs:
        raise DataError(f"{root}: no class subdirectories")
    images, labels = [], []
    for index, class_dir in enumerate(class_dirs):
        files = sorted(f for f in class_dir.iterdir() if f.is_file() and f.suffix.lower() == ".ppm")
        if not files:
            raise DataError(f"{class_dir}: class directory contains no .ppm images")
        for f in files:
            images.append(read_ppm(f))
            labels.append(index)
    return images, labels, tuple(p.name for p in class_dirs)


def resize(img, w, h):
    """Nearest neighbour: source index = floor(dst_index * src_dim / dst_dim)."""
    if w < 1 or h < 1:
        raise ValueError(f"target size must be positive, got {w}x{h}")
    rows = (np.arange(h) * img.height) // h
    cols = (np.arange(w) * img.width) // w
    return Image(img.pixels[rows][:, cols])


def augment(img, op):
    px = img.pixels
    if op == "hflip":
        out = px[:, ::-1]
    elif op == "rot90":
        # clockwise: pixel (r, c) lands at (c, rows - 1 - r)
        out = np.rot90(px, k=-1, axes=(0, 1))
    elif op == "rot180":
        out = px[::-1, ::-1]
    elif op == "rot270":
        out = np.rot90(px, k=1, axes=(0, 1))
    else:
        raise ValueError(f"unknown augmentation {op!r}; expected one of {AUGMENT_OPS}")
    return Image(np.ascontiguousarray(out))
