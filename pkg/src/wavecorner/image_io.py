"""Grayscale raster type and PGM (P2/P5) reading and writing.

Intensities live on the 0..255 scale as float64 so that denoised results keep
sub-integer precision; quantization happens only when a file is written.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

PEAK = 255.0

_TOKEN = re.compile(rb"\S+")


class PGMError(ValueError):
    """Base class for PGM decoding problems."""


class MalformedHeaderError(PGMError):
    pass


class MaxvalError(PGMError):
    pass


class TruncatedDataError(PGMError):
    pass


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable grayscale image; ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.size == 0:
            raise ValueError(f"image must be a non-empty 2D array, got shape {px.shape}")
        if not np.all(np.isfinite(px)):
            raise ValueError("image contains non-finite intensities")
        if px.min() < 0.0 or px.max() > PEAK:
            raise ValueError(
                f"intensities must lie in [0, 255], got [{px.min()}, {px.max()}]"
            )
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @classmethod
    def clipped(cls, values) -> GrayImage:
        """Build an image from arbitrary reals by clipping into [0, 255]."""
        return cls(np.clip(np.asarray(values, dtype=np.float64), 0.0, PEAK))

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None


def to_unit(img: GrayImage) -> np.ndarray:
    return img.pixels / PEAK


def from_unit(raster) -> GrayImage:
    return GrayImage.clipped(np.asarray(raster, dtype=np.float64) * PEAK)


def quantize(values) -> np.ndarray:
    """Round half away from zero to integer samples in 0..255."""
    v = np.asarray(values, dtype=np.float64)
    q = np.sign(v) * np.floor(np.abs(v) + 0.5)
    return np.clip(q, 0, 255).astype(np.uint8)


def _parse_header(data: bytes):
    """Return (magic, width, height, maxval, offset of first raster byte)."""
    fields = []
    pos = 0
    while len(fields) < 4:
        # skip whitespace and comments
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        m = _TOKEN.match(data, pos)
        if m is None:
            raise MalformedHeaderError("unexpected end of file inside PGM header")
        fields.append(m.group())
        pos = m.end()

    magic = fields[0]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeaderError(f"unsupported magic number {magic!r}")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise MalformedHeaderError(f"non-integer header field in {fields[1:]!r}") from None
    if width <= 0 or height <= 0:
        raise MalformedHeaderError(f"invalid dimensions {width}x{height}")
    if maxval <= 0:
        raise MalformedHeaderError(f"invalid maxval {maxval}")
    if maxval > 255:
        raise MaxvalError(f"maxval {maxval} exceeds 255 (16-bit PGM is not supported)")
    # a single whitespace byte separates the header from the raster
    if pos >= len(data):
        if width * height:
            raise TruncatedDataError("no pixel data after header")
    elif not data[pos:pos + 1].isspace():
        raise MalformedHeaderError("header not terminated by whitespace")
    return magic.decode(), width, height, maxval, pos + 1


def load_pgm(path) -> GrayImage:
    """Read a P2 or P5 file; sample value k becomes intensity k."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, width, height, maxval, offset = _parse_header(data)
    n = width * height

    if magic == "P5":
        raster = data[offset:offset + n]
        if len(raster) < n:
            raise TruncatedDataError(f"expected {n} bytes of pixel data, found {len(raster)}")
        samples = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b" ", data[offset:])
        tokens = body.split()
        if len(tokens) < n:
            raise TruncatedDataError(f"expected {n} samples, found {len(tokens)}")
        try:
            samples = np.array([int(t) for t in tokens[:n]], dtype=np.int64)
        except ValueError:
            raise MalformedHeaderError("non-integer sample in P2 raster") from None
        if samples.min() < 0:
            raise PGMError("negative sample in P2 raster")

    if samples.max() > maxval:
        raise PGMError(f"sample {int(samples.max())} exceeds maxval {maxval}")
    return GrayImage(samples.reshape(height, width).astype(np.float64))


def write_pgm(img: GrayImage, path, binary: bool = True) -> None:
    samples = quantize(img.pixels)
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n255\n".encode()
    if binary:
        payload = samples.tobytes()
    else:
        payload = ("\n".join(" ".join(str(v) for v in row) for row in samples) + "\n").encode()
    with open(os.fspath(path), "wb") as fh:
        fh.write(header)
        fh.write(payload)
