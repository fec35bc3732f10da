"""Test images: the bundled 512x512 photograph and synthetic patterns."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .image_io import GrayImage, load_pgm

CAMERA = "camera.pgm"


def camera() -> GrayImage:
    """512x512 'camera' photograph (CC0, shipped with scikit-image)."""
    with resources.as_file(resources.files(__package__) / "data" / CAMERA) as path:
        return load_pgm(path)


def constant(value: float = 128.0, size: int = 64) -> GrayImage:
    return GrayImage(np.full((size, size), float(value)))


def white_square(size: int = 32, side: int = 12) -> GrayImage:
    """Black canvas with a centred white square."""
    px = np.zeros((size, size))
    lo = (size - side) // 2
    px[lo:lo + side, lo:lo + side] = 255.0
    return GrayImage(px)


def checkerboard(size: int = 64, block: int = 8) -> GrayImage:
    idx = np.arange(size) // block
    return GrayImage(255.0 * ((idx[:, None] + idx[None, :]) % 2))


def ramp(width: int = 64, height: int = 64) -> GrayImage:
    """Horizontal ramp I(x, y) = x, scaled to fit 0..255."""
    x = np.arange(width, dtype=np.float64)
    scale = min(1.0, 255.0 / max(width - 1, 1))
    return GrayImage(np.tile(x * scale, (height, 1)))
