"""MSE and PSNR between two images of equal size."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image_io import GrayImage

PEAK = 255.0


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float  # math.inf when the images are identical


def _check_pair(f: GrayImage, g: GrayImage):
    if f.shape != g.shape:
        raise ValueError(f"image sizes differ: {f.width}x{f.height} vs {g.width}x{g.height}")


def mse(f: GrayImage, g: GrayImage) -> float:
    _check_pair(f, g)
    d = f.pixels - g.pixels
    return float(np.mean(d * d))


def psnr_from_mse(m: float) -> float:
    if m == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / m)


def psnr(f: GrayImage, g: GrayImage) -> float:
    return psnr_from_mse(mse(f, g))


def quality(f: GrayImage, g: GrayImage) -> QualityReport:
    m = mse(f, g)
    return QualityReport(m, psnr_from_mse(m))
