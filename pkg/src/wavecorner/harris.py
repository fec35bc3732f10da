"""Harris corner detector.

Pipeline: central-difference gradients -> Gaussian-weighted structure tensor
-> det - k * trace**2 response -> thresholded non-maximum suppression.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .image_io import GrayImage

# responses closer than this fraction of the peak count as ties in NMS
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class HarrisParams:
    k: float = 0.04
    window_sigma: float = 1.0
    window_radius: int = 3
    rel_threshold: float = 0.01
    nms_radius: int = 1
    # when set, replaces the relative threshold
    abs_threshold: float | None = None

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be > 0, got {self.k}")
        if not self.window_sigma > 0:
            raise ValueError(f"window_sigma must be > 0, got {self.window_sigma}")
        if self.window_radius < 1:
            raise ValueError(f"window_radius must be >= 1, got {self.window_radius}")
        if not 0 < self.rel_threshold < 1:
            raise ValueError(f"rel_threshold must be in (0, 1), got {self.rel_threshold}")
        if self.nms_radius < 1:
            raise ValueError(f"nms_radius must be >= 1, got {self.nms_radius}")
        if self.abs_threshold is not None and not self.abs_threshold >= 0:
            raise ValueError("abs_threshold must be >= 0")

    def as_row(self) -> dict:
        return {
            "harris_k": self.k,
            "window_sigma": self.window_sigma,
            "window_radius": self.window_radius,
            "rel_threshold": self.rel_threshold,
            "abs_threshold": "" if self.abs_threshold is None else self.abs_threshold,
            "nms_radius": self.nms_radius,
        }


@dataclass(frozen=True)
class CornerSet:
    corners: list  # (x, y, response), strongest first

    @property
    def count(self) -> int:
        return len(self.corners)

    def positions(self) -> set[tuple[int, int]]:
        return {(x, y) for x, y, _ in self.corners}


def gradients(img):
    """Central differences I(x+1) - I(x-1) with replicated edges; returns (ix, iy)."""
    px = img.pixels if isinstance(img, GrayImage) else np.asarray(img, dtype=np.float64)
    if min(px.shape) < 3:
        raise ValueError(f"image must be at least 3x3, got {px.shape[1]}x{px.shape[0]}")
    p = np.pad(px, 1, mode="edge")
    ix = p[1:-1, 2:] - p[1:-1, :-2]
    iy = p[2:, 1:-1] - p[:-2, 1:-1]
    return ix, iy


def gaussian_window(sigma: float, radius: int) -> np.ndarray:
    """1D Gaussian taps over [-radius, radius], normalized to sum 1."""
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / sigma) ** 2)
    return g / g.sum()


def _window_sum(m, g):
    out = correlate1d(m, g, axis=1, mode="nearest")
    return correlate1d(out, g, axis=0, mode="nearest")


def structure_tensor(ix, iy, params: HarrisParams = HarrisParams()):
    """Windowed sums (A, B, C) of Ix^2, Ix*Iy and Iy^2."""
    ix = np.asarray(ix, dtype=np.float64)
    iy = np.asarray(iy, dtype=np.float64)
    if ix.shape != iy.shape:
        raise ValueError(f"gradient shapes differ: {ix.shape} vs {iy.shape}")
    g = gaussian_window(params.window_sigma, params.window_radius)
    return _window_sum(ix * ix, g), _window_sum(ix * iy, g), _window_sum(iy * iy, g)


def corner_response(tensor, params: HarrisParams = HarrisParams()):
    a, b, c = tensor
    det = a * c - b * b
    trace = a + c
    return det - params.k * trace * trace


def _threshold(h, params):
    if params.abs_threshold is not None:
        return params.abs_threshold
    return params.rel_threshold * float(h.max())


def detect_corners(h, params: HarrisParams = HarrisParams()) -> CornerSet:
    """Local maxima of the response above threshold.

    A pixel must beat every neighbour within Chebyshev distance nms_radius;
    among tied values (equal up to TIE_RTOL * peak, which absorbs rounding
    on plateaus) the first one in row-major order wins.
    Pixels closer than window_radius to the border are never corners.
    """
    h = np.asarray(h, dtype=np.float64)
    rows, cols = h.shape
    if h.size == 0 or h.max() <= 0:
        return CornerSet([])

    keep = (h > 0) & (h > _threshold(h, params))
    b = params.window_radius
    border = np.zeros_like(keep)
    border[b:rows - b, b:cols - b] = True
    keep &= border

    tol = TIE_RTOL * float(np.abs(h).max())
    r = params.nms_radius
    padded = np.pad(h, r, mode="constant", constant_values=-np.inf)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dy == 0 and dx == 0:
                continue
            nb = padded[r + dy:r + dy + rows, r + dx:r + dx + cols]
            if dy < 0 or (dy == 0 and dx < 0):
                keep &= h > nb + tol
            else:
                keep &= h >= nb - tol

    ys, xs = np.nonzero(keep)
    vals = h[ys, xs]
    order = np.lexsort((xs, ys, -vals))
    return CornerSet([(int(xs[i]), int(ys[i]), float(vals[i])) for i in order])


def harris(img: GrayImage, params: HarrisParams = HarrisParams()) -> CornerSet:
    ix, iy = gradients(img)
    h = corner_response(structure_tensor(ix, iy, params), params)
    return detect_corners(h, params)


def response_map(img: GrayImage, params: HarrisParams = HarrisParams()) -> np.ndarray:
    ix, iy = gradients(img)
    return corner_response(structure_tensor(ix, iy, params), params)


CORNER_FIELDS = ("x", "y", "response")


def write_corners_csv(cs: CornerSet, path, params: HarrisParams | None = None, extra: dict | None = None):
    """CSV with x, y, response plus the settings that produced them."""
    meta = dict(extra or {})
    if params is not None:
        meta.update(params.as_row())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*CORNER_FIELDS, *meta])
        for x, y, resp in cs.corners:
            w.writerow([x, y, repr(resp), *meta.values()])


def annotate(img: GrayImage, cs: CornerSet) -> GrayImage:
    """Copy of the image with a 3x3 white cross on every corner."""
    out = np.array(img.pixels)
    rows, cols = out.shape
    for x, y, _ in cs.corners:
        for dx, dy in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)):
            xx, yy = x + dx, y + dy
            if 0 <= xx < cols and 0 <= yy < rows:
                out[yy, xx] = 255.0
    return GrayImage(out)

