"""Orthonormal 2D Haar DWT and multilevel pyramids.

Conventions:

* rows are filtered first (pairs of neighbouring columns), then columns;
  a pair (a, b) maps to ((a + b)/sqrt(2), (a - b)/sqrt(2)).
* ``hl`` is high-pass along rows / low-pass along columns and carries the
  horizontal details, ``lh`` is the converse (vertical details), ``hh`` the
  diagonal ones.
* An odd row or column count is made even by replicating the last row or
  column before each analysis step; synthesis crops it away again.
* Constants gain a factor 2 per level in ``ll``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .image_io import GrayImage, write_pgm

INV_SQRT2 = 1.0 / math.sqrt(2.0)
BAND_NAMES = ("lh", "hl", "hh")


@dataclass(frozen=True)
class DetailLevel:
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def bands(self):
        return {"lh": self.lh, "hl": self.hl, "hh": self.hh}


@dataclass(frozen=True)
class WaveletPyramid:
    """``details[0]`` is the finest level (1), ``details[-1]`` the coarsest."""

    approx: np.ndarray
    details: list[DetailLevel]
    original_size: tuple[int, int]  # (width, height)
    sizes: list[tuple[int, int]] = field(default_factory=list)  # (rows, cols) fed to each level

    @property
    def levels(self) -> int:
        return len(self.details)

    def subband_count(self) -> int:
        return 3 * self.levels + 1

    def with_details(self, details) -> WaveletPyramid:
        return WaveletPyramid(self.approx, list(details), self.original_size, list(self.sizes))


def _pad_even(m):
    rows, cols = m.shape
    if rows % 2:
        m = np.concatenate([m, m[-1:, :]], axis=0)
    if cols % 2:
        m = np.concatenate([m, m[:, -1:]], axis=1)
    return m


def dwt2_haar(m):
    """Single-level analysis; returns (ll, lh, hl, hh)."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a non-empty 2D matrix, got shape {m.shape}")
    m = _pad_even(m)

    # along rows: low/high over column pairs
    lo = (m[:, 0::2] + m[:, 1::2]) * INV_SQRT2
    hi = (m[:, 0::2] - m[:, 1::2]) * INV_SQRT2
    # along columns: row pairs
    ll = (lo[0::2] + lo[1::2]) * INV_SQRT2
    lh = (lo[0::2] - lo[1::2]) * INV_SQRT2
    hl = (hi[0::2] + hi[1::2]) * INV_SQRT2
    hh = (hi[0::2] - hi[1::2]) * INV_SQRT2
    return ll, lh, hl, hh


def idwt2_haar(ll, lh, hl, hh, out_size):
    """Single-level synthesis, cropped to ``out_size`` = (rows, cols)."""
    bands = [np.asarray(b, dtype=np.float64) for b in (ll, lh, hl, hh)]
    shape = bands[0].shape
    if any(b.shape != shape for b in bands) or bands[0].ndim != 2:
        raise ValueError(f"band shapes differ: {[b.shape for b in bands]}")
    rows, cols = out_size
    if (rows + 1) // 2 != shape[0] or (cols + 1) // 2 != shape[1]:
        raise ValueError(f"bands of shape {shape} cannot produce output size {out_size}")
    ll, lh, hl, hh = bands

    lo = np.empty((2 * shape[0], shape[1]))
    hi = np.empty_like(lo)
    lo[0::2] = (ll + lh) * INV_SQRT2
    lo[1::2] = (ll - lh) * INV_SQRT2
    hi[0::2] = (hl + hh) * INV_SQRT2
    hi[1::2] = (hl - hh) * INV_SQRT2

    out = np.empty((2 * shape[0], 2 * shape[1]))
    out[:, 0::2] = (lo + hi) * INV_SQRT2
    out[:, 1::2] = (lo - hi) * INV_SQRT2
    return out[:rows, :cols]


def max_levels(width: int, height: int) -> int:
    return int(math.floor(math.log2(min(width, height))))


def decompose(img, levels: int) -> WaveletPyramid:
    """Apply ``dwt2_haar`` recursively to the approximation band."""
    if isinstance(img, GrayImage):
        current = img.pixels
    else:
        current = np.asarray(img, dtype=np.float64)
    height, width = current.shape
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if min(width, height) < 2**levels:
        raise ValueError(
            f"{levels} levels is too many for a {width}x{height} image "
            f"(at most {max_levels(width, height)})"
        )
    details, sizes = [], []
    for _ in range(levels):
        sizes.append(current.shape)
        current, lh, hl, hh = dwt2_haar(current)
        details.append(DetailLevel(lh, hl, hh))
    return WaveletPyramid(current, details, (width, height), sizes)


def reconstruct_raw(p: WaveletPyramid) -> np.ndarray:
    """Inverse transform without clipping."""
    if len(p.sizes) != p.levels:
        raise ValueError("pyramid is missing per-level sizes")
    current = p.approx
    for level in range(p.levels - 1, -1, -1):
        d = p.details[level]
        current = idwt2_haar(current, d.lh, d.hl, d.hh, p.sizes[level])
    if current.shape != (p.original_size[1], p.original_size[0]):
        raise ValueError("pyramid does not reconstruct to its recorded size")
    return current


def reconstruct(p: WaveletPyramid) -> GrayImage:
    return GrayImage.clipped(reconstruct_raw(p))


def rescale_band(band):
    """Affine map of a band onto [0, 255]; returns (image, offset, scale)."""
    band = np.asarray(band, dtype=np.float64)
    lo, hi = float(band.min()), float(band.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    return GrayImage.clipped((band - lo) * scale), lo, scale


def dump_subbands(p: WaveletPyramid, out_dir) -> list[tuple[str, float, float]]:
    """Write every sub-band as a rescaled PGM; returns (filename, offset, scale) rows."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    items = [(f"ll{p.levels}", p.approx)]
    for k, d in enumerate(p.details, start=1):
        items += [(f"{name}{k}", band) for name, band in d.bands().items()]
    for name, band in items:
        img, lo, scale = rescale_band(band)
        fname = f"subband_{name}.pgm"
        write_pgm(img, os.path.join(out_dir, fname))
        written.append((fname, lo, scale))
    return written
