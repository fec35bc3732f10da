"""Seeded noise injectors (Gaussian, speckle, salt & pepper).

Parameters are on the unit intensity scale: a Gaussian variance of 0.01 means
a standard deviation of 0.1 * 255 grey levels.

Random numbers come from numpy's PCG64 bit generator seeded with the given
64-bit seed. Only ``Generator.random`` (uniform doubles) is used, and every
injector draws exactly two uniforms per pixel as one (height, width, 2) block
in row-major order, so pixel (r, c) always consumes draws 2*(r*W + c) and
2*(r*W + c) + 1. Gaussian variates come from the Box-Muller cosine branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image_io import GrayImage, from_unit, to_unit

KINDS = ("gaussian", "speckle", "salt_pepper")


def _uniform_pairs(shape, seed):
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    u = rng.random((*shape, 2))
    return u[..., 0], u[..., 1]


def _standard_normal(shape, seed):
    u1, u2 = _uniform_pairs(shape, seed)
    # 1 - u1 lies in (0, 1], keeping the log finite
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def add_gaussian(img: GrayImage, mean: float, variance: float, seed: int) -> GrayImage:
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    if variance == 0:
        return from_unit(to_unit(img) + mean)
    n = mean + np.sqrt(variance) * _standard_normal(img.shape, seed)
    return from_unit(to_unit(img) + n)


def add_speckle(img: GrayImage, variance: float, seed: int) -> GrayImage:
    """Multiplicative noise I + n*I with n uniform, zero mean, given variance."""
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    if variance == 0:
        return img
    u, _ = _uniform_pairs(img.shape, seed)
    n = (2.0 * u - 1.0) * np.sqrt(3.0 * variance)
    unit = to_unit(img)
    return from_unit(unit + n * unit)


def add_salt_pepper(img: GrayImage, density: float, seed: int) -> GrayImage:
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    hit, coin = _uniform_pairs(img.shape, seed)
    out = np.array(img.pixels)
    mask = hit < density
    out[mask] = np.where(coin[mask] < 0.5, 0.0, 255.0)
    return GrayImage(out)


@dataclass(frozen=True)
class NoiseSpec:
    """One noise model plus its seed.

    ``params`` holds (mean, variance) for gaussian, (variance,) for speckle
    and (density,) for salt_pepper.
    """

    kind: str
    params: tuple[float, ...]
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {KINDS}")
        expected = 2 if self.kind == "gaussian" else 1
        if len(self.params) != expected:
            raise ValueError(f"{self.kind} takes {expected} parameter(s), got {len(self.params)}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind == "gaussian" and self.params[1] < 0:
            raise ValueError("variance must be >= 0")
        if self.kind == "speckle" and self.params[0] < 0:
            raise ValueError("variance must be >= 0")
        if self.kind == "salt_pepper" and not 0 <= self.params[0] <= 1:
            raise ValueError("density must be in [0, 1]")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> NoiseSpec:
        """Parse ``gaussian:MEAN:VAR``, ``speckle:VAR`` or ``salt_pepper:DENSITY``."""
        kind, *rest = text.strip().split(":")
        kind = kind.lower().replace("-", "_")
        if kind in ("salt", "saltpepper", "sp", "s&p"):
            kind = "salt_pepper"
        try:
            params = tuple(float(p) for p in rest)
        except ValueError:
            raise ValueError(f"bad noise parameters in {text!r}") from None
        return cls(kind, params, seed)

    @property
    def label(self) -> str:
        return ":".join([self.kind, *(repr(p) for p in self.params)])

    def apply(self, img: GrayImage) -> GrayImage:
        if self.kind == "gaussian":
            return add_gaussian(img, self.params[0], self.params[1], self.seed)
        if self.kind == "speckle":
            return add_speckle(img, self.params[0], self.seed)
        return add_salt_pepper(img, self.params[0], self.seed)
