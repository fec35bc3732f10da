"""Hard/soft thresholding and BayesShrink denoising."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .image_io import GrayImage
from .wavelet import BAND_NAMES, DetailLevel, decompose, reconstruct

MAD_SCALE = 0.6745
RULES = ("hard", "soft", "bayes_soft")


@dataclass(frozen=True)
class ThresholdRule:
    variant: str = "bayes_soft"
    lam: float | None = None

    def __post_init__(self):
        if self.variant not in RULES:
            raise ValueError(f"unknown threshold rule {self.variant!r}")
        if self.variant == "bayes_soft":
            if self.lam is not None:
                raise ValueError("bayes_soft computes its own threshold")
        else:
            if self.lam is None or not self.lam >= 0:
                raise ValueError(f"{self.variant} needs a threshold >= 0, got {self.lam}")

    @classmethod
    def parse(cls, text: str) -> ThresholdRule:
        """Accepts ``hard:L``, ``soft:L`` or ``bayes-soft``."""
        name, _, value = text.strip().partition(":")
        name = name.lower().replace("-", "_")
        if name == "bayes_soft":
            if value:
                raise ValueError("bayes-soft takes no threshold")
            return cls("bayes_soft")
        if not value:
            raise ValueError(f"rule {text!r} needs a threshold, e.g. {name}:10")
        try:
            lam = float(value)
        except ValueError:
            raise ValueError(f"bad threshold in {text!r}") from None
        return cls(name, lam)

    @property
    def label(self) -> str:
        return "bayes-soft" if self.variant == "bayes_soft" else f"{self.variant}:{self.lam!r}"


@dataclass(frozen=True)
class SubbandStats:
    level: int
    band: str
    sigma_noise: float
    sigma_w: float
    sigma_s: float
    lam: float
    zeroed: int = 0

    def as_row(self) -> dict:
        row = asdict(self)
        row["lambda"] = row.pop("lam")
        return row


STATS_FIELDS = ("level", "band", "sigma_noise", "sigma_w", "sigma_s", "lambda", "zeroed")


def _check_lambda(lam):
    # lam may be an array broadcastable against the coefficients
    if not np.all(np.asarray(lam) >= 0):
        raise ValueError(f"threshold must be >= 0, got {lam}")


def hard_threshold(coeffs, lam):
    """Keep-or-kill: entries with |u| <= lam become zero."""
    _check_lambda(lam)
    u = np.asarray(coeffs, dtype=np.float64)
    return np.where(np.abs(u) > lam, u, 0.0)


def soft_threshold(coeffs, lam):
    _check_lambda(lam)
    u = np.asarray(coeffs, dtype=np.float64)
    return np.sign(u) * np.maximum(np.abs(u) - lam, 0.0)


def estimate_noise_sigma(hh1) -> float:
    """Median absolute coefficient divided by 0.6745."""
    a = np.abs(np.asarray(hh1, dtype=np.float64)).ravel()
    if a.size == 0:
        raise ValueError("cannot estimate noise from an empty band")
    # np.median averages the two middle order statistics for even counts
    return float(np.median(a)) / MAD_SCALE


def bayes_threshold(subband, sigma_noise: float, level: int = 0, band: str = "") -> SubbandStats:
    """Per-band BayesShrink threshold sigma_noise**2 / sigma_s.

    A band whose observed variance does not exceed the noise variance has no
    detectable signal; its threshold is then the largest coefficient
    magnitude so soft thresholding removes it entirely.
    """
    w = np.asarray(subband, dtype=np.float64)
    if w.size == 0:
        raise ValueError("empty sub-band")
    if not sigma_noise >= 0:
        raise ValueError(f"sigma_noise must be >= 0, got {sigma_noise}")
    var_w = float(np.mean(w * w))
    sigma_s = math.sqrt(max(var_w - sigma_noise**2, 0.0))
    if sigma_s > 0:
        lam = sigma_noise**2 / sigma_s
    else:
        lam = float(np.max(np.abs(w)))
    return SubbandStats(level, band, float(sigma_noise), math.sqrt(var_w), sigma_s, lam)


def denoise(img: GrayImage, levels: int = 2, rule: ThresholdRule | None = None):
    """Threshold every detail band of an N-level Haar pyramid.

    Returns the reconstructed image and one SubbandStats per detail band,
    ordered level 1..N and lh, hl, hh within a level. The approximation band
    is left untouched. For bayes_soft the noise sigma is estimated once from
    the level-1 HH band.
    """
    rule = rule or ThresholdRule()
    pyr = decompose(img, levels)
    sigma = estimate_noise_sigma(pyr.details[0].hh) if rule.variant == "bayes_soft" else 0.0

    stats, new_details = [], []
    for level, d in enumerate(pyr.details, start=1):
        shrunk = {}
        for name in BAND_NAMES:
            band = d.bands()[name]
            if rule.variant == "bayes_soft":
                st = bayes_threshold(band, sigma, level, name)
                out = soft_threshold(band, st.lam)
            else:
                var_w = float(np.mean(band * band))
                # fixed-threshold rules estimate nothing
                st = SubbandStats(level, name, math.nan, math.sqrt(var_w), math.nan, float(rule.lam))
                op = hard_threshold if rule.variant == "hard" else soft_threshold
                out = op(band, rule.lam)
            zeroed = int(np.count_nonzero((out == 0) & (band != 0)))
            stats.append(SubbandStats(st.level, st.band, st.sigma_noise, st.sigma_w, st.sigma_s, st.lam, zeroed))
            shrunk[name] = out
        new_details.append(DetailLevel(**shrunk))

    return reconstruct(pyr.with_details(new_details)), stats
