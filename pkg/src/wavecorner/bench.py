"""Benchmark protocol: three noise models x decomposition levels.

For every noise model the noisy image is generated once (seed = base seed +
index of the model) and denoised at each level with BayesShrink. Rows come
back in a fixed order: noise models in NOISE_MODELS order, levels ascending.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .harris import HarrisParams, harris
from .image_io import GrayImage
from .metrics import mse, psnr
from .noise import NoiseSpec
from .shrink import ThresholdRule, denoise

NOISE_MODELS = (
    ("gaussian", (0.0, 0.01)),
    ("speckle", (0.04,)),
    ("salt_pepper", (0.05,)),
)
LEVELS = (1, 2)

PSNR_FIELDS = (
    "noise", "noise_params", "seed", "wavelet", "rule", "levels",
    "psnr_noisy", "psnr_denoised", "mse_denoised",
)
CORNER_FIELDS = ("image", "noise", "noise_params", "seed", "wavelet", "rule", "levels", "corners")


@dataclass
class BenchResult:
    psnr_rows: list = field(default_factory=list)
    corner_rows: list = field(default_factory=list)
    # kept for figures: {(noise kind, level): (noisy, denoised)}
    images: dict = field(default_factory=dict)
    corner_sets: dict = field(default_factory=dict)


def _params_text(params):
    return ":".join(repr(p) for p in params)


def run_bench(
    clean: GrayImage,
    seed: int = 0,
    harris_params: HarrisParams = HarrisParams(),
    levels=LEVELS,
    rule: ThresholdRule | None = None,
) -> BenchResult:
    rule = rule or ThresholdRule()
    hrow = harris_params.as_row()
    res = BenchResult()

    orig_cs = harris(clean, harris_params)
    res.corner_sets["original"] = orig_cs
    res.corner_rows.append({
        "image": "original", "noise": "none", "noise_params": "", "seed": "",
        "wavelet": "", "rule": "", "levels": "", "corners": orig_cs.count, **hrow,
    })

    noisy_rows, denoised_rows = [], []
    for i, (kind, params) in enumerate(NOISE_MODELS):
        spec = NoiseSpec(kind, params, seed + i)
        noisy = spec.apply(clean)
        base = {"noise": kind, "noise_params": _params_text(spec.params), "seed": spec.seed}
        noisy_cs = harris(noisy, harris_params)
        res.corner_sets[(kind, 0)] = noisy_cs
        noisy_rows.append({
            "image": "noisy", **base, "wavelet": "", "rule": "", "levels": "",
            "corners": noisy_cs.count, **hrow,
        })
        p_noisy = psnr(clean, noisy)
        for level in levels:
            den, _ = denoise(noisy, level, rule)
            cs = harris(den, harris_params)
            res.images[(kind, level)] = (noisy, den)
            res.corner_sets[(kind, level)] = cs
            cfg = {**base, "wavelet": "haar", "rule": rule.label, "levels": level}
            res.psnr_rows.append({
                **cfg, "psnr_noisy": p_noisy, "psnr_denoised": psnr(clean, den),
                "mse_denoised": mse(clean, den), **hrow,
            })
            denoised_rows.append({"image": "denoised", **cfg, "corners": cs.count, **hrow})

    res.corner_rows += noisy_rows + denoised_rows
    return res


def write_rows(rows, path, fields):
    """Comma-separated, header row, LF endings, floats at shortest round-trip precision."""
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields) + [k for k in HarrisParams().as_row()],
                           lineterminator="\n", extrasaction="raise")
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
