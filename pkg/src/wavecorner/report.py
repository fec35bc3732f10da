"""Matplotlib figures written next to the CSV outputs."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}

NOISE_LABELS = {"gaussian": "Gaussian", "speckle": "Speckle", "salt_pepper": "Salt & pepper"}


def save(fig, path):
    # no timestamp/software metadata so reruns give identical files
    fig.savefig(path, metadata={"Software": None}, bbox_inches="tight")
    plt.close(fig)
    return path


def image_panels(images, titles, path, corner_sets=None):
    """Row of grayscale panels, optionally with corner markers."""
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(images), figsize=(3.2 * len(images), 3.4))
        axes = np.atleast_1d(axes)
        for i, (ax, img, title) in enumerate(zip(axes, images, titles)):
            ax.imshow(img.pixels, cmap="gray", vmin=0, vmax=255, interpolation="nearest")
            if corner_sets is not None and corner_sets[i] is not None:
                cs = corner_sets[i]
                if cs.count:
                    xs, ys, _ = zip(*cs.corners)
                    ax.plot(xs, ys, "+", color="red", markersize=3, markeredgewidth=0.6)
                title = f"{title} ({cs.count} corners)"
            ax.set_title(title)
            ax.set_axis_off()
        fig.tight_layout()
        return save(fig, path)


def _grouped_bars(ax, groups, series, values, ylabel):
    width = 0.8 / len(series)
    x = np.arange(len(groups))
    for j, name in enumerate(series):
        bars = ax.bar(x + (j - (len(series) - 1) / 2) * width, values[j], width, label=name)
        ax.bar_label(bars, fmt="%.4g", fontsize=6, padding=1)
    ax.set_xticks(x, groups)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)


def psnr_chart(psnr_rows, path):
    kinds = list(dict.fromkeys(r["noise"] for r in psnr_rows))
    levels = sorted({r["levels"] for r in psnr_rows})
    lookup = {(r["noise"], r["levels"]): r for r in psnr_rows}
    series = ["noisy"] + [f"level {lv}" for lv in levels]
    values = [[lookup[(k, levels[0])]["psnr_noisy"] for k in kinds]]
    values += [[lookup[(k, lv)]["psnr_denoised"] for k in kinds] for lv in levels]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        _grouped_bars(ax, [NOISE_LABELS.get(k, k) for k in kinds], series, values, "PSNR (dB)")
        ax.set_title("PSNR against the clean image")
        return save(fig, path)


def corner_chart(corner_rows, path):
    original = next(r["corners"] for r in corner_rows if r["image"] == "original")
    kinds = list(dict.fromkeys(r["noise"] for r in corner_rows if r["image"] == "noisy"))
    levels = sorted({r["levels"] for r in corner_rows if r["image"] == "denoised"})
    noisy = {r["noise"]: r["corners"] for r in corner_rows if r["image"] == "noisy"}
    den = {(r["noise"], r["levels"]): r["corners"] for r in corner_rows if r["image"] == "denoised"}
    series = ["noisy"] + [f"denoised, level {lv}" for lv in levels]
    values = [[noisy[k] for k in kinds]] + [[den[(k, lv)] for k in kinds] for lv in levels]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        _grouped_bars(ax, [NOISE_LABELS.get(k, k) for k in kinds], series, values, "Harris corners")
        ax.axhline(original, color="black", linestyle="--", linewidth=0.8)
        ax.annotate(f"original: {original}", (0.01, original), xycoords=("axes fraction", "data"),
                    xytext=(0, 3), textcoords="offset points", fontsize=7)
        ax.set_title("Corner counts")
        return save(fig, path)


def bench_figures(clean, result, out_dir, kind="gaussian", level=2):
    """PSNR and corner-count charts plus image panels for one noise model."""
    paths = [
        psnr_chart(result.psnr_rows, os.path.join(out_dir, "bench_psnr.png")),
        corner_chart(result.corner_rows, os.path.join(out_dir, "bench_corners.png")),
    ]
    if (kind, level) in result.images:
        noisy, den = result.images[(kind, level)]
        label = NOISE_LABELS.get(kind, kind)
        titles = ["Original", f"Noisy ({label})", f"Denoised, level {level}"]
        paths.append(image_panels([clean, noisy, den], titles,
                                  os.path.join(out_dir, f"denoise_{kind}.png")))
        sets = [result.corner_sets["original"], result.corner_sets[(kind, 0)],
                result.corner_sets[(kind, level)]]
        paths.append(image_panels([clean, noisy, den], titles,
                                  os.path.join(out_dir, f"corners_{kind}.png"), corner_sets=sets))
    return paths
