"""Command-line driver: ``wavecorner {denoise,corners,bench}``.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 validation error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass, field

from . import assets
from .bench import CORNER_FIELDS, PSNR_FIELDS, run_bench, write_rows
from .harris import HarrisParams, annotate, harris, write_corners_csv
from .image_io import GrayImage, PGMError, load_pgm, write_pgm
from .metrics import psnr
from .noise import NoiseSpec
from .shrink import STATS_FIELDS, ThresholdRule, denoise
from .wavelet import decompose, dump_subbands, max_levels

log = logging.getLogger("wavecorner")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VALIDATION = 0, 2, 3, 4
EMIT_CHOICES = ("denoised", "corners", "annotated", "stats")


class ValidationError(ValueError):
    pass


@dataclass
class RunConfig:
    input: str | None
    out_dir: str
    noise: NoiseSpec | None = None
    levels: int = 2
    rule: ThresholdRule = field(default_factory=ThresholdRule)
    harris: HarrisParams = field(default_factory=HarrisParams)
    seed: int = 0
    emit: frozenset = frozenset(EMIT_CHOICES)
    reference: str | None = None
    denoise_first: bool = False
    figures: bool = False
    binary: bool = True
    dump_subbands: bool = False

    def row(self) -> dict:
        """Parameter columns repeated on every CSV row."""
        return {
            "noise": self.noise.label if self.noise else "none",
            "seed": self.seed,
            "levels": self.levels,
            "rule": self.rule.label,
            **self.harris.as_row(),
        }


def _validate_paths(cfg: RunConfig, need_input=True):
    for path in (cfg.input, cfg.reference):
        if path is None:
            continue
        if not os.path.isfile(path):
            raise FileNotFoundError(f"no such file: {path}")
        if not os.access(path, os.R_OK):
            raise PermissionError(f"cannot read {path}")
    if need_input and cfg.input is None:
        raise ValidationError("--input is required")
    os.makedirs(cfg.out_dir, exist_ok=True)
    if not os.access(cfg.out_dir, os.W_OK):
        raise PermissionError(f"cannot write to {cfg.out_dir}")


def _check_levels(img: GrayImage, levels: int):
    if levels < 1 or min(img.width, img.height) < 2**levels:
        raise ValidationError(
            f"--levels {levels} is invalid for a {img.width}x{img.height} image "
            f"(allowed 1..{max_levels(img.width, img.height)})"
        )


def _prepare(cfg: RunConfig):
    """Load input and apply optional noise; returns (working image, clean reference or None)."""
    img = load_pgm(cfg.input)
    reference = load_pgm(cfg.reference) if cfg.reference else None
    if reference is not None and reference.shape != img.shape:
        raise ValidationError("--reference size differs from --input")
    if cfg.noise is not None:
        reference = reference or img
        img = cfg.noise.apply(img)
    return img, reference


def _out(cfg, name):
    return os.path.join(cfg.out_dir, name)


def cmd_denoise(cfg: RunConfig) -> dict:
    _validate_paths(cfg)
    img, reference = _prepare(cfg)
    _check_levels(img, cfg.levels)

    den, stats = denoise(img, cfg.levels, cfg.rule)
    if cfg.noise is not None:
        write_pgm(img, _out(cfg, "noisy.pgm"), cfg.binary)
    if "denoised" in cfg.emit:
        write_pgm(den, _out(cfg, "denoised.pgm"), cfg.binary)
    if "stats" in cfg.emit:
        with open(_out(cfg, "stats.csv"), "w", newline="") as fh:
            meta = cfg.row()
            w = csv.DictWriter(fh, fieldnames=[*STATS_FIELDS, *meta], lineterminator="\n")
            w.writeheader()
            for st in stats:
                w.writerow({**st.as_row(), **meta})
    if cfg.dump_subbands:
        for fname, lo, scale in dump_subbands(decompose(img, cfg.levels), _out(cfg, "subbands")):
            print(f"{fname}: value = (coefficient - {lo!r}) * {scale!r}")

    result = {"denoised": den, "stats": stats}
    if reference is not None:
        result["psnr_noisy"] = psnr(reference, img)
        result["psnr_denoised"] = psnr(reference, den)
        print(f"PSNR noisy    vs original: {result['psnr_noisy']:.4f} dB")
        print(f"PSNR denoised vs original: {result['psnr_denoised']:.4f} dB")
    if cfg.figures:
        from .report import image_panels
        images, titles = [img, den], ["Input", f"Denoised, level {cfg.levels}"]
        if reference is not None:
            images, titles = [reference, *images], ["Original", *titles]
        image_panels(images, titles, _out(cfg, "denoise.png"))
    return result


def cmd_corners(cfg: RunConfig) -> dict:
    _validate_paths(cfg)
    img, _ = _prepare(cfg)
    if cfg.denoise_first:
        _check_levels(img, cfg.levels)
        img, _ = denoise(img, cfg.levels, cfg.rule)
    if min(img.width, img.height) < 3:
        raise ValidationError("corner detection needs at least a 3x3 image")

    cs = harris(img, cfg.harris)
    meta = cfg.row()
    meta["denoised"] = int(cfg.denoise_first)
    if "corners" in cfg.emit:
        write_corners_csv(cs, _out(cfg, "corners.csv"), extra=meta)
    if "annotated" in cfg.emit:
        write_pgm(annotate(img, cs), _out(cfg, "annotated.pgm"), cfg.binary)
    if cfg.figures:
        from .report import image_panels
        image_panels([img], ["Harris corners"], _out(cfg, "corners.png"), corner_sets=[cs])
    print(f"corners: {cs.count}")
    return {"corners": cs}


def cmd_bench(cfg: RunConfig) -> dict:
    _validate_paths(cfg, need_input=False)
    clean = load_pgm(cfg.input) if cfg.input else assets.camera()
    for level in (1, 2):
        _check_levels(clean, level)
    res = run_bench(clean, cfg.seed, cfg.harris, rule=cfg.rule)
    write_rows(res.psnr_rows, _out(cfg, "bench_psnr.csv"), PSNR_FIELDS)
    write_rows(res.corner_rows, _out(cfg, "bench_corners.csv"), CORNER_FIELDS)
    for r in res.psnr_rows:
        print(f"{r['noise']:<12} level {r['levels']}  PSNR noisy {r['psnr_noisy']:.4f} dB"
              f"  denoised {r['psnr_denoised']:.4f} dB")
    for r in res.corner_rows:
        tag = r["image"] if r["image"] != "denoised" else f"denoised L{r['levels']}"
        print(f"{r['noise']:<12} {tag:<12} corners {r['corners']}")
    if cfg.figures:
        from .report import bench_figures
        bench_figures(clean, res, cfg.out_dir)
    return {"bench": res}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input PGM (bench defaults to the bundled camera image)")
    common.add_argument("--out-dir", default="out", help="directory for outputs (default: %(default)s)")
    common.add_argument("--noise", help="gaussian:MEAN:VAR | speckle:VAR | salt_pepper:DENSITY (unit scale)")
    common.add_argument("--levels", type=int, default=2)
    common.add_argument("--rule", default="bayes-soft", help="hard:L | soft:L | bayes-soft")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--reference", help="clean image for PSNR when --input is already noisy")
    common.add_argument("--harris-k", type=float, default=0.04)
    common.add_argument("--harris-sigma", type=float, default=1.0)
    common.add_argument("--harris-radius", type=int, default=3)
    common.add_argument("--harris-rel-threshold", type=float, default=0.01)
    common.add_argument("--harris-abs-threshold", type=float)
    common.add_argument("--nms-radius", type=int, default=1)
    common.add_argument("--emit", default=",".join(EMIT_CHOICES),
                        help="comma list from {%s}" % ",".join(EMIT_CHOICES))
    common.add_argument("--ascii", action="store_true", help="write P2 instead of P5")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="wavecorner",
        description="Denoise grayscale PGM images with Haar wavelet shrinkage and detect Harris corners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("denoise", parents=[common], help="Haar wavelet shrinkage denoising")
    p.add_argument("--dump-subbands", action="store_true", help="write rescaled sub-band PGMs")
    p.add_argument("--figures", action="store_true", help="also render a PNG comparison")
    p = sub.add_parser("corners", parents=[common], help="Harris corner detection")
    p.add_argument("--denoise", action="store_true", help="denoise before detecting corners")
    p.add_argument("--figures", action="store_true", help="also render a PNG with corner markers")
    p = sub.add_parser("bench", parents=[common], help="PSNR and corner-count tables")
    p.add_argument("--no-figures", dest="figures", action="store_false",
                   help="skip the PNG charts")
    return parser


def config_from_args(args) -> RunConfig:
    emit = frozenset(e.strip() for e in args.emit.split(",") if e.strip())
    unknown = emit - set(EMIT_CHOICES)
    if unknown:
        raise ValidationError(f"unknown --emit entries: {sorted(unknown)}")
    if args.levels < 1:
        raise ValidationError("--levels must be >= 1")
    return RunConfig(
        input=args.input,
        out_dir=args.out_dir,
        noise=NoiseSpec.parse(args.noise, args.seed) if args.noise else None,
        levels=args.levels,
        rule=ThresholdRule.parse(args.rule),
        harris=HarrisParams(
            k=args.harris_k,
            window_sigma=args.harris_sigma,
            window_radius=args.harris_radius,
            rel_threshold=args.harris_rel_threshold,
            abs_threshold=args.harris_abs_threshold,
            nms_radius=args.nms_radius,
        ),
        seed=args.seed,
        emit=emit,
        reference=args.reference,
        denoise_first=getattr(args, "denoise", False),
        figures=getattr(args, "figures", False),
        binary=not args.ascii,
        dump_subbands=getattr(args, "dump_subbands", False),
    )


COMMANDS = {"denoise": cmd_denoise, "corners": cmd_corners, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = config_from_args(args)
        COMMANDS[args.command](cfg)
    except (OSError, PGMError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
