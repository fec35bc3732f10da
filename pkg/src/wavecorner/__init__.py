"""Wavelet shrinkage denoising and Harris corner detection for grayscale images."""

__version__ = "0.1.0"
