"""Window-based reference denoisers: median, relaxed median, and mean.

All three share one sliding-window engine with replicate padding, so outputs
keep the input size and the relaxed median degenerates exactly to the plain
median (relax_rank 0) or the identity (maximal relax_rank).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image import GrayImage

METHODS = ("median", "relaxed-median", "mean")


@dataclass(frozen=True)
class DenoiseSpec:
    """Filter selection: method, odd window size, and the relaxation rank
    (relaxed-median only: a pixel within ranks median +/- relax_rank of its
    window's order statistics is kept unchanged)."""

    method: str
    window: int = 3
    relax_rank: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        max_rank = (self.window * self.window - 1) // 2
        if not (0 <= self.relax_rank <= max_rank):
            raise ValueError(
                f"relax_rank must lie in [0, {max_rank}] for window {self.window}, "
                f"got {self.relax_rank}"
            )


def denoise(image: GrayImage, spec: DenoiseSpec) -> GrayImage:
    """Filter an image with the selected window method (replicate padding)."""
    w = spec.window
    if image.height < w or image.width < w:
        raise ValueError(
            f"window {w}x{w} is larger than the image {image.width}x{image.height}"
        )
    half = w // 2
    padded = np.pad(image.pixels, half, mode="edge")
    windows = sliding_window_view(padded, (w, w)).reshape(image.height, image.width, w * w)
    n = w * w
    if spec.method == "mean":
        sums = windows.sum(axis=2, dtype=np.int64)
        out = (2 * sums + n) // (2 * n)  # exact round-half-up in integers
        return GrayImage(out.astype(np.uint8))
    ordered = np.sort(windows, axis=2)
    mid = (n - 1) // 2
    median = ordered[:, :, mid]
    if spec.method == "median":
        return GrayImage(median)
    low = ordered[:, :, mid - spec.relax_rank]
    high = ordered[:, :, mid + spec.relax_rank]
    keep = (image.pixels >= low) & (image.pixels <= high)
    return GrayImage(np.where(keep, image.pixels, median))
