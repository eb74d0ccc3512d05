"""Seeded image degradation (Gaussian, speckle, impulsive) and PSNR-targeted
calibration of the noise parameter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .image import GrayImage, psnr

KINDS = ("gaussian", "speckle", "impulsive")

CALIBRATION_TOL_DB = 0.2
CALIBRATION_MAX_STEPS = 64
_PARAM_CAP = 2.0**20


class CalibrationError(RuntimeError):
    """The requested PSNR cannot be reached; carries the best spec found."""

    def __init__(self, message: str, best_spec=None, best_psnr_db: float | None = None):
        super().__init__(message)
        self.best_spec = best_spec
        self.best_psnr_db = best_psnr_db


@dataclass(frozen=True)
class NoiseSpec:
    """Fully-seeded degradation: kind, strength parameter, and RNG seed.

    ``param`` is the additive sigma in gray levels (gaussian), the sigma of
    the multiplicative factor (speckle), or the corruption density in [0, 1]
    (impulsive).
    """

    kind: str
    param: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}, expected one of {KINDS}")
        if not (self.param >= 0.0) or math.isinf(self.param):
            raise ValueError(f"param must be finite and >= 0, got {self.param}")
        if self.kind == "impulsive" and self.param > 1.0:
            raise ValueError(f"impulsive density must be <= 1, got {self.param}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")


def _pixel_uniforms(seed: int, n: int) -> np.ndarray:
    # Counter-based stream (Philox): draw i is a pure function of (seed, i),
    # so the noise field is independent of traversal or parallel order.
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.random(n)


def degrade(image: GrayImage, spec: NoiseSpec) -> GrayImage:
    """Apply the degradation described by ``spec``; bit-deterministic.

    gaussian:  y = clamp(round(x + n)),      n ~ N(0, param^2) per pixel
    speckle:   y = clamp(round(x * (1 + n))), n ~ N(0, param^2) per pixel
    impulsive: pixel -> 0 with prob param/2, -> 255 with prob param/2
    """
    u = _pixel_uniforms(spec.seed, image.height * image.width).reshape(image.pixels.shape)
    if spec.kind == "impulsive":
        half = spec.param / 2.0
        out = image.pixels.copy()
        out[u < half] = 0
        out[u >= 1.0 - half] = 255
        return GrayImage(out)
    # Normal deviates via the inverse CDF keep each pixel a pure function of
    # its own uniform draw. Guard against u == 0.0 from the generator.
    normals = ndtri(np.maximum(u, 1e-300))
    x = image.pixels.astype(np.float64)
    if spec.kind == "gaussian":
        y = x + spec.param * normals
    else:
        y = x * (1.0 + spec.param * normals)
    return GrayImage(np.clip(np.rint(y), 0, 255).astype(np.uint8))


def _realized_psnr(image: GrayImage, kind: str, param: float, seed: int) -> float:
    return psnr(image, degrade(image, NoiseSpec(kind, param, seed))).psnr_db


def calibrate(image: GrayImage, kind: str, target_psnr_db: float, seed: int = 0) -> NoiseSpec:
    """Find a noise parameter whose realized PSNR is within 0.2 dB of target.

    Bisects on the parameter for the fixed seed; realized PSNR is
    non-increasing in the parameter, so bisection converges. Raises
    ``CalibrationError`` (carrying the best attempt) if the target lies below
    the floor reachable at maximum strength or cannot be approached closely
    enough, e.g. for near-lossless targets where rounding quantizes PSNR.
    """
    if math.isinf(target_psnr_db) or math.isnan(target_psnr_db):
        raise ValueError("target PSNR must be finite")
    NoiseSpec(kind, 0.0, seed)  # validate kind/seed

    best_param, best_psnr = 0.0, math.inf
    def consider(param: float, value: float):
        nonlocal best_param, best_psnr
        if abs(value - target_psnr_db) < abs(best_psnr - target_psnr_db):
            best_param, best_psnr = param, value

    hi = 1.0  # impulsive density is capped here; other kinds double upward
    hi_psnr = _realized_psnr(image, kind, hi, seed)
    consider(hi, hi_psnr)
    while hi_psnr > target_psnr_db:
        if kind == "impulsive" or hi >= _PARAM_CAP:
            raise CalibrationError(
                f"target {target_psnr_db} dB unreachable for {kind} noise; "
                f"best achieved {hi_psnr:.4f} dB at param {hi:.6g}",
                best_spec=NoiseSpec(kind, best_param, seed),
                best_psnr_db=best_psnr,
            )
        hi *= 2.0
        hi_psnr = _realized_psnr(image, kind, hi, seed)
        consider(hi, hi_psnr)

    lo = 0.0
    for _ in range(CALIBRATION_MAX_STEPS):
        mid = 0.5 * (lo + hi)
        value = _realized_psnr(image, kind, mid, seed)
        consider(mid, value)
        if abs(value - target_psnr_db) <= CALIBRATION_TOL_DB:
            return NoiseSpec(kind, mid, seed)
        if value > target_psnr_db:
            lo = mid
        else:
            hi = mid
    raise CalibrationError(
        f"calibration did not converge to {target_psnr_db} dB for {kind} noise; "
        f"best achieved {best_psnr:.4f} dB at param {best_param:.6g}",
        best_spec=NoiseSpec(kind, best_param, seed),
        best_psnr_db=best_psnr,
    )
