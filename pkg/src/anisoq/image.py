"""8-bit grayscale images, binary PGM (P5) file I/O, and MSE/PSNR metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

PEAK = 255


class PgmError(ValueError):
    """A PGM file could not be parsed (bad magic, header, maxval, or raster)."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable single-channel 8-bit raster.

    ``pixels`` is a read-only ``(height, width)`` uint8 array, row-major with
    the origin at the top-left.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D raster, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if arr.dtype == np.bool_ or not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"pixel values must be integers, got dtype {arr.dtype}")
        if arr.dtype != np.uint8:
            if int(arr.min()) < 0 or int(arr.max()) > PEAK:
                raise ValueError("pixel values must lie in [0, 255]")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True)
class QualityScore:
    """MSE plus PSNR in decibels; ``psnr_db`` is ``math.inf`` when MSE is 0."""

    mse: float
    psnr_db: float

    def __post_init__(self):
        if self.mse < 0:
            raise ValueError("mse must be non-negative")
        if (self.mse == 0) != math.isinf(self.psnr_db):
            raise ValueError("psnr_db must be infinite exactly when mse is zero")


def _next_token(data: bytes, idx: int) -> tuple[bytes, int]:
    # Whitespace and '#'-to-end-of-line comments may separate header tokens.
    size = len(data)
    while idx < size:
        b = data[idx]
        if b == 0x23:  # '#'
            while idx < size and data[idx] not in (0x0A, 0x0D):
                idx += 1
        elif b in (0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20):
            idx += 1
        else:
            break
    start = idx
    while idx < size and data[idx] not in (0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20, 0x23):
        idx += 1
    if start == idx:
        raise PgmError("malformed header: missing token")
    return data[start:idx], idx


def _int_token(data: bytes, idx: int, what: str) -> tuple[int, int]:
    token, idx = _next_token(data, idx)
    try:
        return int(token), idx
    except ValueError:
        raise PgmError(f"malformed header: bad {what} {token!r}") from None


def load_pgm(path) -> GrayImage:
    """Read a binary PGM (P5) file with maxval 255.

    Header comments are tolerated. Raises ``PgmError`` for a non-P5 magic,
    a malformed header, an unsupported maxval, or a truncated raster; missing
    files raise the usual ``OSError``.
    """
    data = Path(path).read_bytes()
    magic, idx = _next_token(data, 0)
    if magic != b"P5":
        if len(magic) == 2 and magic[:1] == b"P" and magic[1:2].isdigit():
            raise PgmError(f"unsupported PNM subtype {magic.decode('ascii')} (want P5)")
        raise PgmError("malformed header: not a PNM file")
    width, idx = _int_token(data, idx, "width")
    height, idx = _int_token(data, idx, "height")
    if width < 1 or height < 1:
        raise PgmError(f"malformed header: invalid dimensions {width}x{height}")
    maxval, idx = _int_token(data, idx, "maxval")
    if maxval != PEAK:
        raise PgmError(f"unsupported maxval {maxval} (want 255)")
    # Exactly one whitespace byte separates the header from the raster.
    if idx >= len(data) or data[idx] not in (0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20):
        raise PgmError("malformed header: missing raster separator")
    raster = data[idx + 1 : idx + 1 + width * height]
    if len(raster) < width * height:
        raise PgmError(
            f"truncated raster: expected {width * height} bytes, found {len(raster)}"
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels)


def save_pgm(image: GrayImage, path) -> None:
    """Write a binary PGM (P5) file; round-trips bit-exactly through load_pgm."""
    header = f"P5\n{image.width} {image.height}\n{PEAK}\n".encode("ascii")
    Path(path).write_bytes(header + image.pixels.tobytes())


def mse(reference: GrayImage, test: GrayImage) -> float:
    """Mean squared error between two images of identical dimensions."""
    if reference.pixels.shape != test.pixels.shape:
        raise ValueError(
            f"dimension mismatch: {reference.width}x{reference.height} "
            f"vs {test.width}x{test.height}"
        )
    diff = reference.pixels.astype(np.int64) - test.pixels.astype(np.int64)
    return float(np.sum(diff * diff)) / diff.size


def psnr(reference: GrayImage, test: GrayImage) -> QualityScore:
    """Peak signal-to-noise ratio in dB, with MAX = 255; infinite for equal images."""
    m = mse(reference, test)
    db = math.inf if m == 0.0 else 10.0 * math.log10(PEAK * PEAK / m)
    return QualityScore(mse=m, psnr_db=db)
