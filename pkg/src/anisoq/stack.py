"""Threshold decomposition of a gray image into 255 nested binary levels.

Level ``l`` holds a 1 wherever the source pixel is >= ``l``; summing all
levels recovers the image exactly, and consecutive levels are bit-wise nested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .image import GrayImage

LEVELS = 255
_BLOCK = 64  # levels materialized per chunk in bulk operations


class StackingError(ValueError):
    """Bit-plane nesting (level l+1 must be a subset of level l) is violated."""


@dataclass(frozen=True)
class BinaryLevel:
    """One thresholded bit-plane: ``bits[k]`` is true iff source pixel >= level."""

    level: int
    bits: np.ndarray  # (height, width) bool, read-only

    def __post_init__(self):
        if not (1 <= self.level <= LEVELS):
            raise ValueError(f"level must be in [1, {LEVELS}], got {self.level}")
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.dtype != np.bool_:
            raise ValueError("bits must be a 2-D boolean raster")
        bits = bits.copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


class Stack:
    """Logical view of the 255 threshold bit-planes of one image.

    Planes decomposed from an image are materialized on demand, so holding a
    Stack costs one uint8 raster, not 255 boolean ones.
    """

    __slots__ = ("width", "height", "_source", "_planes")

    def __init__(self, *, source=None, planes=None):
        if (source is None) == (planes is None):
            raise ValueError("exactly one of source/planes must be given")
        self._source = source
        self._planes = planes
        shape = source.shape if source is not None else planes.shape[1:]
        self.height, self.width = int(shape[0]), int(shape[1])

    @property
    def source_dims(self) -> tuple[int, int]:
        return (self.width, self.height)

    @classmethod
    def from_levels(cls, levels: Iterable) -> "Stack":
        """Build a stack from 255 explicit planes (BinaryLevel or bool arrays),
        given in ascending level order. Nesting is *not* checked here; it is
        verified by reconstruct."""
        arrays = []
        for i, entry in enumerate(levels):
            bits = entry.bits if isinstance(entry, BinaryLevel) else np.asarray(entry)
            if isinstance(entry, BinaryLevel) and entry.level != i + 1:
                raise ValueError(f"expected level {i + 1} at position {i}, got {entry.level}")
            if bits.ndim != 2 or bits.dtype != np.bool_:
                raise ValueError("each plane must be a 2-D boolean raster")
            arrays.append(bits)
        if len(arrays) != LEVELS:
            raise ValueError(f"expected {LEVELS} planes, got {len(arrays)}")
        planes = np.stack(arrays, axis=0)
        if planes.shape[1] < 1 or planes.shape[2] < 1:
            raise ValueError("planes must be at least 1x1")
        planes.setflags(write=False)
        return cls(planes=planes)

    def _block(self, lo: int, hi: int) -> np.ndarray:
        """Planes for levels lo..hi inclusive, shape (hi-lo+1, H, W) bool."""
        if self._planes is not None:
            return self._planes[lo - 1 : hi]
        thresholds = np.arange(lo, hi + 1, dtype=np.uint8).reshape(-1, 1, 1)
        return self._source[None, :, :] >= thresholds

    def level(self, level: int) -> BinaryLevel:
        if not (1 <= level <= LEVELS):
            raise ValueError(f"level must be in [1, {LEVELS}], got {level}")
        return BinaryLevel(level, self._block(level, level)[0])

    def levels(self) -> Iterator[BinaryLevel]:
        for l in range(1, LEVELS + 1):
            yield self.level(l)

    def __iter__(self) -> Iterator[BinaryLevel]:
        return self.levels()

    def __len__(self) -> int:
        return LEVELS


def decompose(image: GrayImage) -> Stack:
    """Threshold-decompose an image into its stack of 255 binary levels."""
    return Stack(source=image.pixels)


def _check_nested(lower_block: np.ndarray, upper_block: np.ndarray, first_level: int) -> None:
    # Planes at levels first_level.. vs first_level+1..; nesting demands upper <= lower.
    ok = upper_block <= lower_block
    if not bool(np.all(ok)):
        bad = int(np.argmin(np.all(ok, axis=(1, 2))))
        raise StackingError(
            f"nesting violated between levels {first_level + bad} and {first_level + bad + 1}"
        )


def reconstruct(stack: Stack) -> GrayImage:
    """Sum the 255 bit-planes back into a gray image.

    Verifies the nesting invariant along the way and raises ``StackingError``
    on the first violation. For any decomposed image this is an exact inverse.
    """
    total = np.zeros((stack.height, stack.width), dtype=np.uint16)
    prev = None
    for lo in range(1, LEVELS + 1, _BLOCK):
        hi = min(lo + _BLOCK - 1, LEVELS)
        block = stack._block(lo, hi)
        if prev is not None:
            _check_nested(prev[None, :, :], block[:1], lo - 1)
        if block.shape[0] > 1:
            _check_nested(block[:-1], block[1:], lo)
        total += block.sum(axis=0, dtype=np.uint16)
        prev = block[-1]
    return GrayImage(total.astype(np.uint8))
