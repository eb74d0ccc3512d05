"""Directional line masks that select the d lattice cells nearest a line
through the center of a d x d window at a given orientation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_ANGLES = (0.0, 30.0, 60.0, 90.0, 120.0, 150.0)

Offset = tuple[int, int]  # (dy, dx), dy in row direction


@dataclass(frozen=True)
class DirectionalKernel:
    """Binary line mask: exactly ``size`` marked cells, point-symmetric about
    the center, one per column for shallow orientations and one per row for
    steep ones."""

    size: int
    theta_deg: float
    offsets: tuple[Offset, ...]

    def __post_init__(self):
        d = self.size
        if d < 3 or d % 2 == 0:
            raise ValueError(f"kernel size must be odd and >= 3, got {d}")
        a = (d - 1) // 2
        offs = set(self.offsets)
        if len(self.offsets) != d or len(offs) != d:
            raise ValueError(f"kernel must mark exactly {d} distinct cells")
        if (0, 0) not in offs:
            raise ValueError("kernel must include the center cell")
        for dy, dx in offs:
            if abs(dy) > a or abs(dx) > a:
                raise ValueError(f"offset ({dy}, {dx}) outside the {d}x{d} window")
            if (-dy, -dx) not in offs:
                raise ValueError(f"offsets are not point-symmetric: ({dy}, {dx})")


@dataclass(frozen=True)
class OrientationSet:
    """Ordered orientations in degrees, distinct modulo 180."""

    angles: tuple[float, ...] = DEFAULT_ANGLES

    def __post_init__(self):
        normalized = tuple(float(a) % 180.0 for a in self.angles)
        if len(set(normalized)) != len(normalized):
            raise ValueError(f"duplicate orientations modulo 180: {self.angles}")
        object.__setattr__(self, "angles", normalized)

    def __len__(self) -> int:
        return len(self.angles)


def _round_half_away(v: float) -> int:
    # Deterministic tie-break: .5 rounds away from zero, keeping point symmetry.
    return math.floor(v + 0.5) if v >= 0.0 else math.ceil(v - 0.5)


def make_kernel(d: int, theta_deg: float) -> DirectionalKernel:
    """Build the d x d line mask for orientation ``theta_deg``.

    The orientation is normalized modulo 180 (the mask has period pi). For
    shallow lines (|tan theta| <= 1) one cell is chosen per column by rounding
    the line's height there; for steep lines one per row, rounding the line's
    horizontal position. Rounding ties go away from zero.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 3, got {d}")
    theta = float(theta_deg) % 180.0
    a = (d - 1) // 2
    rad = math.radians(theta)
    sin, cos = math.sin(rad), math.cos(rad)
    if abs(sin) <= abs(cos):
        slope = sin / cos
        offsets = tuple((_round_half_away(x * slope), x) for x in range(-a, a + 1))
    else:
        slope = cos / sin
        offsets = tuple((y, _round_half_away(y * slope)) for y in range(-a, a + 1))
    return DirectionalKernel(size=d, theta_deg=theta, offsets=offsets)


def kernel_matrix(kernel: DirectionalKernel) -> np.ndarray:
    """Dense d x d uint8 view: 1 at (a + dy, a + dx) for each offset."""
    d = kernel.size
    a = (d - 1) // 2
    mat = np.zeros((d, d), dtype=np.uint8)
    for dy, dx in kernel.offsets:
        mat[a + dy, a + dx] = 1
    return mat
