"""No-reference image quality scoring from the directional entropy of
threshold bit-planes, with the degradation and denoising tooling needed to
evaluate noise-reduction methods end to end."""

__version__ = "0.1.0"

from .denoise import METHODS, DenoiseSpec, denoise
from .entropy import (
    AnalysisConfig,
    AnisotropyProfile,
    LevelAnisotropy,
    ProbabilityMap,
    analyze,
    analyze_stack_slow,
    level_anisotropy,
    level_directional_entropy,
    probability_map,
    rank,
    renyi_entropy,
)
from .image import PEAK, GrayImage, PgmError, QualityScore, load_pgm, mse, psnr, save_pgm
from .kernels import (
    DEFAULT_ANGLES,
    DirectionalKernel,
    OrientationSet,
    kernel_matrix,
    make_kernel,
)
from .noise import KINDS, CalibrationError, NoiseSpec, calibrate, degrade
from .stack import LEVELS, BinaryLevel, Stack, StackingError, decompose, reconstruct

__all__ = [
    "__version__",
    "PEAK",
    "LEVELS",
    "GrayImage",
    "QualityScore",
    "PgmError",
    "load_pgm",
    "save_pgm",
    "mse",
    "psnr",
    "BinaryLevel",
    "Stack",
    "StackingError",
    "decompose",
    "reconstruct",
    "DEFAULT_ANGLES",
    "DirectionalKernel",
    "OrientationSet",
    "make_kernel",
    "kernel_matrix",
    "AnalysisConfig",
    "ProbabilityMap",
    "LevelAnisotropy",
    "AnisotropyProfile",
    "renyi_entropy",
    "probability_map",
    "level_directional_entropy",
    "level_anisotropy",
    "analyze",
    "analyze_stack_slow",
    "rank",
    "KINDS",
    "NoiseSpec",
    "CalibrationError",
    "degrade",
    "calibrate",
    "METHODS",
    "DenoiseSpec",
    "denoise",
]
