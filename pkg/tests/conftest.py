import numpy as np
import pytest

from anisoq import GrayImage

from scenes import SCENE_BUILDERS


def make_image(values) -> GrayImage:
    return GrayImage(np.asarray(values, dtype=np.uint8))


def random_image(rng, height, width) -> GrayImage:
    return GrayImage(rng.integers(0, 256, (height, width), dtype=np.uint8))


@pytest.fixture(scope="session")
def scenes() -> dict[str, GrayImage]:
    """The three 512x512 synthetic scenes, built once per session."""
    return {name: build() for name, build in SCENE_BUILDERS.items()}


@pytest.fixture(scope="session")
def small_scene(scenes) -> GrayImage:
    """A structured 128x128 crop for cheaper end-to-end tests."""
    return GrayImage(scenes["shapes"].pixels[:128, :128])
