import numpy as np
import pytest

from anisoq import CalibrationError, GrayImage, NoiseSpec, calibrate, degrade, psnr

from conftest import random_image


class TestNoiseSpec:
    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown noise kind"):
            NoiseSpec("poisson", 1.0)

    def test_rejects_negative_param(self):
        with pytest.raises(ValueError):
            NoiseSpec("gaussian", -1.0)

    def test_rejects_impulsive_density_above_one(self):
        with pytest.raises(ValueError):
            NoiseSpec("impulsive", 1.5)

    def test_rejects_bad_seed(self):
        with pytest.raises(ValueError):
            NoiseSpec("gaussian", 1.0, seed=-1)
        with pytest.raises(ValueError):
            NoiseSpec("gaussian", 1.0, seed=2**64)


class TestDegrade:
    def test_zero_sigma_is_identity(self):
        rng = np.random.default_rng(0)
        img = random_image(rng, 20, 20)
        assert degrade(img, NoiseSpec("gaussian", 0.0, seed=1)) == img
        assert degrade(img, NoiseSpec("speckle", 0.0, seed=1)) == img
        assert degrade(img, NoiseSpec("impulsive", 0.0, seed=1)) == img

    def test_full_impulsive_corruption(self):
        rng = np.random.default_rng(1)
        img = random_image(rng, 30, 30)
        out = degrade(img, NoiseSpec("impulsive", 1.0, seed=2))
        assert set(np.unique(out.pixels)) <= {0, 255}

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        img = random_image(rng, 25, 25)
        for kind in ("gaussian", "speckle", "impulsive"):
            spec = NoiseSpec(kind, 0.3 if kind != "gaussian" else 12.0, seed=77)
            assert degrade(img, spec) == degrade(img, spec)

    def test_different_seeds_differ(self):
        rng = np.random.default_rng(3)
        img = random_image(rng, 25, 25)
        a = degrade(img, NoiseSpec("gaussian", 12.0, seed=1))
        b = degrade(img, NoiseSpec("gaussian", 12.0, seed=2))
        assert a != b

    def test_gaussian_unbiased_at_midgray(self):
        img = GrayImage(np.full((256, 256), 128, dtype=np.uint8))
        out = degrade(img, NoiseSpec("gaussian", 10.0, seed=9))
        assert abs(float(out.pixels.mean()) - 128.0) < 0.5

    def test_impulsive_corruption_fraction(self):
        n = 256 * 256
        img = GrayImage(np.full((256, 256), 128, dtype=np.uint8))
        for p in (0.05, 0.3):
            out = degrade(img, NoiseSpec("impulsive", p, seed=4))
            changed = int(np.count_nonzero(out.pixels != 128))
            sigma = (n * p * (1 - p)) ** 0.5
            assert abs(changed - n * p) <= 3 * sigma

    def test_speckle_scales_with_intensity(self):
        dark = GrayImage(np.full((64, 64), 30, dtype=np.uint8))
        bright = GrayImage(np.full((64, 64), 220, dtype=np.uint8))
        spec = NoiseSpec("speckle", 0.2, seed=5)
        dark_mse = psnr(dark, degrade(dark, spec)).mse
        bright_mse = psnr(bright, degrade(bright, spec)).mse
        assert bright_mse > dark_mse

    def test_realized_psnr_monotone_in_param(self, small_scene):
        for kind, grid in (
            ("gaussian", [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]),
            ("speckle", [0.02, 0.05, 0.1, 0.2, 0.4]),
            ("impulsive", [0.02, 0.05, 0.1, 0.3, 0.6, 1.0]),
        ):
            values = [
                psnr(small_scene, degrade(small_scene, NoiseSpec(kind, p, seed=6))).psnr_db
                for p in grid
            ]
            assert all(a >= b for a, b in zip(values, values[1:]))


class TestCalibrate:
    def test_high_psnr_target(self, small_scene):
        spec = calibrate(small_scene, "gaussian", 40.0, seed=7)
        realized = psnr(small_scene, degrade(small_scene, spec)).psnr_db
        assert abs(realized - 40.0) <= 0.2

    def test_ladder_targets(self, small_scene):
        for kind, target in (("gaussian", 17.25), ("speckle", 21.86), ("impulsive", 19.27)):
            spec = calibrate(small_scene, kind, target, seed=8)
            realized = psnr(small_scene, degrade(small_scene, spec)).psnr_db
            assert abs(realized - target) <= 0.2, (kind, realized)

    def test_unreachable_low_target(self, small_scene):
        with pytest.raises(CalibrationError) as err:
            calibrate(small_scene, "impulsive", 0.5, seed=9)
        assert err.value.best_psnr_db is not None

    def test_unreachable_quantized_target(self, small_scene):
        # around 200 dB a single changed pixel already overshoots the tolerance
        with pytest.raises(CalibrationError):
            calibrate(small_scene, "gaussian", 200.0, seed=10)

    def test_rejects_infinite_target(self, small_scene):
        with pytest.raises(ValueError):
            calibrate(small_scene, "gaussian", float("inf"), seed=11)
