import math

import numpy as np
import pytest

from anisoq import DEFAULT_ANGLES, DirectionalKernel, OrientationSet, kernel_matrix, make_kernel


def oracle_offsets(d, theta_deg):
    """Brute force: per column (shallow) or row (steep), the cell nearest the
    ideal line; distance ties prefer the cell farther from zero."""
    a = (d - 1) // 2
    rad = math.radians(theta_deg % 180.0)
    sin, cos = math.sin(rad), math.cos(rad)
    cells = set()
    if abs(sin) <= abs(cos):
        slope = sin / cos
        for x in range(-a, a + 1):
            target = x * slope
            dy = min(range(-a, a + 1), key=lambda c: (abs(c - target), -abs(c)))
            cells.add((dy, x))
    else:
        slope = cos / sin
        for y in range(-a, a + 1):
            target = y * slope
            dx = min(range(-a, a + 1), key=lambda c: (abs(c - target), -abs(c)))
            cells.add((y, dx))
    return cells


class TestMakeKernel:
    def test_horizontal(self):
        k = make_kernel(9, 0)
        assert set(k.offsets) == {(0, x) for x in range(-4, 5)}

    def test_vertical(self):
        k = make_kernel(9, 90)
        assert set(k.offsets) == {(y, 0) for y in range(-4, 5)}

    def test_main_diagonal(self):
        k = make_kernel(9, 45)
        assert set(k.offsets) == {(x, x) for x in range(-4, 5)}

    def test_thirty_degrees(self):
        k = make_kernel(9, 30)
        by_x = {dx: dy for dy, dx in k.offsets}
        assert [by_x[x] for x in range(-4, 5)] == [-2, -2, -1, -1, 0, 1, 1, 2, 2]

    @pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
    @pytest.mark.parametrize("theta", DEFAULT_ANGLES)
    def test_default_set_invariants(self, d, theta):
        k = make_kernel(d, theta)
        offs = set(k.offsets)
        assert len(offs) == d
        assert (0, 0) in offs
        assert all((-dy, -dx) in offs for dy, dx in offs)
        # one cell per dominant axis step
        rad = math.radians(theta)
        if abs(math.sin(rad)) <= abs(math.cos(rad)):
            assert sorted(dx for _, dx in offs) == list(range(-(d - 1) // 2, (d + 1) // 2))
        else:
            assert sorted(dy for dy, _ in offs) == list(range(-(d - 1) // 2, (d + 1) // 2))

    @pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
    @pytest.mark.parametrize("theta", DEFAULT_ANGLES)
    def test_matches_min_distance_oracle(self, d, theta):
        assert set(make_kernel(d, theta).offsets) == oracle_offsets(d, theta)

    def test_period_pi(self):
        for theta in np.arange(0.0, 180.0, 0.25):  # dyadic grid: theta+180 is exact
            assert make_kernel(9, theta) == make_kernel(9, theta + 180.0)

    def test_negative_angle_normalized(self):
        assert make_kernel(9, -30) == make_kernel(9, 150)

    def test_rejects_bad_size(self):
        with pytest.raises(ValueError):
            make_kernel(4, 0)
        with pytest.raises(ValueError):
            make_kernel(1, 0)


class TestKernelMatrix:
    def test_horizontal_3(self):
        mat = kernel_matrix(make_kernel(3, 0))
        assert mat.tolist() == [[0, 0, 0], [1, 1, 1], [0, 0, 0]]

    def test_vertical_3(self):
        mat = kernel_matrix(make_kernel(3, 90))
        assert mat.tolist() == [[0, 1, 0], [0, 1, 0], [0, 1, 0]]

    def test_diagonal_3_placement_rule(self):
        # offsets (x, x) land at (a + dy, a + dx): the raster main diagonal
        mat = kernel_matrix(make_kernel(3, 45))
        assert mat.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_always_d_ones(self):
        for d in (3, 5, 7, 9, 11):
            for theta in DEFAULT_ANGLES:
                assert int(kernel_matrix(make_kernel(d, theta)).sum()) == d


class TestDirectionalKernelValidation:
    def test_rejects_missing_center(self):
        with pytest.raises(ValueError, match="center"):
            DirectionalKernel(3, 0.0, ((-1, -1), (0, 1), (1, 0)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            DirectionalKernel(3, 0.0, ((0, 0), (0, 1), (1, 1)))

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError):
            DirectionalKernel(3, 0.0, ((0, 0), (0, 1), (0, -1), (1, 1), (-1, -1)))

    def test_rejects_out_of_window(self):
        with pytest.raises(ValueError):
            DirectionalKernel(3, 0.0, ((0, 0), (0, 2), (0, -2)))


class TestOrientationSet:
    def test_default(self):
        assert OrientationSet().angles == DEFAULT_ANGLES

    def test_normalizes_modulo_180(self):
        assert OrientationSet((190.0, -10.0)).angles == (10.0, 170.0)

    def test_rejects_duplicates_modulo_180(self):
        with pytest.raises(ValueError, match="duplicate"):
            OrientationSet((0.0, 180.0))
        with pytest.raises(ValueError, match="duplicate"):
            OrientationSet((30.0, 30.0))
