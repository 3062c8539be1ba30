"""Tests for the seeded test families in testfunctions.py"""
import numpy as np
import pytest

from sampling import Grid1D, Grid2D, lp_norm
from testfunctions import box, gaussian, gaussian_2d, random_family, sparse_coefficients, triangle


class TestRandomFamily:
    """Test suite for random_family()"""

    def test_reproducible(self, shannon, window):
        first = random_family(shannon, window, seed=7, trials=2)
        second = random_family(shannon, window, seed=7, trials=2)

        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)
        print("✓ Test passed: same seed, same family")

    def test_seed_changes_family(self, shannon, window):
        a = random_family(shannon, window, seed=7, trials=1)[0]
        b = random_family(shannon, window, seed=8, trials=1)[0]

        assert not np.allclose(a.values, b.values)
        print("✓ Test passed: different seeds differ")

    def test_trials_are_independent_streams(self, shannon, window):
        short = random_family(shannon, window, seed=7, trials=2)
        long = random_family(shannon, window, seed=7, trials=5)

        np.testing.assert_array_equal(short[1].values, long[1].values)
        assert len(long) == 5
        print("✓ Test passed: adding trials keeps the earlier ones")

    def test_normalized(self, family):
        for F in family:
            assert lp_norm(F, 2) == pytest.approx(1.0)
        print("✓ Test passed: unit L2 norm")


class TestWitnesses:
    """Test suite for the fixed test functions"""

    def test_box_has_unit_mass(self):
        grid = Grid1D.symmetric(2.0, 1 / 64)

        assert np.sum(box(grid).values).real * grid.spacing == pytest.approx(1.0)
        print("✓ Test passed: edge samples weighted 1/2")

    def test_triangle_peak(self):
        grid = Grid1D.symmetric(2.0, 1 / 4)

        values = triangle(grid).values.real
        assert values[grid.index_of(0.0)] == pytest.approx(1.0)
        assert values[grid.index_of(1.0)] == pytest.approx(0.0)
        print("✓ Test passed: hat of height 1 and half-width 1")

    def test_gaussians(self):
        grid = Grid1D.symmetric(6.0, 1 / 32)

        assert lp_norm(gaussian(grid, normalize=True), 2) == pytest.approx(1.0)
        assert gaussian(grid).values[grid.index_of(0.0)] == pytest.approx(1.0)
        G = gaussian_2d(Grid2D.symmetric(1.0, 1.0, 0.25))
        assert G.values[4, 4] == pytest.approx(1.0)
        print("✓ Test passed: Gaussian witnesses")

    def test_sparse_coefficients(self, hat_pou):
        c = sparse_coefficients(hat_pou, 10, seed=3)

        assert np.count_nonzero(c.values) == 10
        np.testing.assert_array_equal(c.values, sparse_coefficients(hat_pou, 10, seed=3).values)
        assert len(c) == len(hat_pou)
        print("✓ Test passed: ten seeded nonzeros on the lattice")
